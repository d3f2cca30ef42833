//! Exact-rational toolkit for multipartite no-signaling correlations.
//!
//! Behaviors are conditional probability tables `P(outputs | inputs)` with
//! arbitrary-precision rational entries. Every verdict (validity,
//! no-signaling, local or time-ordered bi-local membership, Hardy
//! witnesses, game values) is computed exactly, with linear-programming
//! certificates where a set-membership question is involved.

pub mod behavior;
pub mod error;
pub mod games;
pub mod hardy;
pub mod io;
pub mod linalg;
pub mod local;
pub mod lp;
pub mod optimize;
pub mod paper_data;
pub mod rational;
pub mod tobl;
pub mod wirings;

pub use behavior::{Behavior, Cell, PartyPermutation, Scenario};
pub use error::{Error, Result};
pub use rational::Rational;
