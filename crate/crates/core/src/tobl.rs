//! Time-ordered bi-local (TOBL) models for three parties with binary
//! inputs and outputs.
//!
//! For a cut `S | L F` the solo party `S` is classically correlated with
//! the pair, while inside the pair either `L` answers first and `F` may
//! read `L`'s input (forward), or `F` answers first and `L` may read `F`'s
//! input (backward). Both orderings must reproduce the behavior with one
//! shared weight distribution and one shared solo assignment per term.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::behavior::{Behavior, PartyPermutation, Scenario};
use crate::error::{Error, Result};
use crate::local::require_no_signaling;
use crate::lp::{self, FarkasCertificate, LinearProgram, LpOutcome};
use crate::rational::Rational;

/// A cut separating one party from an ordered pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    pub solo: usize,
    pub leader: usize,
    pub follower: usize,
}

const PARTY_NAMES: [char; 3] = ['A', 'B', 'C'];

impl Bipartition {
    pub const A_BC: Bipartition = Bipartition { solo: 0, leader: 1, follower: 2 };
    pub const B_AC: Bipartition = Bipartition { solo: 1, leader: 0, follower: 2 };
    pub const C_AB: Bipartition = Bipartition { solo: 2, leader: 0, follower: 1 };

    pub fn all() -> [Bipartition; 3] {
        [Bipartition::A_BC, Bipartition::B_AC, Bipartition::C_AB]
    }

    pub fn new(solo: usize, leader: usize, follower: usize) -> Result<Self> {
        let mut parties = [solo, leader, follower];
        parties.sort_unstable();
        if parties != [0, 1, 2] {
            return Err(Error::Index(format!("({solo}|{leader}{follower}) is not a cut of three parties")));
        }
        Ok(Bipartition { solo, leader, follower })
    }

    /// Relabeling that sends this cut to `A | B C`.
    pub fn to_canonical(&self) -> PartyPermutation {
        let mut mapping = vec![0; 3];
        mapping[self.solo] = 0;
        mapping[self.leader] = 1;
        mapping[self.follower] = 2;
        PartyPermutation::new(mapping).expect("cut covers all parties")
    }

    pub fn permuted(&self, perm: &PartyPermutation) -> Bipartition {
        Bipartition {
            solo: perm.image(self.solo),
            leader: perm.image(self.leader),
            follower: perm.image(self.follower),
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}{}", PARTY_NAMES[self.solo], PARTY_NAMES[self.leader], PARTY_NAMES[self.follower])
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cut {text:?} is not of the form A|BC"));
        let (solo, pair) = text.trim().split_once('|').ok_or_else(bad)?;
        let index = |c: char| PARTY_NAMES.iter().position(|&n| n == c.to_ascii_uppercase()).ok_or_else(bad);
        let solo: Vec<char> = solo.chars().collect();
        let pair: Vec<char> = pair.chars().collect();
        if solo.len() != 1 || pair.len() != 2 {
            return Err(bad());
        }
        Bipartition::new(index(solo[0])?, index(pair[0])?, index(pair[1])?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Leader answers from its own input; follower sees both inputs.
    Forward,
    /// Follower answers from its own input; leader sees both inputs.
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "B->C",
            Direction::Backward => "B<-C",
        })
    }
}

/// Deterministic strategy of the ordered pair for one time order.
///
/// Forward: `first[y] = b_y`, `second[2y+z] = c_yz`.
/// Backward: `first[z] = c_z`, `second[2y+z] = b_yz`.
/// The party answering first never reads the other input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairStrategy {
    pub direction: Direction,
    pub first: [u8; 2],
    pub second: [u8; 4],
}

impl PairStrategy {
    pub fn from_index(direction: Direction, index: usize) -> Self {
        let bit = |k: usize| ((index >> k) & 1) as u8;
        PairStrategy { direction, first: [bit(5), bit(4)], second: [bit(3), bit(2), bit(1), bit(0)] }
    }

    pub fn index(&self) -> usize {
        let mut idx = 0usize;
        for &bit in self.first.iter().chain(&self.second) {
            idx = idx * 2 + bit as usize;
        }
        idx
    }

    /// `(b, c)` on inputs `(y, z)`.
    pub fn outputs(&self, y: usize, z: usize) -> (usize, usize) {
        let joint = self.second[2 * y + z] as usize;
        match self.direction {
            Direction::Forward => (self.first[y] as usize, joint),
            Direction::Backward => (joint, self.first[z] as usize),
        }
    }

    fn is_binary(&self) -> bool {
        self.first.iter().chain(&self.second).all(|&b| b <= 1)
    }
}

/// One λ row of a single-direction table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermHalf {
    pub weight: Rational,
    /// `a_x` for `x = 0, 1`.
    pub solo: [u8; 2],
    pub pair: PairStrategy,
}

impl TermHalf {
    fn add_to(&self, table: &mut [Rational]) {
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let (b, c) = self.pair.outputs(y, z);
                    let a = self.solo[x] as usize;
                    table[((x << 2) | (y << 1) | z) * 8 + ((a << 2) | (b << 1) | c)] += &self.weight;
                }
            }
        }
    }
}

/// One λ of a coupled model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToblTerm {
    pub weight: Rational,
    pub solo: [u8; 2],
    pub forward: PairStrategy,
    pub backward: PairStrategy,
}

/// Both directional halves of a TOBL model, written in the cut's own
/// frame (solo party first, then leader, then follower).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToblDecomposition {
    pub bipartition: Bipartition,
    pub forward: Vec<TermHalf>,
    pub backward: Vec<TermHalf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionIssue {
    LengthMismatch { forward: usize, backward: usize },
    NegativeWeight { lambda: usize, direction: Direction },
    WeightSum { direction: Direction, sum: Rational },
    WeightMismatch { lambda: usize },
    SoloMismatch { lambda: usize },
    WrongDirection { lambda: usize, expected: Direction },
    NonBinary { lambda: usize, direction: Direction },
}

impl fmt::Display for DecompositionIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionIssue::LengthMismatch { forward, backward } => {
                write!(f, "forward table has {forward} terms, backward has {backward}")
            }
            DecompositionIssue::NegativeWeight { lambda, direction } => {
                write!(f, "negative weight at lambda={} ({direction})", lambda + 1)
            }
            DecompositionIssue::WeightSum { direction, sum } => {
                write!(f, "{direction} weights sum to {sum}")
            }
            DecompositionIssue::WeightMismatch { lambda } => {
                write!(f, "lambda={} has different weights in the two directions", lambda + 1)
            }
            DecompositionIssue::SoloMismatch { lambda } => {
                write!(f, "lambda={} has different solo assignments in the two directions", lambda + 1)
            }
            DecompositionIssue::WrongDirection { lambda, expected } => {
                write!(f, "lambda={} is not a {expected} strategy", lambda + 1)
            }
            DecompositionIssue::NonBinary { lambda, direction } => {
                write!(f, "lambda={} ({direction}) has a non-binary output", lambda + 1)
            }
        }
    }
}

impl ToblDecomposition {
    pub fn from_terms(bipartition: Bipartition, terms: &[ToblTerm]) -> Self {
        let half = |pick: fn(&ToblTerm) -> PairStrategy| {
            terms.iter().map(|t| TermHalf { weight: t.weight.clone(), solo: t.solo, pair: pick(t) }).collect()
        };
        ToblDecomposition { bipartition, forward: half(|t| t.forward), backward: half(|t| t.backward) }
    }

    /// Paired terms; fails unless weights and solo assignments agree.
    pub fn terms(&self) -> Result<Vec<ToblTerm>> {
        let issues = validate_decomposition(self);
        if !issues.is_empty() {
            return Err(invalid(&issues));
        }
        Ok(self
            .forward
            .iter()
            .zip(&self.backward)
            .map(|(f, b)| ToblTerm { weight: f.weight.clone(), solo: f.solo, forward: f.pair, backward: b.pair })
            .collect())
    }
}

fn invalid(issues: &[DecompositionIssue]) -> Error {
    let listed: Vec<String> = issues.iter().map(ToString::to_string).collect();
    Error::InvalidDecomposition(listed.join("; "))
}

/// Itemized problems; empty means the decomposition is well formed.
pub fn validate_decomposition(decomp: &ToblDecomposition) -> Vec<DecompositionIssue> {
    let mut issues = Vec::new();
    if decomp.forward.len() != decomp.backward.len() {
        issues.push(DecompositionIssue::LengthMismatch {
            forward: decomp.forward.len(),
            backward: decomp.backward.len(),
        });
    }
    for (direction, half) in [(Direction::Forward, &decomp.forward), (Direction::Backward, &decomp.backward)] {
        let mut sum = Rational::zero();
        for (lambda, term) in half.iter().enumerate() {
            sum += &term.weight;
            if term.weight.is_negative() {
                issues.push(DecompositionIssue::NegativeWeight { lambda, direction });
            }
            if term.pair.direction != direction {
                issues.push(DecompositionIssue::WrongDirection { lambda, expected: direction });
            }
            if !term.pair.is_binary() || term.solo.iter().any(|&a| a > 1) {
                issues.push(DecompositionIssue::NonBinary { lambda, direction });
            }
        }
        if !sum.is_one() {
            issues.push(DecompositionIssue::WeightSum { direction, sum });
        }
    }
    for (lambda, (f, b)) in decomp.forward.iter().zip(&decomp.backward).enumerate() {
        if f.weight != b.weight {
            issues.push(DecompositionIssue::WeightMismatch { lambda });
        }
        if f.solo != b.solo {
            issues.push(DecompositionIssue::SoloMismatch { lambda });
        }
    }
    issues
}

/// The behavior produced by one direction of a valid decomposition, in the
/// original party labeling.
pub fn reconstruct(decomp: &ToblDecomposition, direction: Direction) -> Result<Behavior> {
    let issues = validate_decomposition(decomp);
    if !issues.is_empty() {
        return Err(invalid(&issues));
    }
    let half = match direction {
        Direction::Forward => &decomp.forward,
        Direction::Backward => &decomp.backward,
    };
    let mut table = vec![Rational::zero(); 64];
    for term in half {
        term.add_to(&mut table);
    }
    let canonical = Behavior::new(Scenario::tripartite(), table)?;
    canonical.permute(&decomp.bipartition.to_canonical().inverse())
}

pub(crate) const SOLO_STRATEGIES: usize = 4;
pub(crate) const PAIR_STRATEGIES: usize = 64;
/// Columns of the coupled program: solo × forward × backward.
pub const TOBL_COLUMNS: usize = SOLO_STRATEGIES * PAIR_STRATEGIES * PAIR_STRATEGIES;

fn solo_from_index(index: usize) -> [u8; 2] {
    [((index >> 1) & 1) as u8, (index & 1) as u8]
}

/// For column `(solo, forward, backward)`: the 8 forward-block cells and
/// the 8 backward-block cells (0..64, canonical frame) it reproduces.
pub(crate) fn tobl_column_cells(column: usize) -> ([usize; 8], [usize; 8]) {
    let solo = solo_from_index(column / (PAIR_STRATEGIES * PAIR_STRATEGIES));
    let forward = PairStrategy::from_index(Direction::Forward, (column / PAIR_STRATEGIES) % PAIR_STRATEGIES);
    let backward = PairStrategy::from_index(Direction::Backward, column % PAIR_STRATEGIES);
    let mut f_cells = [0; 8];
    let mut b_cells = [0; 8];
    for input in 0..8 {
        let (x, y, z) = (input >> 2, (input >> 1) & 1, input & 1);
        let a = solo[x] as usize;
        let (fb, fc) = forward.outputs(y, z);
        let (bb, bc) = backward.outputs(y, z);
        f_cells[input] = input * 8 + ((a << 2) | (fb << 1) | fc);
        b_cells[input] = input * 8 + ((a << 2) | (bb << 1) | bc);
    }
    (f_cells, b_cells)
}

fn tobl_term(column: usize, weight: Rational) -> ToblTerm {
    ToblTerm {
        weight,
        solo: solo_from_index(column / (PAIR_STRATEGIES * PAIR_STRATEGIES)),
        forward: PairStrategy::from_index(Direction::Forward, (column / PAIR_STRATEGIES) % PAIR_STRATEGIES),
        backward: PairStrategy::from_index(Direction::Backward, column % PAIR_STRATEGIES),
    }
}

fn require_tripartite(behavior: &Behavior) -> Result<()> {
    if !behavior.scenario().is_tripartite_binary() {
        return Err(Error::ScenarioMismatch(format!(
            "TOBL models need three parties with two inputs and two outputs, got {}",
            behavior.scenario()
        )));
    }
    Ok(())
}

/// Coupled feasibility program for the cut: 16,384 columns
/// `q(solo, forward, backward)` and two blocks of 64 rows, the forward
/// block reproducing every cell and the backward block doing the same
/// with the same `q`.
pub fn tobl_lp(behavior: &Behavior, bipartition: Bipartition) -> Result<LinearProgram> {
    require_tripartite(behavior)?;
    let canonical = behavior.permute(&bipartition.to_canonical())?;
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); 128];
    for column in 0..TOBL_COLUMNS {
        let (f_cells, b_cells) = tobl_column_cells(column);
        for cell in f_cells {
            rows[cell].push((column, Rational::one()));
        }
        for cell in b_cells {
            rows[64 + cell].push((column, Rational::one()));
        }
    }
    let mut program = LinearProgram::new(TOBL_COLUMNS);
    for (i, row) in rows.into_iter().enumerate() {
        program.add_equality(row, canonical.table()[i % 64].clone())?;
    }
    Ok(program)
}

/// Columns of the marginal program: `m_F(solo, forward)` for 4 × 64 pairs,
/// then `m_B(solo, backward)` for the same.
pub const MARGINAL_COLUMNS: usize = 2 * SOLO_STRATEGIES * PAIR_STRATEGIES;
const MARGINAL_HALF: usize = SOLO_STRATEGIES * PAIR_STRATEGIES;

/// Canonical cells hit by one marginal column, and the reproduction
/// block (0 forward, 1 backward) they belong to.
fn marginal_column_cells(column: usize) -> (usize, [usize; 8]) {
    let block = column / MARGINAL_HALF;
    let direction = if block == 0 { Direction::Forward } else { Direction::Backward };
    let solo = solo_from_index((column % MARGINAL_HALF) / PAIR_STRATEGIES);
    let pair = PairStrategy::from_index(direction, column % PAIR_STRATEGIES);
    let mut cells = [0; 8];
    for (input, slot) in cells.iter_mut().enumerate() {
        let (x, y, z) = (input >> 2, (input >> 1) & 1, input & 1);
        let (b, c) = pair.outputs(y, z);
        *slot = input * 8 + (((solo[x] as usize) << 2) | (b << 1) | c);
    }
    (block, cells)
}

/// Rows of the marginal program with columns shifted by `offset`: 128
/// reproduction rows (forward block, then backward) and 4 rows equating
/// the forward and backward mass of each solo strategy.
pub(crate) fn marginal_rows(offset: usize) -> Vec<Vec<(usize, Rational)>> {
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); 128 + SOLO_STRATEGIES];
    for column in 0..MARGINAL_COLUMNS {
        let (block, cells) = marginal_column_cells(column);
        for cell in cells {
            rows[64 * block + cell].push((offset + column, Rational::one()));
        }
        let sign = if block == 0 { Rational::one() } else { -Rational::one() };
        rows[128 + (column % MARGINAL_HALF) / PAIR_STRATEGIES].push((offset + column, sign));
    }
    rows
}

/// Feasibility program equivalent to [`tobl_lp`] over the per-solo
/// marginals of the coupled weights. Equal forward and backward mass per
/// solo strategy is exactly what a coupling needs.
pub fn tobl_marginal_lp(behavior: &Behavior, bipartition: Bipartition) -> Result<LinearProgram> {
    require_tripartite(behavior)?;
    let canonical = behavior.permute(&bipartition.to_canonical())?;
    let mut program = LinearProgram::new(MARGINAL_COLUMNS);
    for (i, row) in marginal_rows(0).into_iter().enumerate() {
        let rhs = if i < 128 { canonical.table()[i % 64].clone() } else { Rational::zero() };
        program.add_equality(row, rhs)?;
    }
    Ok(program)
}

/// Couples marginal weights into paired terms, north-west corner rule per
/// solo strategy.
pub(crate) fn couple_marginals(bipartition: Bipartition, weights: &[Rational]) -> Result<ToblDecomposition> {
    let mut terms = Vec::new();
    for solo in 0..SOLO_STRATEGIES {
        let positive = |block: usize| -> Vec<(usize, Rational)> {
            (0..PAIR_STRATEGIES)
                .map(|pair| (pair, weights[block * MARGINAL_HALF + solo * PAIR_STRATEGIES + pair].clone()))
                .filter(|(_, w)| w.is_positive())
                .collect()
        };
        let (mut forward, mut backward) = (positive(0), positive(1));
        let (mut i, mut j) = (0, 0);
        while i < forward.len() && j < backward.len() {
            let take = forward[i].1.clone().min(backward[j].1.clone());
            terms.push(ToblTerm {
                weight: take.clone(),
                solo: solo_from_index(solo),
                forward: PairStrategy::from_index(Direction::Forward, forward[i].0),
                backward: PairStrategy::from_index(Direction::Backward, backward[j].0),
            });
            forward[i].1 -= &take;
            backward[j].1 -= &take;
            if forward[i].1.is_zero() {
                i += 1;
            }
            if backward[j].1.is_zero() {
                j += 1;
            }
        }
        if i < forward.len() || j < backward.len() {
            return Err(Error::Internal(format!("forward and backward mass differ for solo strategy {solo}")));
        }
    }
    Ok(ToblDecomposition::from_terms(bipartition, &terms))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ToblVerdict {
    Member(ToblDecomposition),
    NonMember(FarkasCertificate),
}

impl ToblVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, ToblVerdict::Member(_))
    }
}

/// Decides TOBL membership for one cut by the coupled program.
pub fn tobl_membership(behavior: &Behavior, bipartition: Bipartition) -> Result<ToblVerdict> {
    require_tripartite(behavior)?;
    require_no_signaling(behavior)?;
    let program = tobl_lp(behavior, bipartition)?;
    match lp::solve(&program)? {
        LpOutcome::Optimal { primal, .. } => {
            let terms: Vec<ToblTerm> = primal
                .into_iter()
                .enumerate()
                .filter(|(_, w)| w.is_positive())
                .map(|(column, w)| tobl_term(column, w))
                .collect();
            let decomposition = ToblDecomposition::from_terms(bipartition, &terms);
            for direction in [Direction::Forward, Direction::Backward] {
                if reconstruct(&decomposition, direction)? != *behavior {
                    return Err(Error::Internal(format!("TOBL decomposition fails to reconstruct ({direction})")));
                }
            }
            Ok(ToblVerdict::Member(decomposition))
        }
        LpOutcome::Infeasible(certificate) => Ok(ToblVerdict::NonMember(certificate)),
        LpOutcome::Unbounded { .. } => Err(Error::Internal("feasibility program reported unbounded".into())),
    }
}

/// Same decision through [`tobl_marginal_lp`]; a certificate verifies
/// against that program.
pub fn tobl_membership_marginal(behavior: &Behavior, bipartition: Bipartition) -> Result<ToblVerdict> {
    require_tripartite(behavior)?;
    require_no_signaling(behavior)?;
    match lp::solve(&tobl_marginal_lp(behavior, bipartition)?)? {
        LpOutcome::Optimal { primal, .. } => {
            let decomposition = couple_marginals(bipartition, &primal)?;
            for direction in [Direction::Forward, Direction::Backward] {
                if reconstruct(&decomposition, direction)? != *behavior {
                    return Err(Error::Internal(format!("TOBL decomposition fails to reconstruct ({direction})")));
                }
            }
            Ok(ToblVerdict::Member(decomposition))
        }
        LpOutcome::Infeasible(certificate) => Ok(ToblVerdict::NonMember(certificate)),
        LpOutcome::Unbounded { .. } => Err(Error::Internal("feasibility program reported unbounded".into())),
    }
}

/// Membership on `A|BC`, `B|AC` and `C|AB`, in that order.
pub fn tobl_membership_all(behavior: &Behavior) -> Result<Vec<(Bipartition, ToblVerdict)>> {
    require_tripartite(behavior)?;
    require_no_signaling(behavior)?;
    let cuts = Bipartition::all();
    #[cfg(feature = "parallel")]
    let results: Vec<Result<ToblVerdict>> = {
        use rayon::prelude::*;
        cuts.par_iter().map(|&cut| tobl_membership(behavior, cut)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<ToblVerdict>> = cuts.iter().map(|&cut| tobl_membership(behavior, cut)).collect();
    cuts.into_iter().zip(results).map(|(cut, r)| r.map(|v| (cut, v))).collect()
}
