//! Reference datasets: the tripartite Hardy behavior with success 1/5 and
//! its two directional TOBL tables for the cut `A|BC`, plus a one-call
//! checker for every claim they support.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::behavior::{Behavior, PartyPermutation, Scenario};
use crate::error::Result;
use crate::games::{classical_max, evaluate, gyni_expression, satisfies};
use crate::hardy::{canonical_pattern, hardy_check, quantum_bound};
use crate::local::{local_membership, LocalVerdict};
use crate::rational::{self, ratio, Rational};
use crate::tobl::{
    reconstruct, tobl_membership_all, validate_decomposition, Bipartition, Direction, PairStrategy, TermHalf,
    ToblDecomposition, ToblVerdict,
};
use crate::wirings::wired_locality_scan;

/// Interchange copy of [`table1`].
pub const TABLE1_JSON: &str = include_str!("../data/table1.behavior.json");
/// Interchange copy of [`paper_decomposition`].
pub const TABLES23_JSON: &str = include_str!("../data/table2-3.tobl.json");

/// Rows `xyz = 000 … 111`, columns `abc = 000 … 111`, in tenths.
const TABLE1_TENTHS: [[i64; 8]; 8] = [
    [2, 0, 0, 2, 0, 2, 2, 2],
    [0, 2, 1, 1, 1, 1, 4, 0],
    [0, 1, 2, 1, 1, 4, 1, 0],
    [0, 1, 1, 2, 4, 1, 1, 0],
    [0, 1, 1, 4, 2, 1, 1, 0],
    [0, 1, 4, 1, 1, 2, 1, 0],
    [0, 4, 1, 1, 1, 1, 2, 0],
    [4, 0, 0, 2, 0, 2, 2, 0],
];

/// Weights in tenths, shared by both tables.
const WEIGHTS_TENTHS: [i64; 9] = [1, 1, 1, 1, 2, 1, 1, 1, 1];

/// `a0 a1 | b0 b1 | c00 c01 c10 c11`
const TABLE2: [[u8; 8]; 9] = [
    [0, 0, 1, 1, 1, 0, 1, 1],
    [0, 0, 1, 1, 1, 1, 0, 1],
    [1, 0, 0, 0, 1, 1, 1, 0],
    [1, 0, 1, 0, 0, 0, 1, 0],
    [1, 0, 1, 0, 1, 0, 1, 0],
    [0, 1, 0, 0, 0, 1, 1, 1],
    [0, 1, 0, 1, 0, 1, 0, 0],
    [1, 1, 1, 0, 0, 0, 0, 1],
    [1, 1, 0, 1, 1, 0, 0, 0],
];

/// `a0 a1 | b00 b01 b10 b11 | c0 c1`
const TABLE3: [[u8; 8]; 9] = [
    [0, 0, 1, 0, 1, 1, 1, 1],
    [0, 0, 1, 1, 0, 1, 1, 1],
    [1, 0, 1, 1, 1, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 1, 0],
    [1, 0, 1, 1, 0, 0, 1, 0],
    [0, 1, 0, 1, 1, 1, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 1],
    [1, 1, 0, 0, 0, 1, 1, 0],
    [1, 1, 1, 0, 0, 0, 0, 1],
];

pub fn table1() -> Behavior {
    let table = TABLE1_TENTHS.iter().flatten().map(|&t| ratio(t, 10)).collect();
    Behavior::new(Scenario::tripartite(), table).expect("64 cells")
}

/// Forward (`B → C`) half for the cut `A|BC`.
pub fn table2() -> Vec<TermHalf> {
    TABLE2
        .iter()
        .zip(WEIGHTS_TENTHS)
        .map(|(r, w)| TermHalf {
            weight: ratio(w, 10),
            solo: [r[0], r[1]],
            pair: PairStrategy { direction: Direction::Forward, first: [r[2], r[3]], second: [r[4], r[5], r[6], r[7]] },
        })
        .collect()
}

/// Backward (`B ← C`) half for the cut `A|BC`.
pub fn table3() -> Vec<TermHalf> {
    TABLE3
        .iter()
        .zip(WEIGHTS_TENTHS)
        .map(|(r, w)| TermHalf {
            weight: ratio(w, 10),
            solo: [r[0], r[1]],
            pair: PairStrategy {
                direction: Direction::Backward,
                first: [r[6], r[7]],
                second: [r[2], r[3], r[4], r[5]],
            },
        })
        .collect()
}

pub fn paper_decomposition() -> ToblDecomposition {
    ToblDecomposition { bipartition: Bipartition::A_BC, forward: table2(), backward: table3() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ClaimValue {
    Rational(#[serde(with = "rational::serde_str")] Rational),
    Bool(bool),
}

impl fmt::Display for ClaimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimValue::Rational(r) => write!(f, "{r}"),
            ClaimValue::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub description: &'static str,
    pub expected: ClaimValue,
    pub computed: ClaimValue,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claims: Vec<Claim>,
}

impl ClaimReport {
    fn push(&mut self, id: &'static str, description: &'static str, expected: ClaimValue, computed: ClaimValue) {
        let pass = expected == computed;
        self.claims.push(Claim { id, description, expected, computed, pass });
    }

    pub fn passed(&self) -> usize {
        self.claims.iter().filter(|c| c.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.claims {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            writeln!(f, "[{mark}] {:<22} {} (expected {}, computed {})", c.id, c.description, c.expected, c.computed)?;
        }
        write!(f, "{}/{} claims pass", self.passed(), self.claims.len())
    }
}

/// Checks every claim on the embedded behavior.
pub fn verify_paper_claims() -> ClaimReport {
    verify_claims_on(&table1())
}

/// Runs the same checks with `behavior` standing in for the embedded
/// table. Failures, including errors, are reported as failed claims.
pub fn verify_claims_on(behavior: &Behavior) -> ClaimReport {
    use ClaimValue::{Bool, Rational as Q};
    let mut report = ClaimReport::default();
    let valid_ns = behavior.is_valid() && behavior.is_no_signaling();
    report.push("valid-no-signaling", "table is a valid no-signaling behavior", Bool(true), Bool(valid_ns));

    let witness = hardy_check(behavior, &canonical_pattern()).ok();
    let success = witness.as_ref().filter(|w| w.zeros_satisfied).map(|w| Q(w.success.clone())).unwrap_or(Bool(false));
    report.push("hardy-success", "Hardy zeros hold and success probability is 1/5", Q(ratio(1, 5)), success);
    let post_quantum = witness.as_ref().is_some_and(|w| w.post_quantum);
    report.push("post-quantum", "Hardy success exceeds the quantum bound 1/8", Bool(true), Bool(post_quantum));

    let symmetric = PartyPermutation::all(3).iter().all(|p| behavior.permute(p).is_ok_and(|b| b == *behavior));
    report.push("permutation-symmetry", "behavior is invariant under party permutations", Bool(true), Bool(symmetric));

    let decomposition = paper_decomposition();
    for (id, description, direction) in [
        ("reconstruct-forward", "forward TOBL table reproduces the behavior", Direction::Forward),
        ("reconstruct-backward", "backward TOBL table reproduces the behavior", Direction::Backward),
    ] {
        let ok = reconstruct(&decomposition, direction).is_ok_and(|b| b == *behavior);
        report.push(id, description, Bool(true), Bool(ok));
    }
    let shared = validate_decomposition(&decomposition).is_empty();
    report.push("shared-assignments", "TOBL tables share weights and solo assignments", Bool(true), Bool(shared));

    let tobl_all = tobl_membership_all(behavior)
        .is_ok_and(|verdicts| verdicts.iter().all(|(_, v)| matches!(v, ToblVerdict::Member(_))));
    report.push("tobl-all-cuts", "coupled TOBL program feasible on A|BC, B|AC, C|AB", Bool(true), Bool(tobl_all));

    let gyni = gyni_expression();
    let value = evaluate(&gyni, behavior).unwrap_or_else(|_| Rational::zero());
    let (bound, _) = classical_max(&gyni);
    let computed = if bound == ratio(1, 4) && satisfies(&value, &bound) { Q(value) } else { Bool(false) };
    report.push("gyni-satisfied", "GYNI value is 1/8, within the classical bound 1/4", Q(ratio(1, 8)), computed);

    let wired = wired_locality_scan(behavior, Bipartition::A_BC).is_ok_and(|r| r.all_local());
    report.push("wirings-local", "every wiring on A|BC yields a local bipartite box", Bool(true), Bool(wired));

    let nonlocal = matches!(local_membership(behavior), Ok(LocalVerdict::Nonlocal(_)));
    report.push("nonlocal", "behavior is outside the local polytope", Bool(true), Bool(nonlocal));
    debug_assert_eq!(quantum_bound(), ratio(1, 8));
    report
}

/// Parsed copy of the shipped behavior file.
pub fn table1_from_file() -> Result<Behavior> {
    crate::io::behavior_from_json(TABLE1_JSON)
}

pub fn decomposition_from_file() -> Result<ToblDecomposition> {
    crate::io::decomposition_from_json(TABLES23_JSON, Bipartition::A_BC)
}
