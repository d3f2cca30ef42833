use std::collections::BTreeSet;

use nonlocal_core::behavior::PartyPermutation;
use nonlocal_core::hardy::*;
use nonlocal_core::paper_data::table1;
use nonlocal_core::rational::ratio;
use nonlocal_core::{Behavior, Cell, Scenario};
use num_traits::Zero;

#[test]
fn canonical_pattern_shape() {
    let p = canonical_pattern();
    assert_eq!(p.zero_count(), 4);
    assert_eq!(p.target().to_string(), "000|000");
    for perm in PartyPermutation::all(3) {
        let moved: BTreeSet<Cell> = p.cells().iter().map(|c| c.permuted(&perm)).collect();
        assert_eq!(moved, p.cells());
    }
}

#[test]
fn target_in_zero_set_rejected() {
    let c: Cell = "000|000".parse().unwrap();
    assert!(HardyPattern::new(c.clone(), [c]).is_err());
}

#[test]
fn table1_witness() {
    let v = hardy_check(&table1(), &canonical_pattern()).unwrap();
    assert_eq!(v.success, ratio(1, 5));
    assert!(v.residuals.iter().all(|(_, r)| r.is_zero()));
    assert!(v.zeros_satisfied);
    assert!(v.post_quantum);
    assert!(v.is_hardy_correlation());
}

#[test]
fn uniform_has_residuals() {
    let v = hardy_check(&Behavior::uniform(Scenario::tripartite()), &canonical_pattern()).unwrap();
    assert!(v.residuals.iter().all(|(_, r)| *r == ratio(1, 8)));
    assert!(!v.zeros_satisfied);
    assert!(!v.post_quantum);
}

#[test]
fn scenario_mismatch_rejected() {
    let b = Behavior::uniform(Scenario::bipartite());
    assert!(hardy_check(&b, &canonical_pattern()).is_err());
}
