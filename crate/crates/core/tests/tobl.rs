use nonlocal_core::paper_data::{paper_decomposition, table1};
use nonlocal_core::rational::ratio;
use nonlocal_core::tobl::*;
use nonlocal_core::{Behavior, Error, Scenario};

#[test]
fn cut_parsing_and_display() {
    assert_eq!("A|BC".parse::<Bipartition>().unwrap(), Bipartition::A_BC);
    assert_eq!("c|ab".parse::<Bipartition>().unwrap(), Bipartition::C_AB);
    assert_eq!(Bipartition::B_AC.to_string(), "B|AC");
    assert!("A|AB".parse::<Bipartition>().is_err());
    assert!("AB|C".parse::<Bipartition>().is_err());
}

#[test]
fn canonical_permutation_moves_cut_to_a_bc() {
    for cut in Bipartition::all() {
        assert_eq!(cut.permuted(&cut.to_canonical()), Bipartition::A_BC);
    }
}

#[test]
fn pair_strategy_index_roundtrip() {
    for i in 0..64 {
        assert_eq!(PairStrategy::from_index(Direction::Forward, i).index(), i);
    }
}

#[test]
fn forward_leader_ignores_follower_input() {
    for i in 0..64 {
        let s = PairStrategy::from_index(Direction::Forward, i);
        for y in 0..2 {
            assert_eq!(s.outputs(y, 0).0, s.outputs(y, 1).0);
        }
        let s = PairStrategy::from_index(Direction::Backward, i);
        for z in 0..2 {
            assert_eq!(s.outputs(0, z).1, s.outputs(1, z).1);
        }
    }
}

#[test]
fn embedded_tables_validate_and_reconstruct() {
    let d = paper_decomposition();
    assert!(validate_decomposition(&d).is_empty());
    assert_eq!(reconstruct(&d, Direction::Forward).unwrap(), table1());
    assert_eq!(reconstruct(&d, Direction::Backward).unwrap(), table1());
}

#[test]
fn flipped_solo_assignment_is_reported() {
    let mut d = paper_decomposition();
    d.forward[2].solo[0] = 0;
    let issues = validate_decomposition(&d);
    assert!(issues.contains(&DecompositionIssue::SoloMismatch { lambda: 2 }));
    assert!(reconstruct(&d, Direction::Forward).is_err());
}

#[test]
fn rescaled_weights_are_reported() {
    let mut d = paper_decomposition();
    for half in [&mut d.forward, &mut d.backward] {
        for term in half.iter_mut() {
            term.weight = &term.weight * ratio(9, 10);
        }
    }
    let issues = validate_decomposition(&d);
    assert!(issues.contains(&DecompositionIssue::WeightSum { direction: Direction::Forward, sum: ratio(9, 10) }));
}

#[test]
fn single_term_reconstructs_its_deterministic_behavior() {
    let forward = PairStrategy { direction: Direction::Forward, first: [1, 0], second: [0, 1, 1, 0] };
    let backward = PairStrategy { direction: Direction::Backward, first: [1, 1], second: [0, 0, 1, 0] };
    let term = ToblTerm { weight: ratio(1, 1), solo: [0, 1], forward, backward };
    let d = ToblDecomposition::from_terms(Bipartition::A_BC, &[term]);
    let b = reconstruct(&d, Direction::Forward).unwrap();
    let expected = Behavior::deterministic(Scenario::tripartite(), |x| {
        let (bb, cc) = forward.outputs(x[1], x[2]);
        vec![x[0], bb, cc]
    });
    assert_eq!(b, expected);
}

#[test]
fn wrong_scenario_rejected() {
    let b = Behavior::uniform(Scenario::bipartite());
    assert!(matches!(tobl_membership(&b, Bipartition::A_BC), Err(Error::ScenarioMismatch(_))));
}

#[test]
fn deterministic_behavior_is_single_term_member() {
    let s = Scenario::tripartite();
    let b = Behavior::deterministic(s, |x| vec![x[0], 1 - x[1], x[2]]);
    let ToblVerdict::Member(d) = tobl_membership(&b, Bipartition::A_BC).unwrap() else {
        panic!("deterministic behavior must be TOBL");
    };
    assert_eq!(d.forward.len(), 1);
    assert_eq!(d.forward[0].weight, ratio(1, 1));
}
