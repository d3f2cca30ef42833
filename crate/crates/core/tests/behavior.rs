use nonlocal_core::behavior::*;
use nonlocal_core::paper_data::table1;
use nonlocal_core::rational::ratio;
use nonlocal_core::Error;

fn tri() -> Scenario {
    Scenario::tripartite()
}

#[test]
fn scenario_rejects_zero_sizes() {
    assert!(Scenario::new(0, 2, 2).is_err());
    assert!(Scenario::new(3, 0, 2).is_err());
    assert!(Scenario::new(3, 2, 0).is_err());
    assert_eq!(Scenario::new(3, 2, 2).unwrap().cell_count(), 64);
}

#[test]
fn cell_roundtrip_through_text_and_index() {
    let cell: Cell = "001|110".parse().unwrap();
    assert_eq!(cell.outputs, vec![0, 0, 1]);
    assert_eq!(cell.inputs, vec![1, 1, 0]);
    let idx = tri().cell_index(&cell).unwrap();
    assert_eq!(idx, 6 * 8 + 1);
    assert_eq!(tri().cell_at(idx), cell);
    assert_eq!(cell.to_string(), "001|110");
    assert!("00|110".parse::<Cell>().is_err());
    assert!(tri().cell_index(&"002|110".parse().unwrap()).is_err());
}

#[test]
fn table1_is_valid() {
    assert!(table1().is_valid());
}

#[test]
fn row_sum_violation_reported() {
    let mut b = table1();
    b.set(&"000|000".parse().unwrap(), ratio(1, 10)).unwrap();
    let v = b.violations();
    assert_eq!(v, vec![Violation::RowSum { inputs: vec![0, 0, 0], sum: ratio(9, 10) }]);
}

#[test]
fn negative_entry_reported() {
    let mut b = table1();
    b.set(&"011|000".parse().unwrap(), ratio(-1, 5)).unwrap();
    let v = b.violations();
    assert!(v.iter().any(|x| matches!(x, Violation::Negative { value, .. } if *value == ratio(-1, 5))));
    assert!(b.validate().is_err());
}

#[test]
fn wrong_table_size_is_structural_error() {
    let err = Behavior::new(tri(), vec![ratio(1, 8); 63]).unwrap_err();
    assert!(matches!(err, Error::TableSize { expected: 64, found: 63 }));
}

#[test]
fn marginal_examples() {
    let m = table1().marginal(&[0], &[0], &[0, 0]).unwrap();
    assert_eq!(m, vec![ratio(2, 5), ratio(3, 5)]);
    let u = Behavior::uniform(tri()).marginal(&[0], &[1], &[1, 0]).unwrap();
    assert_eq!(u[0], ratio(1, 2));
    let d = Behavior::deterministic(tri(), |_| vec![0, 1, 1]);
    assert_eq!(d.marginal(&[0], &[1], &[0, 1]).unwrap(), vec![ratio(1, 1), ratio(0, 1)]);
    assert!(table1().marginal(&[3], &[0], &[0, 0]).is_err());
    assert!(table1().marginal(&[0, 0], &[0, 0], &[0]).is_err());
}

#[test]
fn marginal_over_all_parties_is_the_row() {
    let b = table1();
    let m = b.marginal(&[0, 1, 2], &[1, 0, 1], &[]).unwrap();
    assert_eq!(m, b.row(5).to_vec());
}

#[test]
fn no_signaling_examples() {
    assert!(table1().is_no_signaling());
    assert!(Behavior::uniform(tri()).is_no_signaling());
    // a = y
    let signaling = Behavior::deterministic(tri(), |x| vec![x[1], 0, 0]);
    let witnesses = signaling.signaling_witnesses();
    assert!(!witnesses.is_empty());
    assert!(witnesses.iter().any(|w| w.subset == vec![0]));
}

#[test]
fn permute_examples() {
    let t = table1();
    let swap_ab = PartyPermutation::swap(3, 0, 1).unwrap();
    assert_eq!(t.permute(&swap_ab).unwrap(), t);
    assert_eq!(t.permute(&PartyPermutation::identity(3)).unwrap(), t);
    let d = Behavior::deterministic(tri(), |x| vec![x[0], 0, 0]);
    let swapped = d.permute(&PartyPermutation::swap(3, 0, 2).unwrap()).unwrap();
    assert_eq!(swapped, Behavior::deterministic(tri(), |x| vec![0, 0, x[2]]));
    assert!(t.permute(&PartyPermutation::identity(2)).is_err());
}

#[test]
fn permutation_validation_and_algebra() {
    assert!(PartyPermutation::new(vec![0, 0, 1]).is_err());
    assert!(PartyPermutation::new(vec![0, 3, 1]).is_err());
    let p = PartyPermutation::new(vec![1, 2, 0]).unwrap();
    assert_eq!(p.compose(&p.inverse()), PartyPermutation::identity(3));
    assert_eq!(p.apply(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
    assert_eq!(PartyPermutation::all(3).len(), 6);
}

#[test]
fn ns_dimension_examples() {
    assert_eq!(ns_dimension(&Scenario::new(3, 2, 2).unwrap()), 26);
    assert_eq!(ns_dimension(&Scenario::new(2, 2, 2).unwrap()), 8);
    assert_eq!(ns_dimension(&Scenario::new(1, 2, 2).unwrap()), 2);
}

#[test]
fn ns_forms_have_equal_rank() {
    for (n, k, m) in [(1, 2, 2), (2, 2, 2), (2, 3, 2), (2, 2, 3), (3, 2, 2)] {
        let s = Scenario::new(n, k, m).unwrap();
        assert_eq!(
            ns_dimension_with(&s, NoSignalingForm::AllSubsets),
            ns_dimension_with(&s, NoSignalingForm::SingleParty),
            "{s}"
        );
    }
}
