use nonlocal_core::games::*;
use nonlocal_core::paper_data::table1;
use nonlocal_core::rational::int;
use nonlocal_core::rational::ratio;
use nonlocal_core::{Behavior, Scenario};

#[test]
fn gyni_has_four_quarter_cells() {
    let g = gyni_expression();
    let cells = g.nonzero_cells();
    assert_eq!(cells.len(), 4);
    assert!(cells.iter().all(|(_, c)| *c == ratio(1, 4)));
    let names: Vec<String> = cells.iter().map(|(c, _)| c.to_string()).collect();
    assert_eq!(names, ["000|000", "110|011", "011|101", "101|110"]);
    for (cell, _) in cells {
        assert_eq!(cell.inputs.iter().fold(0, |a, b| a ^ b), 0);
    }
    assert_eq!(*g.coefficient(&"110|011".parse().unwrap()).unwrap(), ratio(1, 4));
}

#[test]
fn gyni_values() {
    let g = gyni_expression();
    assert_eq!(evaluate(&g, &table1()).unwrap(), ratio(1, 8));
    assert_eq!(evaluate(&g, &Behavior::uniform(Scenario::tripartite())).unwrap(), ratio(1, 8));
    let zeros = Behavior::deterministic(Scenario::tripartite(), |_| vec![0, 0, 0]);
    assert_eq!(evaluate(&g, &zeros).unwrap(), ratio(1, 4));
}

#[test]
fn classical_max_examples() {
    assert_eq!(classical_max(&gyni_expression()).0, ratio(1, 4));
    assert_eq!(classical_max(&BellExpression::zero(Scenario::tripartite())).0, int(0));
    let single = BellExpression::from_cells(Scenario::tripartite(), [("000|000".parse().unwrap(), int(1))]).unwrap();
    let (value, strategy) = classical_max(&single);
    assert_eq!(value, int(1));
    assert_eq!(strategy.outputs_for(&[0, 0, 0]), vec![0, 0, 0]);
    assert_eq!(strategy.index(&Scenario::tripartite()), 0);
}

#[test]
fn evaluate_rejects_mismatch() {
    assert!(evaluate(&gyni_expression(), &Behavior::uniform(Scenario::bipartite())).is_err());
}
