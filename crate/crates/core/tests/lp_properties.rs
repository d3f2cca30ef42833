use nonlocal_core::lp::{solve, solve_with, LinearProgram, LpOutcome, PivotRule, Sense};
use nonlocal_core::Rational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Instance {
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
    c: Vec<i64>,
    sense: Sense,
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..=4, 1usize..=6).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(prop::collection::vec(-3i64..=3, n), m),
            prop::collection::vec(-4i64..=4, m),
            prop::collection::vec(-3i64..=3, n),
            prop::bool::ANY,
        )
            .prop_map(|(a, b, c, max)| Instance {
                a,
                b,
                c,
                sense: if max { Sense::Maximize } else { Sense::Minimize },
            })
    })
}

fn program(inst: &Instance) -> LinearProgram {
    let mut lp = LinearProgram::new(inst.c.len());
    for (row, rhs) in inst.a.iter().zip(&inst.b) {
        lp.add_dense_equality(row.iter().map(|&v| q(v)).collect(), q(*rhs)).unwrap();
    }
    lp.set_dense_objective(inst.sense, inst.c.iter().map(|&v| q(v)).collect()).unwrap();
    lp
}

/// Unique solution of `A_S x_S = b` when the columns in `S` are independent
/// and the system is consistent.
fn solve_subset(a: &[Vec<i64>], b: &[i64], subset: &[usize]) -> Option<Vec<Rational>> {
    let m = a.len();
    let k = subset.len();
    let mut rows: Vec<Vec<Rational>> =
        (0..m).map(|i| subset.iter().map(|&j| q(a[i][j])).chain([q(b[i])]).collect()).collect();
    for (pivot_row, col) in (0..k).enumerate() {
        let p = (pivot_row..m).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, p);
        let lead = rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v /= &lead;
        }
        for r in 0..m {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pr = rows[pivot_row].clone();
                for (v, p) in rows[r].iter_mut().zip(&pr) {
                    *v -= &f * p;
                }
            }
        }
    }
    if rows[k..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some(rows[..k].iter().map(|r| r[k].clone()).collect())
}

/// Best objective over all basic feasible solutions, or `None` when there
/// is none (the program is then infeasible).
fn vertex_oracle(inst: &Instance) -> Option<Rational> {
    let n = inst.c.len();
    let m = inst.a.len();
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize > m {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let Some(xs) = solve_subset(&inst.a, &inst.b, &subset) else { continue };
        if xs.iter().any(|v| v.is_negative()) {
            continue;
        }
        let value: Rational = subset.iter().zip(&xs).map(|(&j, v)| q(inst.c[j]) * v).sum();
        let better = match (&best, inst.sense) {
            (None, _) => true,
            (Some(b), Sense::Maximize) => value > *b,
            (Some(b), Sense::Minimize) => value < *b,
        };
        if better {
            best = Some(value);
        }
    }
    best
}

/// Whether some recession direction improves the objective: a vertex of
/// `{Ar = 0, Σr = 1, r >= 0}` with strictly better objective.
fn improving_ray_oracle(inst: &Instance) -> bool {
    let n = inst.c.len();
    let mut a = inst.a.clone();
    a.push(vec![1; n]);
    let mut b = vec![0; inst.a.len()];
    b.push(1);
    let cone = Instance { a, b, c: inst.c.clone(), sense: inst.sense };
    match vertex_oracle(&cone) {
        None => false,
        Some(best) => match inst.sense {
            Sense::Maximize => best.is_positive(),
            Sense::Minimize => best.is_negative(),
        },
    }
}

fn check(inst: &Instance, outcome: &LpOutcome) -> Result<(), TestCaseError> {
    let lp = program(inst);
    let oracle = vertex_oracle(inst);
    let unbounded = oracle.is_some() && improving_ray_oracle(inst);
    match outcome {
        LpOutcome::Infeasible(cert) => {
            prop_assert!(cert.verify(&lp), "certificate fails: {cert:?}");
            prop_assert!(oracle.is_none());
        }
        LpOutcome::Optimal { primal, value } => {
            prop_assert!(lp.is_feasible_point(primal));
            prop_assert_eq!(&lp.objective_value(primal), value);
            prop_assert_eq!(Some(value.clone()), oracle);
            prop_assert!(!unbounded);
        }
        LpOutcome::Unbounded { primal, ray } => {
            prop_assert!(lp.is_feasible_point(primal));
            prop_assert!(lp.is_ray(ray));
            let gain = lp.objective_value(ray);
            match inst.sense {
                Sense::Maximize => prop_assert!(gain.is_positive()),
                Sense::Minimize => prop_assert!(gain.is_negative()),
            }
            prop_assert!(unbounded);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1200))]

    #[test]
    fn outcomes_are_certified_and_match_vertex_enumeration(inst in instance()) {
        let outcome = solve(&program(&inst)).unwrap();
        check(&inst, &outcome)?;
    }

    #[test]
    fn pivot_rules_agree(inst in instance()) {
        let lp = program(&inst);
        let dantzig = solve_with(&lp, PivotRule::Dantzig).unwrap();
        let bland = solve_with(&lp, PivotRule::Bland).unwrap();
        check(&inst, &bland)?;
        prop_assert_eq!(dantzig.status(), bland.status());
        if let (LpOutcome::Optimal { value: a, .. }, LpOutcome::Optimal { value: b, .. }) = (&dantzig, &bland) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn feasibility_only_programs(inst in instance()) {
        let mut lp = LinearProgram::new(inst.c.len());
        for (row, rhs) in inst.a.iter().zip(&inst.b) {
            lp.add_dense_equality(row.iter().map(|&v| q(v)).collect(), q(*rhs)).unwrap();
        }
        let outcome = solve(&lp).unwrap();
        match &outcome {
            LpOutcome::Optimal { primal, value } => {
                prop_assert!(lp.is_feasible_point(primal));
                prop_assert!(value.is_zero());
            }
            LpOutcome::Infeasible(cert) => prop_assert!(cert.verify(&lp)),
            LpOutcome::Unbounded { .. } => prop_assert!(false, "no objective, cannot be unbounded"),
        }
        prop_assert_eq!(outcome.is_feasible(), vertex_oracle(&inst).is_some());
    }
}

#[test]
fn degenerate_cycling_example_terminates() {
    // Beale's example in equality form with slacks
    let mut lp = LinearProgram::new(7);
    let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
    lp.add_dense_equality(vec![r(1, 4), r(-8, 1), r(-1, 1), r(9, 1), q(1), q(0), q(0)], q(0)).unwrap();
    lp.add_dense_equality(vec![r(1, 2), r(-12, 1), r(-1, 2), r(3, 1), q(0), q(1), q(0)], q(0)).unwrap();
    lp.add_dense_equality(vec![q(0), q(0), q(1), q(0), q(0), q(0), q(1)], q(1)).unwrap();
    lp.set_dense_objective(Sense::Maximize, vec![r(3, 4), r(-20, 1), r(1, 2), r(-6, 1), q(0), q(0), q(0)]).unwrap();
    for rule in [PivotRule::Dantzig, PivotRule::Bland] {
        match solve_with(&lp, rule).unwrap() {
            LpOutcome::Optimal { value, primal } => {
                assert_eq!(value, r(5, 4), "{rule:?}");
                assert!(lp.is_feasible_point(&primal));
            }
            other => panic!("{rule:?}: {other:?}"),
        }
    }
}
