//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails. Every comparison is exact.

use std::process::ExitCode;
use std::time::Instant;

use nonlocal_core::behavior::ns_dimension;
use nonlocal_core::games::{classical_max, evaluate, gyni_bound, gyni_expression, no_signaling_max, satisfies};
use nonlocal_core::hardy::{canonical_pattern, hardy_check, hardy_max, quantum_bound};
use nonlocal_core::local::{local_lp, local_membership, LocalVerdict};
use nonlocal_core::lp::{solve, LinearProgram, LpOutcome, Sense};
use nonlocal_core::optimize::SetSpec;
use nonlocal_core::paper_data::{paper_decomposition, table1};
use nonlocal_core::rational::ratio;
use nonlocal_core::tobl::{
    reconstruct, tobl_membership_all, validate_decomposition, Bipartition, Direction, ToblVerdict,
};
use nonlocal_core::wirings::{pr_box_embedding, wired_locality_scan, ScanVerdict, Wiring};
use nonlocal_core::{Behavior, PartyPermutation, Rational, Scenario};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// All 64 deterministic boxes `a = f(x), b = g(y), c = h(z)`, built
/// directly from the four functions on one bit.
fn deterministic_boxes() -> Vec<Behavior> {
    let f = |k: usize, bit: usize| match k {
        0 => 0,
        1 => 1,
        2 => bit,
        _ => 1 - bit,
    };
    let mut out = Vec::new();
    for (ka, kb, kc) in (0..64).map(|i| (i >> 4, (i >> 2) & 3, i & 3)) {
        out.push(Behavior::deterministic(Scenario::tripartite(), |x| vec![f(ka, x[0]), f(kb, x[1]), f(kc, x[2])]));
    }
    out
}

fn table_reproduction() -> Outcome {
    let t = table1();
    t.validate().map_err(err)?;
    ensure(t.is_no_signaling(), "table signals")?;
    let v = hardy_check(&t, &canonical_pattern()).map_err(err)?;
    ensure(v.success == ratio(1, 5), format!("success {}", v.success))?;
    ensure(v.residuals.iter().all(|(_, r)| r.is_zero()), "nonzero residual")?;
    Ok(format!("success {}, {} zero residuals", v.success, v.residuals.len()))
}

fn post_quantum_witness() -> Outcome {
    let v = hardy_check(&table1(), &canonical_pattern()).map_err(err)?;
    ensure(quantum_bound() == ratio(1, 8), "threshold")?;
    ensure(v.success > v.threshold && v.post_quantum, "not post-quantum")?;
    Ok(format!("{} > {}", v.success, v.threshold))
}

fn tobl_reconstruction() -> Outcome {
    let t = table1();
    let d = paper_decomposition();
    ensure(reconstruct(&d, Direction::Forward).map_err(err)? == t, "forward table differs")?;
    ensure(reconstruct(&d, Direction::Backward).map_err(err)? == t, "backward table differs")?;
    let issues = validate_decomposition(&d);
    ensure(issues.is_empty(), format!("{issues:?}"))?;
    let shared = d.forward.iter().zip(&d.backward).all(|(f, b)| f.weight == b.weight && f.solo == b.solo);
    ensure(shared, "weights or A assignments differ")?;
    Ok(format!("{} terms, 64 cells equal both ways", d.forward.len()))
}

fn tobl_membership() -> Outcome {
    let t = table1();
    let verdicts = tobl_membership_all(&t).map_err(err)?;
    let mut cuts = Vec::new();
    for (cut, v) in &verdicts {
        let ToblVerdict::Member(d) = v else { return Err(format!("{cut} infeasible")) };
        ensure(reconstruct(d, Direction::Forward).map_err(err)? == t, format!("{cut} forward"))?;
        ensure(reconstruct(d, Direction::Backward).map_err(err)? == t, format!("{cut} backward"))?;
        cuts.push(format!("{cut} ({} terms)", d.forward.len()));
    }
    ensure(verdicts.len() == 3, "three cuts")?;
    Ok(cuts.join(", "))
}

fn nonlocality() -> Outcome {
    let t = table1();
    let LocalVerdict::Nonlocal(cert) = local_membership(&t).map_err(err)? else {
        return Err("table decomposed as local".into());
    };
    ensure(cert.verify(&local_lp(&t)), "certificate does not verify")?;
    let (_, rhs) = cert.combination(&local_lp(&t));
    Ok(format!("Farkas certificate verified, yᵀb = {rhs}"))
}

fn local_hardy_bound() -> Outcome {
    let pattern = canonical_pattern();
    let m = hardy_max(&SetSpec::Local, &pattern).map_err(err)?;
    let mut brute = Rational::zero();
    let mut compatible = 0;
    for d in deterministic_boxes() {
        let v = hardy_check(&d, &pattern).map_err(err)?;
        if v.zeros_satisfied {
            compatible += 1;
            brute = brute.max(v.success);
        }
    }
    ensure(m.value.is_zero(), format!("LP optimum {}", m.value))?;
    ensure(brute.is_zero(), format!("enumeration optimum {brute}"))?;
    Ok(format!("LP 0, enumeration 0 over {compatible} zero-compatible strategies of 64"))
}

fn gyni_satisfaction() -> Outcome {
    let g = gyni_expression();
    let value = evaluate(&g, &table1()).map_err(err)?;
    let brute = deterministic_boxes().iter().map(|d| evaluate(&g, d)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let brute = brute.into_iter().max().expect("64 boxes");
    let (classical, _) = classical_max(&g);
    let ns = no_signaling_max(&g).map_err(err)?;
    ensure(value == ratio(1, 8), format!("value {value}"))?;
    ensure(classical == ratio(1, 4) && brute == classical && gyni_bound() == classical, "classical bound")?;
    ensure(satisfies(&value, &classical), "violated")?;
    ensure(ns.value > classical, format!("no-signaling maximum {}", ns.value))?;
    ensure(ns.behavior.is_no_signaling() && evaluate(&g, &ns.behavior).map_err(err)? == ns.value, "optimizer")?;
    Ok(format!("value {value} <= {classical}; no-signaling maximum {}", ns.value))
}

fn wiring_locality() -> Outcome {
    let scan = wired_locality_scan(&table1(), Bipartition::A_BC).map_err(err)?;
    ensure(scan.wirings_checked == Wiring::COUNT, "wiring count")?;
    ensure(scan.all_local(), "table wires to a nonlocal box")?;
    let control = wired_locality_scan(&pr_box_embedding(), Bipartition::A_BC).map_err(err)?;
    let ScanVerdict::Nonlocal { wiring, certificate, .. } = &control.verdict else {
        return Err("PR embedding wired locally".into());
    };
    let program = control.certificate_program().expect("nonlocal verdict");
    ensure(certificate.verify(&program), "control certificate")?;
    Ok(format!(
        "{} wirings, {} distinct boxes, all local; control nonlocal at wiring #{}",
        scan.wirings_checked,
        scan.distinct_behaviors,
        wiring.index()
    ))
}

fn polytope_dimension() -> Outcome {
    let d = ns_dimension(&Scenario::new(3, 2, 2).map_err(err)?);
    ensure(d == 26, format!("dimension {d}"))?;
    Ok("26".into())
}

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let m = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=6);
    let q = |v: i64| Rational::from_integer(v.into());
    let mut lp = LinearProgram::new(n);
    for _ in 0..m {
        let row = (0..n).map(|_| q(rng.gen_range(-3..=3))).collect();
        lp.add_dense_equality(row, q(rng.gen_range(-4..=4))).expect("dense row");
    }
    let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
    lp.set_dense_objective(sense, (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()).expect("objective");
    lp
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut optimal, mut infeasible, mut unbounded) = (0, 0, 0);
    for i in 0..1000 {
        let lp = random_lp(&mut rng);
        let ok = match solve(&lp).map_err(err)? {
            LpOutcome::Optimal { primal, value } => {
                optimal += 1;
                lp.is_feasible_point(&primal) && lp.objective_value(&primal) == value
            }
            LpOutcome::Infeasible(cert) => {
                infeasible += 1;
                cert.verify(&lp)
            }
            LpOutcome::Unbounded { primal, ray } => {
                unbounded += 1;
                lp.is_feasible_point(&primal) && lp.is_ray(&ray)
            }
        };
        ensure(ok, format!("random program {i} failed verification"))?;
    }

    let pattern = canonical_pattern();
    let local = hardy_max(&SetSpec::Local, &pattern).map_err(err)?.value;
    let tobl = hardy_max(&SetSpec::tobl_all(), &pattern).map_err(err)?.value;
    let ns = hardy_max(&SetSpec::NoSignaling, &pattern).map_err(err)?.value;
    ensure(local <= tobl && tobl <= ns, format!("{local} {tobl} {ns}"))?;
    ensure(tobl >= ratio(1, 5), "table is a TOBL point")?;

    let t = table1();
    let verdicts = |b: &Behavior| -> Result<_, String> {
        let h = hardy_check(b, &pattern).map_err(err)?;
        let local = local_membership(b).map_err(err)?.is_local();
        let gyni = evaluate(&gyni_expression(), b).map_err(err)?;
        Ok((h.success, h.zeros_satisfied, h.post_quantum, local, gyni, b.is_no_signaling()))
    };
    let reference = verdicts(&t)?;
    for p in PartyPermutation::all(3) {
        ensure(verdicts(&t.permute(&p).map_err(err)?)? == reference, format!("permutation {:?}", p.mapping()))?;
    }

    let boxes = deterministic_boxes();
    let g = gyni_expression();
    for _ in 0..50 {
        let pick = |rng: &mut ChaCha8Rng| -> Behavior {
            match rng.gen_range(0..3) {
                0 => t.clone(),
                1 => pr_box_embedding(),
                _ => boxes[rng.gen_range(0..64)].clone(),
            }
        };
        let (b1, b2) = (pick(&mut rng), pick(&mut rng));
        let w = ratio(rng.gen_range(0..=10), 10);
        let rest = Rational::one() - &w;
        let mixed = b1.mix(&b2, &w).map_err(err)?;
        let lhs = evaluate(&g, &mixed).map_err(err)?;
        let rhs = &w * evaluate(&g, &b1).map_err(err)? + &rest * evaluate(&g, &b2).map_err(err)?;
        ensure(lhs == rhs, "evaluate is not linear")?;
        let s = |b: &Behavior| hardy_check(b, &pattern).map(|v| v.success).map_err(err);
        ensure(s(&mixed)? == &w * s(&b1)? + &rest * s(&b2)?, "Hardy success is not linear")?;
    }
    Ok(format!(
        "1000 LPs verified ({optimal} optimal, {infeasible} infeasible, {unbounded} unbounded); \
         Hardy maxima {local} <= {tobl} <= {ns}; 6 permutations; 50 mixtures"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table reproduction", table_reproduction),
        ("post-quantum witness", post_quantum_witness),
        ("TOBL reconstruction", tobl_reconstruction),
        ("TOBL membership", tobl_membership),
        ("nonlocality", nonlocality),
        ("local Hardy bound", local_hardy_bound),
        ("GYNI satisfaction", gyni_satisfaction),
        ("wiring locality", wiring_locality),
        ("polytope dimension", polytope_dimension),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {reason} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
