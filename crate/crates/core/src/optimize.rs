//! Linear objectives over the local, TOBL and no-signaling sets, with
//! some cells pinned to zero.

use num_traits::{One, Signed, Zero};

use crate::behavior::{no_signaling_rows, normalization_rows, Behavior, NoSignalingForm, Scenario};
use crate::error::{Error, Result};
use crate::local::{enumerate_deterministic, strategy_count};
use crate::lp::{self, LinearProgram, LpOutcome, Sense};
use crate::rational::Rational;
use crate::tobl::{marginal_rows, tobl_column_cells, Bipartition, MARGINAL_COLUMNS, TOBL_COLUMNS};

/// Which convex set of behaviors to optimize over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSpec {
    Local,
    /// Intersection of the TOBL sets of the listed cuts.
    Tobl(Vec<Bipartition>),
    NoSignaling,
}

impl SetSpec {
    pub fn tobl_all() -> Self {
        SetSpec::Tobl(Bipartition::all().to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Maximum {
    pub value: Rational,
    pub behavior: Behavior,
}

/// Maximizes `Σ objective[c]·P[c]` (flat cell order) over `set`, subject
/// to `P[c] = 0` for every `c` in `zero_cells`.
pub fn maximize(scenario: &Scenario, objective: &[Rational], zero_cells: &[usize], set: &SetSpec) -> Result<Maximum> {
    if objective.len() != scenario.cell_count() {
        return Err(Error::ScenarioMismatch(format!(
            "objective has {} coefficients, scenario has {} cells",
            objective.len(),
            scenario.cell_count()
        )));
    }
    if let Some(&c) = zero_cells.iter().find(|&&c| c >= scenario.cell_count()) {
        return Err(Error::Index(format!("pinned cell {c} out of range")));
    }
    match set {
        SetSpec::Local => maximize_local(scenario, objective, zero_cells),
        SetSpec::NoSignaling => maximize_no_signaling(scenario, objective, zero_cells, NoSignalingForm::AllSubsets),
        SetSpec::Tobl(cuts) => maximize_tobl(scenario, objective, zero_cells, cuts),
    }
}

fn optimum(program: &LinearProgram) -> Result<Vec<Rational>> {
    match lp::solve(program)? {
        LpOutcome::Optimal { primal, .. } => Ok(primal),
        LpOutcome::Infeasible(_) => Err(Error::Internal("optimization region is empty".into())),
        LpOutcome::Unbounded { .. } => Err(Error::Internal("probability objective reported unbounded".into())),
    }
}

fn dot(objective: &[Rational], behavior: &Behavior) -> Rational {
    objective.iter().zip(behavior.table()).filter(|(c, _)| !c.is_zero()).map(|(c, p)| c * p).sum()
}

/// Program in the cell probabilities: normalization, the chosen family of
/// no-signaling equalities and the pinned zeros.
pub fn no_signaling_program(
    scenario: &Scenario,
    objective: &[Rational],
    zero_cells: &[usize],
    form: NoSignalingForm,
) -> Result<LinearProgram> {
    let mut program = LinearProgram::new(scenario.cell_count());
    for row in normalization_rows(scenario) {
        program.add_equality(row.into_iter().map(|(c, v)| (c, Rational::from_integer(v.into()))), Rational::one())?;
    }
    for row in no_signaling_rows(scenario, form) {
        program.add_equality(row.into_iter().map(|(c, v)| (c, Rational::from_integer(v.into()))), Rational::zero())?;
    }
    for &c in zero_cells {
        program.add_equality([(c, Rational::one())], Rational::zero())?;
    }
    program.set_dense_objective(Sense::Maximize, objective.to_vec())?;
    Ok(program)
}

pub fn maximize_no_signaling(
    scenario: &Scenario,
    objective: &[Rational],
    zero_cells: &[usize],
    form: NoSignalingForm,
) -> Result<Maximum> {
    let program = no_signaling_program(scenario, objective, zero_cells, form)?;
    let behavior = Behavior::new(*scenario, optimum(&program)?)?;
    Ok(Maximum { value: dot(objective, &behavior), behavior })
}

fn maximize_local(scenario: &Scenario, objective: &[Rational], zero_cells: &[usize]) -> Result<Maximum> {
    let strategies = enumerate_deterministic(scenario);
    let mut program = LinearProgram::new(strategy_count(scenario));
    program.add_equality((0..strategies.len()).map(|v| (v, Rational::one())), Rational::one())?;
    let cells: Vec<Vec<usize>> = strategies.iter().map(|s| s.cells(scenario).collect()).collect();
    for &zero in zero_cells {
        let row = cells.iter().enumerate().filter(|(_, hit)| hit.contains(&zero)).map(|(v, _)| (v, Rational::one()));
        program.add_equality(row, Rational::zero())?;
    }
    let gains = cells.iter().enumerate().map(|(v, hit)| (v, hit.iter().map(|&c| objective[c].clone()).sum()));
    program.set_objective(Sense::Maximize, gains)?;
    let weights = optimum(&program)?;
    let mut table = vec![Rational::zero(); scenario.cell_count()];
    for (w, hit) in weights.iter().zip(&cells) {
        if w.is_positive() {
            for &c in hit {
                table[c] += w;
            }
        }
    }
    let behavior = Behavior::new(*scenario, table)?;
    Ok(Maximum { value: dot(objective, &behavior), behavior })
}

fn require_tripartite(scenario: &Scenario) -> Result<()> {
    if !scenario.is_tripartite_binary() {
        return Err(Error::ScenarioMismatch(format!("TOBL optimization needs (3,2,2), got {scenario}")));
    }
    Ok(())
}

/// Maps each canonical cell of the cut to the original cell index.
fn original_cells(scenario: &Scenario, cut: &Bipartition) -> Vec<usize> {
    let back = cut.to_canonical().inverse();
    (0..scenario.cell_count())
        .map(|c| scenario.cell_index(&scenario.cell_at(c).permuted(&back)).expect("in range"))
        .collect()
}

fn normalized(scenario: &Scenario, variables: usize) -> Result<LinearProgram> {
    let mut program = LinearProgram::new(variables);
    for row in normalization_rows(scenario) {
        program.add_equality(row.into_iter().map(|(c, v)| (c, Rational::from_integer(v.into()))), Rational::one())?;
    }
    Ok(program)
}

fn finish_tobl(
    scenario: &Scenario,
    mut program: LinearProgram,
    objective: &[Rational],
    zero_cells: &[usize],
) -> Result<Maximum> {
    for &c in zero_cells {
        program.add_equality([(c, Rational::one())], Rational::zero())?;
    }
    program.set_objective(Sense::Maximize, objective.iter().cloned().enumerate())?;
    let mut primal = optimum(&program)?;
    primal.truncate(scenario.cell_count());
    let behavior = Behavior::new(*scenario, primal)?;
    Ok(Maximum { value: dot(objective, &behavior), behavior })
}

/// Behavior variables `P` (64) followed by one marginal TOBL block per
/// cut (see [`crate::tobl::tobl_marginal_lp`]), each reproducing `P`.
fn maximize_tobl(
    scenario: &Scenario,
    objective: &[Rational],
    zero_cells: &[usize],
    cuts: &[Bipartition],
) -> Result<Maximum> {
    require_tripartite(scenario)?;
    let cells = scenario.cell_count();
    let mut program = normalized(scenario, cells + cuts.len() * MARGINAL_COLUMNS)?;
    for (k, cut) in cuts.iter().enumerate() {
        let original = original_cells(scenario, cut);
        for (i, mut row) in marginal_rows(cells + k * MARGINAL_COLUMNS).into_iter().enumerate() {
            if i < 128 {
                row.push((original[i % 64], -Rational::one()));
            }
            program.add_equality(row, Rational::zero())?;
        }
    }
    finish_tobl(scenario, program, objective, zero_cells)
}

/// Same optimum as `maximize(.., SetSpec::Tobl(cuts))`, built from the
/// full coupled program: one 16,384-column block per cut.
pub fn maximize_tobl_coupled(
    scenario: &Scenario,
    objective: &[Rational],
    zero_cells: &[usize],
    cuts: &[Bipartition],
) -> Result<Maximum> {
    require_tripartite(scenario)?;
    let cells = scenario.cell_count();
    let mut program = normalized(scenario, cells + cuts.len() * TOBL_COLUMNS)?;
    for (k, cut) in cuts.iter().enumerate() {
        let offset = cells + k * TOBL_COLUMNS;
        let original = original_cells(scenario, cut);
        let mut rows: Vec<Vec<(usize, Rational)>> =
            (0..128).map(|i| vec![(original[i % 64], -Rational::one())]).collect();
        for column in 0..TOBL_COLUMNS {
            let (f_cells, b_cells) = tobl_column_cells(column);
            for cell in f_cells {
                rows[cell].push((offset + column, Rational::one()));
            }
            for cell in b_cells {
                rows[64 + cell].push((offset + column, Rational::one()));
            }
        }
        for row in rows {
            program.add_equality(row, Rational::zero())?;
        }
    }
    finish_tobl(scenario, program, objective, zero_cells)
}
