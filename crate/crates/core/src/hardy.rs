//! Hardy's argument as a witness of post-quantum correlations.
//!
//! A Hardy pattern names one target cell that should be positive and a
//! set of cells that must vanish. The target value is the success
//! probability; for three parties with binary inputs and outputs no
//! quantum behavior satisfying the canonical zeros exceeds
//! [`quantum_bound`].

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::behavior::{Behavior, Cell, Scenario};
use crate::error::{Error, Result};
use crate::optimize::{self, Maximum, SetSpec};
use crate::rational::{ratio, Rational};

/// Largest tripartite quantum Hardy success probability, 1/8.
pub fn quantum_bound() -> Rational {
    ratio(1, 8)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardyPattern {
    target: Cell,
    zeros: BTreeSet<Cell>,
}

impl HardyPattern {
    pub fn new(target: Cell, zeros: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let zeros: BTreeSet<Cell> = zeros.into_iter().collect();
        if zeros.contains(&target) {
            return Err(Error::Index(format!("target cell {target} is also a zero cell")));
        }
        let width = target.inputs.len();
        if zeros.iter().any(|c| c.inputs.len() != width) {
            return Err(Error::Index("pattern cells have different party counts".into()));
        }
        Ok(HardyPattern { target, zeros })
    }

    pub fn target(&self) -> &Cell {
        &self.target
    }

    pub fn zeros(&self) -> impl Iterator<Item = &Cell> {
        self.zeros.iter()
    }

    pub fn zero_count(&self) -> usize {
        self.zeros.len()
    }

    pub fn check_scenario(&self, scenario: &Scenario) -> Result<()> {
        scenario.check_cell(&self.target)?;
        self.zeros.iter().try_for_each(|c| scenario.check_cell(c))
    }

    /// Cells as a set, for symmetry comparisons.
    pub fn cells(&self) -> BTreeSet<Cell> {
        let mut all = self.zeros.clone();
        all.insert(self.target.clone());
        all
    }
}

/// Target `(000|000)`; zeros `(000|100)`, `(000|010)`, `(000|001)`, `(111|111)`.
pub fn canonical_pattern() -> HardyPattern {
    let cell = |s: &str| s.parse::<Cell>().expect("static cell");
    HardyPattern::new(cell("000|000"), ["000|100", "000|010", "000|001", "111|111"].map(cell)).expect("static pattern")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessVerdict {
    pub success: Rational,
    /// Value of each zero cell, in cell order.
    pub residuals: Vec<(Cell, Rational)>,
    pub zeros_satisfied: bool,
    pub threshold: Rational,
    pub post_quantum: bool,
}

impl WitnessVerdict {
    /// All zeros hold and the target is strictly positive.
    pub fn is_hardy_correlation(&self) -> bool {
        self.zeros_satisfied && self.success.is_positive()
    }
}

pub fn hardy_check(behavior: &Behavior, pattern: &HardyPattern) -> Result<WitnessVerdict> {
    pattern.check_scenario(&behavior.scenario())?;
    let success = behavior.get(pattern.target())?.clone();
    let residuals: Vec<(Cell, Rational)> =
        pattern.zeros().map(|c| Ok((c.clone(), behavior.get(c)?.clone()))).collect::<Result<_>>()?;
    let zeros_satisfied = residuals.iter().all(|(_, v)| v.is_zero());
    let threshold = quantum_bound();
    let post_quantum = zeros_satisfied && success > threshold;
    Ok(WitnessVerdict { success, residuals, zeros_satisfied, threshold, post_quantum })
}

/// Largest success probability over `set` with the pattern's zeros pinned.
pub fn hardy_max(set: &SetSpec, pattern: &HardyPattern) -> Result<Maximum> {
    hardy_max_in(&Scenario::tripartite(), set, pattern)
}

pub fn hardy_max_in(scenario: &Scenario, set: &SetSpec, pattern: &HardyPattern) -> Result<Maximum> {
    pattern.check_scenario(scenario)?;
    let (objective, zeros) = hardy_objective(scenario, pattern)?;
    optimize::maximize(scenario, &objective, &zeros, set)
}

pub(crate) fn hardy_objective(scenario: &Scenario, pattern: &HardyPattern) -> Result<(Vec<Rational>, Vec<usize>)> {
    let mut objective = vec![Rational::zero(); scenario.cell_count()];
    objective[scenario.cell_index(pattern.target())?] = Rational::one();
    let zeros = pattern.zeros().map(|c| scenario.cell_index(c)).collect::<Result<_>>()?;
    Ok((objective, zeros))
}
