//! Linear Bell expressions, the tripartite guess-your-neighbour's-input
//! game, and their classical and no-signaling maxima.

use num_traits::{Signed, Zero};

use crate::behavior::{Behavior, Cell, NoSignalingForm, Scenario};
use crate::error::{Error, Result};
use crate::local::{enumerate_deterministic, DeterministicStrategy};
use crate::optimize::{self, Maximum, SetSpec};
use crate::rational::{ratio, Rational};

/// A rational coefficient per cell; unspecified cells are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellExpression {
    scenario: Scenario,
    coefficients: Vec<Rational>,
}

impl BellExpression {
    pub fn zero(scenario: Scenario) -> Self {
        BellExpression { scenario, coefficients: vec![Rational::zero(); scenario.cell_count()] }
    }

    pub fn from_cells(scenario: Scenario, cells: impl IntoIterator<Item = (Cell, Rational)>) -> Result<Self> {
        let mut expr = BellExpression::zero(scenario);
        for (cell, value) in cells {
            expr.set(&cell, value)?;
        }
        Ok(expr)
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn set(&mut self, cell: &Cell, value: Rational) -> Result<()> {
        let idx = self.scenario.cell_index(cell)?;
        self.coefficients[idx] = value;
        Ok(())
    }

    pub fn coefficient(&self, cell: &Cell) -> Result<&Rational> {
        Ok(&self.coefficients[self.scenario.cell_index(cell)?])
    }

    pub fn nonzero_cells(&self) -> Vec<(Cell, Rational)> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.scenario.cell_at(i), c.clone()))
            .collect()
    }
}

/// Winning probability of the three-party game where each party must
/// output its right neighbour's input (`a = y`, `b = z`, `c = x`), inputs
/// drawn uniformly from `x ⊕ y ⊕ z = 0`.
pub fn gyni_expression() -> BellExpression {
    let quarter = ratio(1, 4);
    BellExpression {
        scenario: Scenario::tripartite(),
        coefficients: (0..64)
            .map(|idx| {
                let cell = Scenario::tripartite().cell_at(idx);
                let (x, y, z) = (cell.inputs[0], cell.inputs[1], cell.inputs[2]);
                let wins = cell.outputs == [y, z, x];
                if (x ^ y ^ z) == 0 && wins {
                    quarter.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    }
}

/// Classical (and quantum) value of [`gyni_expression`].
pub fn gyni_bound() -> Rational {
    ratio(1, 4)
}

pub fn evaluate(expr: &BellExpression, behavior: &Behavior) -> Result<Rational> {
    if expr.scenario != behavior.scenario() {
        return Err(Error::ScenarioMismatch(format!("{} vs {}", expr.scenario, behavior.scenario())));
    }
    Ok(expr.coefficients.iter().zip(behavior.table()).filter(|(c, _)| !c.is_zero()).map(|(c, p)| c * p).sum())
}

fn strategy_value(expr: &BellExpression, strategy: &DeterministicStrategy) -> Rational {
    strategy.cells(&expr.scenario).map(|c| &expr.coefficients[c]).sum()
}

/// Exhaustive maximum over deterministic strategies; ties go to the
/// lowest strategy index.
pub fn classical_max(expr: &BellExpression) -> (Rational, DeterministicStrategy) {
    let strategies = enumerate_deterministic(&expr.scenario);
    #[cfg(feature = "parallel")]
    let values: Vec<Rational> = {
        use rayon::prelude::*;
        strategies.par_iter().map(|s| strategy_value(expr, s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<Rational> = strategies.iter().map(|s| strategy_value(expr, s)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    (values[best].clone(), strategies[best].clone())
}

/// Maximum over the local polytope by linear programming.
pub fn local_max(expr: &BellExpression) -> Result<Maximum> {
    optimize::maximize(&expr.scenario, &expr.coefficients, &[], &SetSpec::Local)
}

pub fn no_signaling_max(expr: &BellExpression) -> Result<Maximum> {
    optimize::maximize(&expr.scenario, &expr.coefficients, &[], &SetSpec::NoSignaling)
}

pub fn no_signaling_max_with(expr: &BellExpression, form: NoSignalingForm) -> Result<Maximum> {
    optimize::maximize_no_signaling(&expr.scenario, &expr.coefficients, &[], form)
}

/// `value ≤ bound`, i.e. the behavior does not violate the inequality.
pub fn satisfies(value: &Rational, bound: &Rational) -> bool {
    !(value - bound).is_positive()
}
