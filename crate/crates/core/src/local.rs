//! Deterministic strategies and membership in the local polytope.

use num_traits::{One, Signed, Zero};

use crate::behavior::{decode, encode, Behavior, Scenario};
use crate::error::{Error, Result};
use crate::lp::{self, FarkasCertificate, LinearProgram, LpOutcome};
use crate::rational::Rational;

/// One output function per party: `responses[party][input]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicStrategy {
    responses: Vec<Vec<usize>>,
}

impl DeterministicStrategy {
    pub fn new(scenario: &Scenario, responses: Vec<Vec<usize>>) -> Result<Self> {
        let ok = responses.len() == scenario.parties
            && responses.iter().all(|r| r.len() == scenario.inputs && r.iter().all(|&o| o < scenario.outputs));
        if !ok {
            return Err(Error::Index(format!("strategy {responses:?} does not fit {scenario}")));
        }
        Ok(DeterministicStrategy { responses })
    }

    /// The strategy at position `index` of [`enumerate_deterministic`].
    pub fn from_index(scenario: &Scenario, index: usize) -> Self {
        let per_party = scenario.outputs.pow(scenario.inputs as u32);
        let responses = decode(index, per_party, scenario.parties)
            .into_iter()
            .map(|f| decode(f, scenario.outputs, scenario.inputs))
            .collect();
        DeterministicStrategy { responses }
    }

    pub fn index(&self, scenario: &Scenario) -> usize {
        let per_party = scenario.outputs.pow(scenario.inputs as u32);
        let digits: Vec<usize> = self.responses.iter().map(|r| encode(r, scenario.outputs)).collect();
        encode(&digits, per_party)
    }

    pub fn responses(&self) -> &[Vec<usize>] {
        &self.responses
    }

    pub fn outputs_for(&self, inputs: &[usize]) -> Vec<usize> {
        self.responses.iter().zip(inputs).map(|(r, &x)| r[x]).collect()
    }

    /// Flat cell index hit by this strategy in each input row.
    pub(crate) fn cells(&self, scenario: &Scenario) -> impl Iterator<Item = usize> + '_ {
        let width = scenario.output_tuples();
        let scenario = *scenario;
        (0..scenario.input_tuples()).map(move |row| {
            let outs = self.outputs_for(&scenario.decode_inputs(row));
            row * width + scenario.encode_outputs(&outs)
        })
    }

    pub fn behavior(&self, scenario: &Scenario) -> Behavior {
        let mut table = vec![Rational::zero(); scenario.cell_count()];
        for cell in self.cells(scenario) {
            table[cell] = Rational::one();
        }
        Behavior::new(*scenario, table).expect("table sized from scenario")
    }
}

pub fn strategy_count(scenario: &Scenario) -> usize {
    scenario.outputs.pow(scenario.inputs as u32).pow(scenario.parties as u32)
}

/// All deterministic strategies, party 0 most significant.
pub fn enumerate_deterministic(scenario: &Scenario) -> Vec<DeterministicStrategy> {
    (0..strategy_count(scenario)).map(|i| DeterministicStrategy::from_index(scenario, i)).collect()
}

/// Convex weights over deterministic strategies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDecomposition {
    pub terms: Vec<(Rational, DeterministicStrategy)>,
}

impl LocalDecomposition {
    pub fn reconstruct(&self, scenario: &Scenario) -> Behavior {
        let mut table = vec![Rational::zero(); scenario.cell_count()];
        for (weight, strategy) in &self.terms {
            for cell in strategy.cells(scenario) {
                table[cell] += weight;
            }
        }
        Behavior::new(*scenario, table).expect("table sized from scenario")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalVerdict {
    Local(LocalDecomposition),
    Nonlocal(FarkasCertificate),
}

impl LocalVerdict {
    pub fn is_local(&self) -> bool {
        matches!(self, LocalVerdict::Local(_))
    }
}

pub(crate) fn require_no_signaling(behavior: &Behavior) -> Result<()> {
    behavior.validate()?;
    if let Some(w) = behavior.signaling_witnesses().first() {
        return Err(Error::Signaling(w.to_string()));
    }
    Ok(())
}

/// Feasibility program `Σ_λ q_λ D_λ = P`, `q >= 0`, one variable per
/// deterministic strategy and one row per cell.
pub fn local_lp(behavior: &Behavior) -> LinearProgram {
    let s = behavior.scenario();
    let count = strategy_count(&s);
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); s.cell_count()];
    for (var, strategy) in enumerate_deterministic(&s).iter().enumerate() {
        for cell in strategy.cells(&s) {
            rows[cell].push((var, Rational::one()));
        }
    }
    let mut program = LinearProgram::new(count);
    for (row, p) in rows.into_iter().zip(behavior.table()) {
        program.add_equality(row, p.clone()).expect("indices in range");
    }
    program
}

/// Decides whether `behavior` is a mixture of deterministic strategies.
pub fn local_membership(behavior: &Behavior) -> Result<LocalVerdict> {
    require_no_signaling(behavior)?;
    let s = behavior.scenario();
    let program = local_lp(behavior);
    match lp::solve(&program)? {
        LpOutcome::Optimal { primal, .. } => {
            let terms: Vec<_> = primal
                .into_iter()
                .enumerate()
                .filter(|(_, w)| w.is_positive())
                .map(|(i, w)| (w, DeterministicStrategy::from_index(&s, i)))
                .collect();
            let decomposition = LocalDecomposition { terms };
            if decomposition.reconstruct(&s) != *behavior {
                return Err(Error::Internal("local decomposition does not reconstruct".into()));
            }
            Ok(LocalVerdict::Local(decomposition))
        }
        LpOutcome::Infeasible(certificate) => Ok(LocalVerdict::Nonlocal(certificate)),
        LpOutcome::Unbounded { .. } => Err(Error::Internal("feasibility program reported unbounded".into())),
    }
}
