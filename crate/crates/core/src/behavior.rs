//! Scenarios, behaviors and the no-signaling structure.
//!
//! Input and output tuples are ordered lexicographically with party 0 most
//! significant. A behavior's table is stored row-major: one row per input
//! tuple, one column per output tuple.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub parties: usize,
    pub inputs: usize,
    pub outputs: usize,
}

impl Scenario {
    pub fn new(parties: usize, inputs: usize, outputs: usize) -> Result<Self> {
        if parties == 0 || inputs == 0 || outputs == 0 {
            return Err(Error::Scenario(format!(
                "parties, inputs and outputs must be positive (got {parties}/{inputs}/{outputs})"
            )));
        }
        let scenario = Scenario { parties, inputs, outputs };
        let fits = (inputs as u128)
            .checked_pow(parties as u32)
            .and_then(|i| (outputs as u128).checked_pow(parties as u32).map(|o| i * o))
            .is_some_and(|cells| cells <= 1 << 24);
        if !fits {
            return Err(Error::Scenario(format!("{scenario} has too many cells")));
        }
        Ok(scenario)
    }

    /// Three parties, two inputs, two outputs.
    pub fn tripartite() -> Self {
        Scenario { parties: 3, inputs: 2, outputs: 2 }
    }

    pub fn bipartite() -> Self {
        Scenario { parties: 2, inputs: 2, outputs: 2 }
    }

    pub fn input_tuples(&self) -> usize {
        self.inputs.pow(self.parties as u32)
    }

    pub fn output_tuples(&self) -> usize {
        self.outputs.pow(self.parties as u32)
    }

    pub fn cell_count(&self) -> usize {
        self.input_tuples() * self.output_tuples()
    }

    pub fn is_tripartite_binary(&self) -> bool {
        *self == Scenario::tripartite()
    }

    pub fn encode_inputs(&self, inputs: &[usize]) -> usize {
        encode(inputs, self.inputs)
    }

    pub fn encode_outputs(&self, outputs: &[usize]) -> usize {
        encode(outputs, self.outputs)
    }

    pub fn decode_inputs(&self, index: usize) -> Vec<usize> {
        decode(index, self.inputs, self.parties)
    }

    pub fn decode_outputs(&self, index: usize) -> Vec<usize> {
        decode(index, self.outputs, self.parties)
    }

    /// Flat table position of a cell.
    pub fn cell_index(&self, cell: &Cell) -> Result<usize> {
        self.check_cell(cell)?;
        Ok(self.encode_inputs(&cell.inputs) * self.output_tuples() + self.encode_outputs(&cell.outputs))
    }

    pub fn cell_at(&self, index: usize) -> Cell {
        let per_row = self.output_tuples();
        Cell { outputs: self.decode_outputs(index % per_row), inputs: self.decode_inputs(index / per_row) }
    }

    pub fn check_cell(&self, cell: &Cell) -> Result<()> {
        let ok = cell.outputs.len() == self.parties
            && cell.inputs.len() == self.parties
            && cell.outputs.iter().all(|&o| o < self.outputs)
            && cell.inputs.iter().all(|&i| i < self.inputs);
        if ok {
            Ok(())
        } else {
            Err(Error::Index(format!("cell {cell} does not fit scenario {self}")))
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} parties, {} inputs, {} outputs)", self.parties, self.inputs, self.outputs)
    }
}

pub(crate) fn encode(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

pub(crate) fn decode(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for slot in digits.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    digits
}

/// One entry `(outputs | inputs)` of a behavior, written `abc|xyz`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub outputs: Vec<usize>,
    pub inputs: Vec<usize>,
}

impl Cell {
    pub fn new(outputs: Vec<usize>, inputs: Vec<usize>) -> Self {
        Cell { outputs, inputs }
    }

    /// Applies a party relabeling to both tuples.
    pub fn permuted(&self, perm: &PartyPermutation) -> Cell {
        Cell { outputs: perm.apply(&self.outputs), inputs: perm.apply(&self.inputs) }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outputs {
            write!(f, "{o}")?;
        }
        f.write_str("|")?;
        for i in &self.inputs {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for Cell {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (outs, ins) =
            text.split_once('|').ok_or_else(|| Error::Parse(format!("cell {text:?} is not of the form abc|xyz")))?;
        let outputs = parse_digits(outs.trim())?;
        let inputs = parse_digits(ins.trim())?;
        if outputs.len() != inputs.len() {
            return Err(Error::Parse(format!("cell {text:?} has unequal tuple lengths")));
        }
        Ok(Cell { outputs, inputs })
    }
}

pub(crate) fn parse_digits(text: &str) -> Result<Vec<usize>> {
    if text.is_empty() {
        return Err(Error::Parse("empty digit string".into()));
    }
    text.chars()
        .map(|c| {
            c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse(format!("{text:?} is not a digit string")))
        })
        .collect()
}

pub(crate) fn digits_string(digits: &[usize]) -> String {
    digits.iter().map(|d| d.to_string()).collect()
}

/// Bijective relabeling of parties: position `i` of a tuple moves to
/// position `mapping[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartyPermutation {
    mapping: Vec<usize>,
}

impl PartyPermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &target in &mapping {
            if target >= mapping.len() || seen[target] {
                return Err(Error::Index(format!("{mapping:?} is not a permutation")));
            }
            seen[target] = true;
        }
        Ok(PartyPermutation { mapping })
    }

    pub fn identity(parties: usize) -> Self {
        PartyPermutation { mapping: (0..parties).collect() }
    }

    pub fn swap(parties: usize, i: usize, j: usize) -> Result<Self> {
        let mut mapping: Vec<usize> = (0..parties).collect();
        if i >= parties || j >= parties {
            return Err(Error::Index(format!("swap({i},{j}) on {parties} parties")));
        }
        mapping.swap(i, j);
        Ok(PartyPermutation { mapping })
    }

    /// Every permutation of `parties` labels, in lexicographic order.
    pub fn all(parties: usize) -> Vec<PartyPermutation> {
        fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<PartyPermutation>) {
            if prefix.len() == used.len() {
                out.push(PartyPermutation { mapping: prefix.clone() });
                return;
            }
            for p in 0..used.len() {
                if !used[p] {
                    used[p] = true;
                    prefix.push(p);
                    extend(prefix, used, out);
                    prefix.pop();
                    used[p] = false;
                }
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::new(), &mut vec![false; parties], &mut out);
        out
    }

    pub fn parties(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn image(&self, party: usize) -> usize {
        self.mapping[party]
    }

    pub fn inverse(&self) -> PartyPermutation {
        let mut mapping = vec![0; self.mapping.len()];
        for (from, &to) in self.mapping.iter().enumerate() {
            mapping[to] = from;
        }
        PartyPermutation { mapping }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &PartyPermutation) -> PartyPermutation {
        PartyPermutation { mapping: first.mapping.iter().map(|&p| self.mapping[p]).collect() }
    }

    pub fn apply<T: Clone + Default>(&self, tuple: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); tuple.len()];
        for (i, value) in tuple.iter().enumerate() {
            out[self.mapping[i]] = value.clone();
        }
        out
    }
}

/// Exact conditional probability table over a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Negative { cell: Cell, value: Rational },
    AboveOne { cell: Cell, value: Rational },
    RowSum { inputs: Vec<usize>, sum: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Negative { cell, value } => write!(f, "P({cell}) = {value} is negative"),
            Violation::AboveOne { cell, value } => write!(f, "P({cell}) = {value} exceeds 1"),
            Violation::RowSum { inputs, sum } => {
                write!(f, "row {} sums to {sum}", digits_string(inputs))
            }
        }
    }
}

/// A subset marginal that moved when the complementary inputs changed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalingWitness {
    pub subset: Vec<usize>,
    pub inputs: Vec<usize>,
    pub remote: (Vec<usize>, Vec<usize>),
}

impl fmt::Display for SignalingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "marginal of parties {:?} at inputs {} differs between remote inputs {} and {}",
            self.subset,
            digits_string(&self.inputs),
            digits_string(&self.remote.0),
            digits_string(&self.remote.1)
        )
    }
}

impl Behavior {
    pub fn new(scenario: Scenario, table: Vec<Rational>) -> Result<Self> {
        if table.len() != scenario.cell_count() {
            return Err(Error::TableSize { expected: scenario.cell_count(), found: table.len() });
        }
        Ok(Behavior { scenario, table })
    }

    /// Builds a table from `f(outputs, inputs)`.
    pub fn from_fn(scenario: Scenario, mut f: impl FnMut(&[usize], &[usize]) -> Rational) -> Self {
        let table = (0..scenario.cell_count())
            .map(|idx| {
                let cell = scenario.cell_at(idx);
                f(&cell.outputs, &cell.inputs)
            })
            .collect();
        Behavior { scenario, table }
    }

    /// Every output tuple equally likely.
    pub fn uniform(scenario: Scenario) -> Self {
        let p = Rational::new(BigInt::one(), BigInt::from(scenario.output_tuples()));
        Behavior { scenario, table: vec![p; scenario.cell_count()] }
    }

    /// Point mass on `response(inputs)`.
    pub fn deterministic(scenario: Scenario, response: impl Fn(&[usize]) -> Vec<usize>) -> Self {
        Behavior::from_fn(scenario, |outs, ins| if response(ins) == outs { Rational::one() } else { Rational::zero() })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn into_table(self) -> Vec<Rational> {
        self.table
    }

    pub fn get(&self, cell: &Cell) -> Result<&Rational> {
        Ok(&self.table[self.scenario.cell_index(cell)?])
    }

    pub fn set(&mut self, cell: &Cell, value: Rational) -> Result<()> {
        let idx = self.scenario.cell_index(cell)?;
        self.table[idx] = value;
        Ok(())
    }

    pub fn at(&self, input_index: usize, output_index: usize) -> &Rational {
        &self.table[input_index * self.scenario.output_tuples() + output_index]
    }

    pub fn row(&self, input_index: usize) -> &[Rational] {
        let width = self.scenario.output_tuples();
        &self.table[input_index * width..(input_index + 1) * width]
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Behavior, weight: &Rational) -> Result<Behavior> {
        if self.scenario != other.scenario {
            return Err(Error::ScenarioMismatch(format!("{} vs {}", self.scenario, other.scenario)));
        }
        let rest = Rational::one() - weight;
        let table = self.table.iter().zip(&other.table).map(|(p, q)| weight * p + &rest * q).collect();
        Ok(Behavior { scenario: self.scenario, table })
    }

    /// Every out-of-range entry and every row whose sum is not exactly 1.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let width = self.scenario.output_tuples();
        for input in 0..self.scenario.input_tuples() {
            let mut sum = Rational::zero();
            for output in 0..width {
                let value = self.at(input, output);
                sum += value;
                let cell = || self.scenario.cell_at(input * width + output);
                if value.is_negative() {
                    out.push(Violation::Negative { cell: cell(), value: value.clone() });
                } else if *value > Rational::one() {
                    out.push(Violation::AboveOne { cell: cell(), value: value.clone() });
                }
            }
            if !sum.is_one() {
                out.push(Violation::RowSum { inputs: self.scenario.decode_inputs(input), sum });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// `Err` listing the violations unless the table is a valid behavior.
    pub fn validate(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            return Ok(());
        }
        let listed: Vec<String> = violations.iter().map(ToString::to_string).collect();
        Err(Error::InvalidBehavior(listed.join("; ")))
    }

    /// Distribution of the outputs of `subset` given its `inputs` and the
    /// complement's `remote_inputs`; indexed by the subset's output tuple.
    pub fn marginal(&self, subset: &[usize], inputs: &[usize], remote_inputs: &[usize]) -> Result<Vec<Rational>> {
        let s = &self.scenario;
        let mut in_subset = vec![false; s.parties];
        for &p in subset {
            if p >= s.parties || in_subset[p] {
                return Err(Error::Index(format!("party subset {subset:?} for {} parties", s.parties)));
            }
            in_subset[p] = true;
        }
        let complement: Vec<usize> = (0..s.parties).filter(|&p| !in_subset[p]).collect();
        if inputs.len() != subset.len() || remote_inputs.len() != complement.len() {
            return Err(Error::Index("input assignment does not match the party subset".into()));
        }
        if inputs.iter().chain(remote_inputs).any(|&x| x >= s.inputs) {
            return Err(Error::Index("input value out of range".into()));
        }
        let mut full_inputs = vec![0; s.parties];
        for (&p, &x) in subset.iter().zip(inputs) {
            full_inputs[p] = x;
        }
        for (&p, &x) in complement.iter().zip(remote_inputs) {
            full_inputs[p] = x;
        }
        let row = self.row(s.encode_inputs(&full_inputs));
        let mut out = vec![Rational::zero(); s.outputs.pow(subset.len() as u32)];
        for (idx, value) in row.iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            let outs = s.decode_outputs(idx);
            let sub: Vec<usize> = subset.iter().map(|&p| outs[p]).collect();
            out[encode(&sub, s.outputs)] += value;
        }
        Ok(out)
    }

    /// All witnesses of signaling; empty iff the behavior is no-signaling.
    pub fn signaling_witnesses(&self) -> Vec<SignalingWitness> {
        let s = self.scenario;
        let mut out = Vec::new();
        for subset in proper_subsets(s.parties) {
            let remote_count = s.parties - subset.len();
            let local_assignments = s.inputs.pow(subset.len() as u32);
            let remote_assignments = s.inputs.pow(remote_count as u32);
            for local in 0..local_assignments {
                let inputs = decode(local, s.inputs, subset.len());
                let reference_remote = decode(0, s.inputs, remote_count);
                let reference = self.marginal(&subset, &inputs, &reference_remote).expect("indices generated in range");
                for remote in 1..remote_assignments {
                    let remote_inputs = decode(remote, s.inputs, remote_count);
                    let other = self.marginal(&subset, &inputs, &remote_inputs).expect("indices generated in range");
                    if other != reference {
                        out.push(SignalingWitness {
                            subset: subset.clone(),
                            inputs: inputs.clone(),
                            remote: (reference_remote.clone(), remote_inputs),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_no_signaling(&self) -> bool {
        self.signaling_witnesses().is_empty()
    }

    /// Relabels parties: the returned behavior's cell
    /// `(perm(outputs) | perm(inputs))` equals this behavior's `(outputs | inputs)`.
    pub fn permute(&self, perm: &PartyPermutation) -> Result<Behavior> {
        if perm.parties() != self.scenario.parties {
            return Err(Error::ScenarioMismatch(format!(
                "permutation on {} parties applied to {} parties",
                perm.parties(),
                self.scenario.parties
            )));
        }
        let s = self.scenario;
        let mut table = vec![Rational::zero(); s.cell_count()];
        for (idx, value) in self.table.iter().enumerate() {
            let cell = s.cell_at(idx).permuted(perm);
            table[s.cell_index(&cell).expect("permuted cell stays in range")] = value.clone();
        }
        Ok(Behavior { scenario: s, table })
    }
}

/// Non-empty proper subsets of `0..parties`, as sorted index lists.
pub(crate) fn proper_subsets(parties: usize) -> Vec<Vec<usize>> {
    (1..(1usize << parties) - 1).map(|mask| (0..parties).filter(|p| mask >> p & 1 == 1).collect()).collect()
}

/// Which family of linear equalities is used to express no-signaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoSignalingForm {
    /// Every proper subset's marginal equals its value at the first
    /// complementary input assignment.
    AllSubsets,
    /// Summing out one party's output gives a quantity independent of that
    /// party's input.
    SingleParty,
}

/// Sparse integer row over the cells of a scenario, right-hand side 0.
pub(crate) type CellRow = Vec<(usize, i64)>;

pub(crate) fn normalization_rows(s: &Scenario) -> Vec<CellRow> {
    let width = s.output_tuples();
    (0..s.input_tuples()).map(|input| (0..width).map(|o| (input * width + o, 1)).collect()).collect()
}

/// Homogeneous equality rows (`row · P = 0`) whose common solutions with
/// normalization are exactly the no-signaling tables.
pub(crate) fn no_signaling_rows(s: &Scenario, form: NoSignalingForm) -> Vec<CellRow> {
    let mut rows = Vec::new();
    let width = s.output_tuples();
    let cell = |outs: &[usize], ins: &[usize]| s.encode_inputs(ins) * width + s.encode_outputs(outs);
    match form {
        NoSignalingForm::AllSubsets => {
            for subset in proper_subsets(s.parties) {
                let complement: Vec<usize> = (0..s.parties).filter(|p| !subset.contains(p)).collect();
                let k = subset.len();
                for local_in in 0..s.inputs.pow(k as u32) {
                    let ins = decode(local_in, s.inputs, k);
                    for local_out in 0..s.outputs.pow(k as u32) {
                        let outs = decode(local_out, s.outputs, k);
                        let terms = |remote: usize| -> Vec<usize> {
                            let remote_in = decode(remote, s.inputs, complement.len());
                            let mut full_in = vec![0; s.parties];
                            for (&p, &x) in subset.iter().zip(&ins) {
                                full_in[p] = x;
                            }
                            for (&p, &x) in complement.iter().zip(&remote_in) {
                                full_in[p] = x;
                            }
                            (0..s.outputs.pow(complement.len() as u32))
                                .map(|remote_out| {
                                    let ro = decode(remote_out, s.outputs, complement.len());
                                    let mut full_out = vec![0; s.parties];
                                    for (&p, &a) in subset.iter().zip(&outs) {
                                        full_out[p] = a;
                                    }
                                    for (&p, &a) in complement.iter().zip(&ro) {
                                        full_out[p] = a;
                                    }
                                    cell(&full_out, &full_in)
                                })
                                .collect()
                        };
                        let reference = terms(0);
                        for remote in 1..s.inputs.pow(complement.len() as u32) {
                            let mut row: CellRow = reference.iter().map(|&c| (c, 1)).collect();
                            row.extend(terms(remote).into_iter().map(|c| (c, -1)));
                            rows.push(row);
                        }
                    }
                }
            }
        }
        NoSignalingForm::SingleParty => {
            if s.parties < 2 {
                return rows;
            }
            let others = s.parties - 1;
            for party in 0..s.parties {
                for rest_in in 0..s.inputs.pow(others as u32) {
                    let rest_ins = decode(rest_in, s.inputs, others);
                    for rest_out in 0..s.outputs.pow(others as u32) {
                        let rest_outs = decode(rest_out, s.outputs, others);
                        let summed = |x: usize| -> Vec<usize> {
                            (0..s.outputs)
                                .map(|a| {
                                    let mut full_in = rest_ins.clone();
                                    full_in.insert(party, x);
                                    let mut full_out = rest_outs.clone();
                                    full_out.insert(party, a);
                                    cell(&full_out, &full_in)
                                })
                                .collect()
                        };
                        let reference = summed(0);
                        for x in 1..s.inputs {
                            let mut row: CellRow = reference.iter().map(|&c| (c, 1)).collect();
                            row.extend(summed(x).into_iter().map(|c| (c, -1)));
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    rows
}

/// Affine dimension of the no-signaling set: cell count minus the rank of
/// normalization plus no-signaling equalities.
pub fn ns_dimension(scenario: &Scenario) -> usize {
    ns_dimension_with(scenario, NoSignalingForm::AllSubsets)
}

pub fn ns_dimension_with(scenario: &Scenario, form: NoSignalingForm) -> usize {
    let cells = scenario.cell_count();
    let mut rows = normalization_rows(scenario);
    rows.extend(no_signaling_rows(scenario, form));
    let dense: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let mut d = vec![BigInt::zero(); cells];
            for &(c, v) in row {
                d[c] += v;
            }
            d
        })
        .collect();
    cells - linalg::rank_fraction_free(dense)
}
