//! JSON interchange formats.
//!
//! * behavior: `{"scenario": {"parties", "inputs", "outputs"}, "table":
//!   {"<input digits>": {"<output digits>": "p/q", ...}, ...}}`; every
//!   cell must be present.
//! * decomposition: a list of `{"weight", "a": [a0, a1], "forward": {"b":
//!   [b0, b1], "c": [c00, c01, c10, c11]}, "backward": {"c": [c0, c1],
//!   "b": [b00, b01, b10, b11]}}`.
//! * Hardy pattern: `{"target": "abc|xyz", "zeros": ["abc|xyz", ...]}`.
//! * Bell expression: `{"cells": {"abc|xyz": "p/q", ...}}`, with an
//!   optional `"scenario"`; without one the party count is read off the
//!   cells and inputs/outputs default to two.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::behavior::{digits_string, parse_digits, Behavior, Cell, Scenario};
use crate::error::{Error, Result};
use crate::games::BellExpression;
use crate::hardy::HardyPattern;
use crate::rational::{self, Rational};
use crate::tobl::{Bipartition, Direction, PairStrategy, ToblDecomposition, ToblTerm};

#[derive(Serialize, Deserialize)]
struct ScenarioJson {
    parties: usize,
    inputs: usize,
    outputs: usize,
}

#[derive(Serialize, Deserialize)]
struct BehaviorJson {
    scenario: ScenarioJson,
    table: BTreeMap<String, BTreeMap<String, String>>,
}

fn digit_scenario(scenario: &Scenario) -> Result<()> {
    if scenario.inputs > 10 || scenario.outputs > 10 {
        return Err(Error::Scenario(format!("{scenario} cannot be written with one digit per party")));
    }
    Ok(())
}

pub fn behavior_from_json(text: &str) -> Result<Behavior> {
    let doc: BehaviorJson = serde_json::from_str(text)?;
    let scenario = Scenario::new(doc.scenario.parties, doc.scenario.inputs, doc.scenario.outputs)?;
    digit_scenario(&scenario)?;
    let mut table: Vec<Option<Rational>> = vec![None; scenario.cell_count()];
    for (inputs, row) in &doc.table {
        let inputs = parse_digits(inputs)?;
        for (outputs, value) in row {
            let cell = Cell::new(parse_digits(outputs)?, inputs.clone());
            let idx = scenario.cell_index(&cell)?;
            if table[idx].is_some() {
                return Err(Error::Parse(format!("cell {cell} given twice")));
            }
            table[idx] = Some(rational::parse(value)?);
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(idx, v)| v.ok_or_else(|| Error::MissingCell(scenario.cell_at(idx).to_string())))
        .collect::<Result<Vec<_>>>()?;
    Behavior::new(scenario, table)
}

pub fn behavior_to_json(behavior: &Behavior) -> Result<String> {
    let s = behavior.scenario();
    digit_scenario(&s)?;
    let mut table = BTreeMap::new();
    for input in 0..s.input_tuples() {
        let row: BTreeMap<String, String> = (0..s.output_tuples())
            .map(|o| (digits_string(&s.decode_outputs(o)), rational::format(behavior.at(input, o))))
            .collect();
        table.insert(digits_string(&s.decode_inputs(input)), row);
    }
    let doc =
        BehaviorJson { scenario: ScenarioJson { parties: s.parties, inputs: s.inputs, outputs: s.outputs }, table };
    Ok(serde_json::to_string_pretty(&doc)?)
}

#[derive(Serialize, Deserialize)]
struct ForwardJson {
    b: [u8; 2],
    c: [u8; 4],
}

#[derive(Serialize, Deserialize)]
struct BackwardJson {
    c: [u8; 2],
    b: [u8; 4],
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    #[serde(with = "rational::serde_str")]
    weight: Rational,
    a: [u8; 2],
    forward: ForwardJson,
    backward: BackwardJson,
}

/// Reads a decomposition written in the frame of `bipartition`.
pub fn decomposition_from_json(text: &str, bipartition: Bipartition) -> Result<ToblDecomposition> {
    let terms: Vec<TermJson> = serde_json::from_str(text)?;
    let terms: Vec<ToblTerm> = terms
        .into_iter()
        .map(|t| ToblTerm {
            weight: t.weight,
            solo: t.a,
            forward: PairStrategy { direction: Direction::Forward, first: t.forward.b, second: t.forward.c },
            backward: PairStrategy { direction: Direction::Backward, first: t.backward.c, second: t.backward.b },
        })
        .collect();
    Ok(ToblDecomposition::from_terms(bipartition, &terms))
}

/// Fails unless both halves share weights and solo assignments.
pub fn decomposition_to_json(decomp: &ToblDecomposition) -> Result<String> {
    let terms: Vec<TermJson> = decomp
        .terms()?
        .into_iter()
        .map(|t| TermJson {
            weight: t.weight,
            a: t.solo,
            forward: ForwardJson { b: t.forward.first, c: t.forward.second },
            backward: BackwardJson { c: t.backward.first, b: t.backward.second },
        })
        .collect();
    Ok(serde_json::to_string_pretty(&terms)?)
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    target: String,
    zeros: Vec<String>,
}

pub fn pattern_from_json(text: &str) -> Result<HardyPattern> {
    let doc: PatternJson = serde_json::from_str(text)?;
    let zeros = doc.zeros.iter().map(|z| z.parse()).collect::<Result<Vec<Cell>>>()?;
    HardyPattern::new(doc.target.parse()?, zeros)
}

pub fn pattern_to_json(pattern: &HardyPattern) -> Result<String> {
    let doc =
        PatternJson { target: pattern.target().to_string(), zeros: pattern.zeros().map(ToString::to_string).collect() };
    Ok(serde_json::to_string_pretty(&doc)?)
}

#[derive(Serialize, Deserialize)]
struct ExpressionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scenario: Option<ScenarioJson>,
    cells: BTreeMap<String, String>,
}

pub fn expression_from_json(text: &str) -> Result<BellExpression> {
    let doc: ExpressionJson = serde_json::from_str(text)?;
    let cells = doc
        .cells
        .iter()
        .map(|(cell, value)| Ok((cell.parse::<Cell>()?, rational::parse(value)?)))
        .collect::<Result<Vec<_>>>()?;
    let scenario = match doc.scenario {
        Some(s) => Scenario::new(s.parties, s.inputs, s.outputs)?,
        None => {
            let parties = cells.first().map_or(3, |(c, _)| c.inputs.len());
            Scenario::new(parties, 2, 2)?
        }
    };
    BellExpression::from_cells(scenario, cells)
}

pub fn expression_to_json(expr: &BellExpression) -> Result<String> {
    let s = expr.scenario();
    let doc = ExpressionJson {
        scenario: Some(ScenarioJson { parties: s.parties, inputs: s.inputs, outputs: s.outputs }),
        cells: expr.nonzero_cells().into_iter().map(|(c, v)| (c.to_string(), rational::format(&v))).collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}
