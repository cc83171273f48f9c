//! JSON file formats for DFAs, QFAs, witnesses and synthesis plans.
//!
//! Endmarkers are spelled `^` and `$` in QFA files. Matrices are flat
//! row-major lists of `[re, im]` pairs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{AutomatonError, Dfa};
use crate::fragments::FragmentWitness;
use crate::qfa::{CMatrix, Qfa, QfaError, Symbol, C64};
use crate::synthesis::SynthesisPlan;

/// Name of the state added by `complete_with_sink`.
pub const SINK_NAME: &str = "sink";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Qfa(#[from] QfaError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn single_char(s: &str, what: &str) -> Result<char, IoError> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(IoError::Schema(format!("{what} `{s}` must be a single character"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaFile {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub start: String,
    pub accept: Vec<String>,
    pub delta: BTreeMap<String, BTreeMap<String, String>>,
}

impl From<&Dfa> for DfaFile {
    fn from(dfa: &Dfa) -> Self {
        let alphabet = dfa.alphabet().iter().map(|c| c.to_string()).collect();
        let states = dfa.state_names().to_vec();
        let accept = (0..dfa.num_states()).filter(|&s| dfa.is_accepting(s)).map(|s| dfa.state_name(s).to_string()).collect();
        let delta = (0..dfa.num_states())
            .map(|s| {
                let row = dfa
                    .alphabet()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.to_string(), dfa.state_name(dfa.step(s, i)).to_string()))
                    .collect();
                (dfa.state_name(s).to_string(), row)
            })
            .collect();
        DfaFile { alphabet, states, start: dfa.state_name(dfa.start()).to_string(), accept, delta }
    }
}

/// A parsed DFA plus what was done to make it total.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseReport {
    pub dfa: Dfa,
    /// Transitions that were missing and sent to the added sink.
    pub completed: Vec<(String, char)>,
}

impl DfaFile {
    pub fn to_dfa(&self, complete_with_sink: bool) -> Result<ParseReport, IoError> {
        let alphabet = self.alphabet.iter().map(|s| single_char(s, "symbol")).collect::<Result<Vec<_>, _>>()?;
        let mut names = self.states.clone();
        let index = |names: &[String], n: &str| {
            names.iter().position(|m| m == n).ok_or_else(|| AutomatonError::UnknownState(n.to_string()))
        };
        for (state, row) in &self.delta {
            index(&names, state)?;
            for (sym, target) in row {
                let c = single_char(sym, "symbol")?;
                if !alphabet.contains(&c) {
                    return Err(AutomatonError::UnknownSymbol { symbol: c }.into());
                }
                index(&names, target)?;
            }
        }
        let mut completed = Vec::new();
        let mut table = Vec::with_capacity(names.len());
        for s in &self.states {
            let mut row = Vec::with_capacity(alphabet.len());
            for &c in &alphabet {
                match self.delta.get(s).and_then(|r| r.get(&c.to_string())) {
                    Some(t) => row.push(Some(index(&names, t)?)),
                    None if complete_with_sink => {
                        completed.push((s.clone(), c));
                        row.push(None);
                    }
                    None => return Err(AutomatonError::MissingTransition { state: s.clone(), symbol: c }.into()),
                }
            }
            table.push(row);
        }
        let sink = (!completed.is_empty()).then(|| {
            let mut name = SINK_NAME.to_string();
            while names.contains(&name) {
                name.push('_');
            }
            names.push(name);
            names.len() - 1
        });
        let mut delta: Vec<Vec<usize>> =
            table.into_iter().map(|row| row.into_iter().map(|t| t.or(sink).expect("sink exists")).collect()).collect();
        let mut accepting = vec![false; names.len()];
        for a in &self.accept {
            accepting[index(&names, a)?] = true;
        }
        if let Some(k) = sink {
            delta.push(vec![k; alphabet.len()]);
        }
        let start = index(&names, &self.start)?;
        Ok(ParseReport { dfa: Dfa::new(names, alphabet, start, accepting, delta)?, completed })
    }
}

pub fn parse_dfa(text: &str, complete_with_sink: bool) -> Result<ParseReport, IoError> {
    let file: DfaFile = serde_json::from_str(text)?;
    file.to_dfa(complete_with_sink)
}

pub fn dfa_to_json(dfa: &Dfa) -> String {
    serde_json::to_string_pretty(&DfaFile::from(dfa)).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QfaFile {
    pub dimension: usize,
    pub alphabet: Vec<String>,
    pub start: usize,
    pub acc: Vec<usize>,
    pub rej: Vec<usize>,
    pub unitaries: BTreeMap<String, Vec<[f64; 2]>>,
}

impl From<&Qfa> for QfaFile {
    fn from(q: &Qfa) -> Self {
        let unitaries = q
            .unitaries()
            .into_iter()
            .map(|(sym, m)| {
                let flat = (0..m.nrows())
                    .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
                    .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
                    .collect();
                (sym.to_char().to_string(), flat)
            })
            .collect();
        QfaFile {
            dimension: q.dimension(),
            alphabet: q.alphabet().iter().map(|c| c.to_string()).collect(),
            start: q.start(),
            acc: q.accepting(),
            rej: q.rejecting(),
            unitaries,
        }
    }
}

impl QfaFile {
    /// Builds the machine and checks unitarity within `tol`.
    pub fn to_qfa(&self, tol: f64) -> Result<Qfa, IoError> {
        let q = self.to_qfa_unchecked()?;
        q.ensure_unitary(tol)?;
        Ok(q)
    }

    /// Builds the machine without the unitarity check, for auditing.
    pub fn to_qfa_unchecked(&self) -> Result<Qfa, IoError> {
        let d = self.dimension;
        let alphabet = self.alphabet.iter().map(|s| single_char(s, "symbol")).collect::<Result<Vec<_>, _>>()?;
        let mut unitaries = Vec::with_capacity(self.unitaries.len());
        for (sym, flat) in &self.unitaries {
            let symbol = Symbol::from_char(single_char(sym, "unitary key")?);
            if flat.len() != d * d {
                return Err(IoError::Schema(format!(
                    "matrix for `{sym}` has {} entries, expected {}",
                    flat.len(),
                    d * d
                )));
            }
            let m = CMatrix::from_fn(d, d, |i, j| {
                let [re, im] = flat[i * d + j];
                C64::new(re, im)
            });
            unitaries.push((symbol, m));
        }
        Ok(Qfa::new(d, alphabet, self.start, &self.acc, &self.rej, unitaries)?)
    }
}

pub fn parse_qfa(text: &str, tol: f64) -> Result<Qfa, IoError> {
    let file: QfaFile = serde_json::from_str(text)?;
    file.to_qfa(tol)
}

pub fn parse_qfa_unchecked(text: &str) -> Result<Qfa, IoError> {
    let file: QfaFile = serde_json::from_str(text)?;
    file.to_qfa_unchecked()
}

pub fn qfa_to_json(qfa: &Qfa) -> String {
    serde_json::to_string_pretty(&QfaFile::from(qfa)).expect("plain data serializes")
}

/// A witness, optionally bundled with the DFA it refers to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub witness: FragmentWitness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dfa: Option<DfaFile>,
}

pub fn parse_witness(text: &str) -> Result<WitnessFile, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn witness_to_json(witness: &FragmentWitness, dfa: Option<&Dfa>) -> String {
    let file = WitnessFile { witness: witness.clone(), dfa: dfa.map(DfaFile::from) };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// Plan summary with state names and exact fractions written as strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanReport {
    pub a_states: Vec<String>,
    pub components: Vec<Vec<String>>,
    pub entry_states: Vec<String>,
    /// Component indices from smallest language to largest.
    pub chain: Vec<usize>,
    pub a_counts: Vec<usize>,
    pub n: usize,
    pub p: String,
    pub betas: Vec<String>,
}

impl From<&SynthesisPlan> for PlanReport {
    fn from(plan: &SynthesisPlan) -> Self {
        let name = |s: &usize| plan.dfa.state_name(*s).to_string();
        PlanReport {
            a_states: plan.a_states.iter().map(name).collect(),
            components: plan.components.iter().map(|c| c.iter().map(name).collect()).collect(),
            entry_states: plan.entry_states.iter().map(name).collect(),
            chain: plan.chain.clone(),
            a_counts: plan.a_counts.clone(),
            n: plan.n,
            p: plan.p.to_string(),
            betas: plan.betas.iter().map(|b| b.to_string()).collect(),
        }
    }
}
