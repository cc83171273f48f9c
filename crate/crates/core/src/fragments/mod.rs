//! Forbidden patterns in minimal DFAs.
//!
//! Detectors quantify over transition-monoid elements instead of words, so
//! every "there is a word" becomes a finite search. Witness words are the
//! shortest words recorded for the chosen elements. Verification replays the
//! bound words literally and is independent of the detectors.

mod classify;
mod search;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{AutomatonError, Dfa};

pub use classify::{classify, classify_with_cap, Classification, Verdict};
pub use search::{
    detect_t2, detect_t3, detect_two_cycles, recurrent_under, search_6word, SeparationTable, SixWordSearch,
    DEFAULT_SEARCH_BUDGET,
};
pub use verify::{verify_witness, ConditionCheck, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FragmentKind {
    /// A state pumped into a different state it can be reached back from.
    T2,
    /// Two pumped, mutually recurrent states told apart by two words.
    T3,
    /// A pumped state followed by a second, different pumped state.
    TwoCycles,
    /// Two branching levels of three words each.
    SixWord,
    /// Arbitrary number of levels of words.
    General,
}

impl FragmentKind {
    pub fn name(self) -> &'static str {
        match self {
            FragmentKind::T2 => "T2",
            FragmentKind::T3 => "T3",
            FragmentKind::TwoCycles => "TwoCycles",
            FragmentKind::SixWord => "SixWord",
            FragmentKind::General => "General",
        }
    }

    /// Required state and word bindings. `General` uses `q1` plus word
    /// bindings named `a<level>_<index>`, checked separately.
    pub fn bindings(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            FragmentKind::T2 => (&["q1", "q2"], &["x", "y"]),
            FragmentKind::T3 => (&["q1", "q2", "q3"], &["x", "y", "z1", "z2"]),
            FragmentKind::TwoCycles => (&["q1", "q2", "q3"], &["x", "y"]),
            FragmentKind::SixWord => (
                &["q0", "qa", "qb", "qc", "qad", "qae", "qbd", "qbf", "qce", "qcf"],
                &["a", "b", "c", "d", "e", "f", "g", "h", "i"],
            ),
            FragmentKind::General => (&["q1"], &[]),
        }
    }
}

impl fmt::Display for FragmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("binding `{0}` is missing")]
    UnboundName(String),
    #[error("binding `{binding}` names unknown state `{state}`")]
    UnknownState { binding: String, state: String },
    #[error("word `{binding}` is not over the alphabet: {source}")]
    BadWord { binding: String, source: AutomatonError },
    #[error("malformed general witness: {0}")]
    MalformedGeneral(String),
}

/// States and words instantiating one forbidden pattern.
///
/// States are referred to by name so witnesses stay meaningful in files.
/// `monoid_elements` records, per word binding, the image of every state
/// (in state-index order) under that word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentWitness {
    pub kind: FragmentKind,
    pub states: BTreeMap<String, String>,
    pub words: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub monoid_elements: BTreeMap<String, Vec<String>>,
}

impl FragmentWitness {
    pub fn new(kind: FragmentKind) -> Self {
        FragmentWitness { kind, states: BTreeMap::new(), words: BTreeMap::new(), monoid_elements: BTreeMap::new() }
    }

    pub fn bind_state(&mut self, binding: &str, state: &str) -> &mut Self {
        self.states.insert(binding.to_string(), state.to_string());
        self
    }

    pub fn bind_word(&mut self, binding: &str, word: &str) -> &mut Self {
        self.words.insert(binding.to_string(), word.to_string());
        self
    }

    /// Recomputes `monoid_elements` from the word bindings.
    pub fn fill_mappings(&mut self, dfa: &Dfa) -> Result<(), FragmentError> {
        let mut out = BTreeMap::new();
        for (k, w) in &self.words {
            let letters =
                dfa.encode(w).map_err(|source| FragmentError::BadWord { binding: k.clone(), source })?;
            let images = (0..dfa.num_states())
                .map(|s| dfa.state_name(dfa.run_indices(s, &letters)).to_string())
                .collect();
            out.insert(k.clone(), images);
        }
        self.monoid_elements = out;
        Ok(())
    }

    /// Swaps the roles of the two separating words, which turns a pattern
    /// of a language into the same pattern of its complement.
    pub fn complemented(&self) -> FragmentWitness {
        let mut w = self.clone();
        let swap = |m: &mut BTreeMap<String, String>, a: &str, b: &str| {
            if let (Some(x), Some(y)) = (m.remove(a), m.remove(b)) {
                m.insert(a.to_string(), y);
                m.insert(b.to_string(), x);
            }
        };
        if self.kind == FragmentKind::T3 {
            swap(&mut w.words, "z1", "z2");
            if let (Some(x), Some(y)) = (w.monoid_elements.remove("z1"), w.monoid_elements.remove("z2")) {
                w.monoid_elements.insert("z1".into(), y);
                w.monoid_elements.insert("z2".into(), x);
            }
        }
        w
    }

    pub(crate) fn state(&self, dfa: &Dfa, binding: &str) -> Result<usize, FragmentError> {
        let name = self.states.get(binding).ok_or_else(|| FragmentError::UnboundName(binding.to_string()))?;
        dfa.state_by_name(name)
            .ok_or_else(|| FragmentError::UnknownState { binding: binding.to_string(), state: name.clone() })
    }

    pub(crate) fn word(&self, dfa: &Dfa, binding: &str) -> Result<Vec<usize>, FragmentError> {
        let w = self.words.get(binding).ok_or_else(|| FragmentError::UnboundName(binding.to_string()))?;
        dfa.encode(w).map_err(|source| FragmentError::BadWord { binding: binding.to_string(), source })
    }
}
