use crate::automata::{minimize, transition_monoid, Dfa, DEFAULT_MONOID_CAP};
use crate::synthesis::{plan, SynthesisPlan};

use super::{detect_t2, detect_t3, detect_two_cycles, FragmentWitness};

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// A necessary-condition pattern was found.
    NotRecognizable(FragmentWitness),
    /// No pattern, complete monoid, and the construction plan succeeded.
    RecognizableConstructible(SynthesisPlan),
    /// The automaton has two cycles in a row, so the criterion does not
    /// decide it.
    OutsideClassU(FragmentWitness),
    Inconclusive(String),
}

impl Classification {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Classification::NotRecognizable(_) => "NotRecognizable",
            Classification::RecognizableConstructible(_) => "RecognizableConstructible",
            Classification::OutsideClassU(_) => "OutsideClassU",
            Classification::Inconclusive(_) => "Inconclusive",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Classification::NotRecognizable(w) => format!("NotRecognizable ({} pattern)", w.kind),
            Classification::RecognizableConstructible(p) => format!("RecognizableConstructible (p = {})", p.p),
            Classification::OutsideClassU(_) => "OutsideClassU (two cycles in a row)".to_string(),
            Classification::Inconclusive(r) => format!("Inconclusive ({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub classification: Classification,
    pub monoid_complete: bool,
    pub monoid_size: usize,
    /// The canonical minimal DFA every witness refers to.
    pub minimal: Dfa,
    /// A T2 or T3 pattern, reported even when the verdict is OutsideClassU.
    pub necessary_condition_witness: Option<FragmentWitness>,
}

pub fn classify(dfa: &Dfa) -> Verdict {
    classify_with_cap(dfa, DEFAULT_MONOID_CAP)
}

/// Classifies the language of `dfa`, enumerating at most `cap` monoid
/// elements. Patterns found in a partial monoid are still genuine; only
/// absence needs the complete monoid.
pub fn classify_with_cap(dfa: &Dfa, cap: usize) -> Verdict {
    let minimal = minimize(dfa);
    let monoid = transition_monoid(&minimal, cap);
    let two = detect_two_cycles(&minimal, &monoid);
    let necessary = detect_t2(&minimal, &monoid).or_else(|| detect_t3(&minimal, &monoid));
    let classification = if let Some(w) = two {
        Classification::OutsideClassU(w)
    } else if let Some(w) = necessary.clone() {
        Classification::NotRecognizable(w)
    } else if !monoid.is_complete() {
        Classification::Inconclusive(format!(
            "monoid enumeration stopped at {} elements with no pattern found",
            monoid.len()
        ))
    } else {
        match plan(&minimal) {
            Ok(p) => Classification::RecognizableConstructible(p),
            Err(e) => Classification::Inconclusive(format!("internal consistency: {e}")),
        }
    };
    Verdict {
        classification,
        monoid_complete: monoid.is_complete(),
        monoid_size: monoid.len(),
        minimal,
        necessary_condition_witness: necessary,
    }
}
