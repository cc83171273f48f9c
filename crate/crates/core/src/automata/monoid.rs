use std::collections::{HashMap, VecDeque};

use super::{Dfa, StateId};

/// Default bound on the number of enumerated monoid elements.
pub const DEFAULT_MONOID_CAP: usize = 20_000;

/// The state transformation induced by a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidElement {
    /// `mapping[s]` is the state reached from `s` after reading the word.
    pub mapping: Vec<StateId>,
    /// A shortest word inducing `mapping`, as letter indices.
    pub word: Vec<usize>,
}

impl MonoidElement {
    #[inline]
    pub fn apply(&self, s: StateId) -> StateId {
        self.mapping[s]
    }

    pub fn witness_word(&self, dfa: &Dfa) -> String {
        dfa.decode(&self.word)
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &t)| i == t)
    }
}

/// Transition monoid of a DFA, enumerated breadth-first from the identity.
#[derive(Debug, Clone)]
pub struct Monoid {
    elements: Vec<MonoidElement>,
    index: HashMap<Vec<StateId>, usize>,
    complete: bool,
}

impl Monoid {
    /// Elements in BFS order: identity first, then by witness-word length.
    pub fn elements(&self) -> &[MonoidElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// False when the enumeration stopped at the cap.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn find(&self, mapping: &[StateId]) -> Option<&MonoidElement> {
        self.index.get(mapping).map(|&i| &self.elements[i])
    }

    pub fn position(&self, mapping: &[StateId]) -> Option<usize> {
        self.index.get(mapping).copied()
    }
}

/// BFS closure of the letter transformations under composition.
///
/// `cap` is raised to `|alphabet| + 1` if smaller. The result is marked
/// incomplete exactly when more than `cap` distinct mappings exist.
pub fn transition_monoid(dfa: &Dfa, cap: usize) -> Monoid {
    let n = dfa.num_states();
    let k = dfa.alphabet().len();
    let cap = cap.max(k + 1);
    let identity: Vec<StateId> = (0..n).collect();
    let mut elements = vec![MonoidElement { mapping: identity.clone(), word: Vec::new() }];
    let mut index = HashMap::from([(identity, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    let mut complete = true;
    'bfs: while let Some(i) = queue.pop_front() {
        for l in 0..k {
            let mapping: Vec<StateId> =
                elements[i].mapping.iter().map(|&s| dfa.step(s, l)).collect();
            if index.contains_key(&mapping) {
                continue;
            }
            if elements.len() == cap {
                complete = false;
                break 'bfs;
            }
            let mut word = elements[i].word.clone();
            word.push(l);
            index.insert(mapping.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(MonoidElement { mapping, word });
        }
    }
    Monoid { elements, index, complete }
}
