//! Complete deterministic automata and the structural queries the rest of the
//! crate is built on: minimization, transition monoids, language containment
//! and closed strongly connected components.

mod minimize;
mod monoid;
mod scc;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use minimize::{minimize, minimize_with_map};
pub use monoid::{transition_monoid, Monoid, MonoidElement, DEFAULT_MONOID_CAP};
pub use scc::{closed_sccs, strongly_connected_components};

/// Index of a state inside a [`Dfa`].
pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("automaton has no states")]
    Empty,
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("duplicate alphabet symbol `{0}`")]
    DuplicateSymbol(char),
    #[error("symbol `{0}` is reserved for endmarkers")]
    ReservedSymbol(char),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("symbol `{symbol}` is not in the alphabet")]
    UnknownSymbol { symbol: char },
    #[error("transition table is not total: missing ({state}, {symbol})")]
    MissingTransition { state: String, symbol: char },
    #[error("automata have different alphabets")]
    AlphabetMismatch,
}

/// A complete DFA over a finite alphabet of single-character symbols.
///
/// States are addressed by index; names are kept for reporting and files.
/// The transition table is total by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    names: Vec<String>,
    alphabet: Vec<char>,
    start: StateId,
    accepting: Vec<bool>,
    // delta[state][letter index]
    delta: Vec<Vec<StateId>>,
}

impl Dfa {
    /// Builds a DFA, checking that names and symbols are unique and the
    /// table is total and in range.
    pub fn new(
        names: Vec<String>,
        alphabet: Vec<char>,
        start: StateId,
        accepting: Vec<bool>,
        delta: Vec<Vec<StateId>>,
    ) -> Result<Self, AutomatonError> {
        let n = names.len();
        if n == 0 {
            return Err(AutomatonError::Empty);
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(AutomatonError::DuplicateState(name.clone()));
            }
        }
        let mut seen_sym = HashSet::new();
        for &c in &alphabet {
            if c == crate::qfa::LEFT_ENDMARKER || c == crate::qfa::RIGHT_ENDMARKER {
                return Err(AutomatonError::ReservedSymbol(c));
            }
            if !seen_sym.insert(c) {
                return Err(AutomatonError::DuplicateSymbol(c));
            }
        }
        if start >= n {
            return Err(AutomatonError::StateOutOfRange(start));
        }
        if accepting.len() != n || delta.len() != n {
            return Err(AutomatonError::StateOutOfRange(accepting.len().max(delta.len())));
        }
        for (s, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                let symbol = alphabet.get(row.len()).copied().unwrap_or('?');
                return Err(AutomatonError::MissingTransition { state: names[s].clone(), symbol });
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= n) {
                return Err(AutomatonError::StateOutOfRange(bad));
            }
        }
        Ok(Dfa { names, alphabet, start, accepting, delta })
    }

    /// Builds a DFA with states named `q0..q{n-1}` from closures.
    pub fn from_fn(
        n: usize,
        alphabet: &[char],
        start: StateId,
        accepting: impl Fn(StateId) -> bool,
        delta: impl Fn(StateId, char) -> StateId,
    ) -> Result<Self, AutomatonError> {
        let names = (0..n).map(|i| format!("q{i}")).collect();
        let acc = (0..n).map(&accepting).collect();
        let table = (0..n).map(|s| alphabet.iter().map(|&c| delta(s, c)).collect()).collect();
        Dfa::new(names, alphabet.to_vec(), start, acc, table)
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn letter_index(&self, c: char) -> Option<usize> {
        self.alphabet.iter().position(|&a| a == c)
    }

    /// Transition on a letter given by its alphabet index.
    #[inline]
    pub fn step(&self, s: StateId, letter: usize) -> StateId {
        self.delta[s][letter]
    }

    /// Row of the transition table for a state, indexed by letter.
    pub fn row(&self, s: StateId) -> &[StateId] {
        &self.delta[s]
    }

    /// Converts a word to letter indices.
    pub fn encode(&self, word: &str) -> Result<Vec<usize>, AutomatonError> {
        word.chars()
            .map(|c| self.letter_index(c).ok_or(AutomatonError::UnknownSymbol { symbol: c }))
            .collect()
    }

    pub fn decode(&self, letters: &[usize]) -> String {
        letters.iter().map(|&l| self.alphabet[l]).collect()
    }

    pub fn run_indices(&self, from: StateId, letters: &[usize]) -> StateId {
        letters.iter().fold(from, |s, &l| self.delta[s][l])
    }

    /// State reached from `from` after reading `word`.
    pub fn run_from(&self, from: StateId, word: &str) -> Result<StateId, AutomatonError> {
        let mut s = from;
        for c in word.chars() {
            let l = self.letter_index(c).ok_or(AutomatonError::UnknownSymbol { symbol: c })?;
            s = self.delta[s][l];
        }
        Ok(s)
    }

    pub fn accepts(&self, word: &str) -> Result<bool, AutomatonError> {
        Ok(self.accepting[self.run_from(self.start, word)?])
    }

    /// Same automaton with accepting and rejecting states swapped.
    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        for a in d.accepting.iter_mut() {
            *a = !*a;
        }
        d
    }

    /// Same automaton with a different start state.
    pub fn with_start(&self, start: StateId) -> Result<Dfa, AutomatonError> {
        if start >= self.num_states() {
            return Err(AutomatonError::StateOutOfRange(start));
        }
        let mut d = self.clone();
        d.start = start;
        Ok(d)
    }

    /// States reachable from `from` (including itself) under any word.
    pub fn reachable_from(&self, from: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Shortest word (letter indices) leading from `from` to a state
    /// satisfying `target`, BFS in alphabet order.
    pub fn shortest_path_to(
        &self,
        from: StateId,
        target: impl Fn(StateId) -> bool,
    ) -> Option<Vec<usize>> {
        let n = self.num_states();
        let mut parent: Vec<Option<(StateId, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(s) = queue.pop_front() {
            if target(s) {
                let mut word = Vec::new();
                let mut cur = s;
                while let Some((p, l)) = parent[cur] {
                    word.push(l);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for (l, &t) in self.delta[s].iter().enumerate() {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, l));
                    queue.push_back(t);
                }
            }
        }
        None
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.names[self.start])?;
        for (s, row) in self.delta.iter().enumerate() {
            let mark = if self.accepting[s] { "*" } else { " " };
            write!(f, "{mark}{}:", self.names[s])?;
            for (l, &t) in row.iter().enumerate() {
                write!(f, " {}->{}", self.alphabet[l], self.names[t])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Outcome of a language containment query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Containment {
    pub contained: bool,
    /// Shortest word accepted from the first state but not the second.
    pub counterexample: Option<String>,
}

/// Decides L(d1, s1) ⊆ L(d2, s2) by searching the product for a reachable
/// pair (accepting, rejecting).
pub fn language_contains(
    d1: &Dfa,
    s1: StateId,
    d2: &Dfa,
    s2: StateId,
) -> Result<Containment, AutomatonError> {
    if d1.alphabet != d2.alphabet {
        let a: HashSet<_> = d1.alphabet.iter().collect();
        let b: HashSet<_> = d2.alphabet.iter().collect();
        if a != b {
            return Err(AutomatonError::AlphabetMismatch);
        }
    }
    if s1 >= d1.num_states() {
        return Err(AutomatonError::StateOutOfRange(s1));
    }
    if s2 >= d2.num_states() {
        return Err(AutomatonError::StateOutOfRange(s2));
    }
    // map d1's letter order onto d2's
    let remap: Vec<usize> = d1.alphabet.iter().map(|&c| d2.letter_index(c).unwrap()).collect();
    let n2 = d2.num_states();
    let key = |a: StateId, b: StateId| a * n2 + b;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; d1.num_states() * n2];
    let mut seen = vec![false; d1.num_states() * n2];
    let mut queue = VecDeque::from([(s1, s2)]);
    seen[key(s1, s2)] = true;
    while let Some((a, b)) = queue.pop_front() {
        if d1.accepting[a] && !d2.accepting[b] {
            let mut word = Vec::new();
            let mut cur = key(a, b);
            while let Some((p, l)) = parent[cur] {
                word.push(l);
                cur = p;
            }
            word.reverse();
            return Ok(Containment { contained: false, counterexample: Some(d1.decode(&word)) });
        }
        for l in 0..d1.alphabet.len() {
            let (na, nb) = (d1.delta[a][l], d2.delta[b][remap[l]]);
            let k = key(na, nb);
            if !seen[k] {
                seen[k] = true;
                parent[k] = Some((key(a, b), l));
                queue.push_back((na, nb));
            }
        }
    }
    Ok(Containment { contained: true, counterexample: None })
}

/// Shortest word `z` with `from_a·z` accepting and `from_b·z` rejecting,
/// both run in the same automaton.
pub fn separating_word(dfa: &Dfa, from_a: StateId, from_b: StateId) -> Option<Vec<usize>> {
    let n = dfa.num_states();
    let key = |a: StateId, b: StateId| a * n + b;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n * n];
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::from([(from_a, from_b)]);
    seen[key(from_a, from_b)] = true;
    while let Some((a, b)) = queue.pop_front() {
        if dfa.accepting[a] && !dfa.accepting[b] {
            let mut word = Vec::new();
            let mut cur = key(a, b);
            while let Some((p, l)) = parent[cur] {
                word.push(l);
                cur = p;
            }
            word.reverse();
            return Some(word);
        }
        for l in 0..dfa.alphabet.len() {
            let (na, nb) = (dfa.delta[a][l], dfa.delta[b][l]);
            let k = key(na, nb);
            if !seen[k] {
                seen[k] = true;
                parent[k] = Some((key(a, b), l));
                queue.push_back((na, nb));
            }
        }
    }
    None
}

/// Enumerates every word over `alphabet` of length at most `max_len`, in
/// length-lexicographic order.
pub fn words_up_to(alphabet: &[char], max_len: usize) -> impl Iterator<Item = String> + '_ {
    let k = alphabet.len();
    (0..=max_len).flat_map(move |len| {
        let total = if k == 0 { usize::from(len == 0) } else { k.pow(len as u32) };
        (0..total).map(move |mut idx| {
            let mut w = vec![' '; len];
            for slot in w.iter_mut().rev() {
                *slot = alphabet[idx % k];
                idx /= k;
            }
            w.into_iter().collect()
        })
    })
}
