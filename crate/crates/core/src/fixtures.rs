//! Reference languages, automata and machines.
//!
//! DFAs are built from small semantic trackers and then minimized, so they
//! are correct by construction; tests cross-check them against the string
//! predicates in [`oracle`].

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use thiserror::Error;

use crate::automata::{minimize, Dfa};
use crate::fragments::{FragmentKind, FragmentWitness};
use crate::linalg::real_matrix;
use crate::qfa::{Qfa, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    Unknown(String),
}

pub const ORACLE_NAMES: &[&str] = &["L1", "L2", "L3", "FIG12"];
pub const DFA_NAMES: &[&str] = &["G1", "G2", "G3", "FIG12", "AB_STAR", "T2_DEMO"];
pub const QFA_NAMES: &[&str] = &["K2", "K3", "K2_RAW_KAPPA"];
pub const WITNESS_NAMES: &[&str] = &["G1_T3", "FIG12_SIX_WORD"];

/// A named membership predicate over a fixed alphabet.
#[derive(Clone, Copy)]
pub struct LanguageOracle {
    name: &'static str,
    alphabet: &'static [char],
    predicate: fn(&str) -> bool,
}

impl LanguageOracle {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn alphabet(&self) -> &'static [char] {
        self.alphabet
    }

    pub fn contains(&self, word: &str) -> bool {
        (self.predicate)(word)
    }
}

impl std::fmt::Debug for LanguageOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LanguageOracle").field("name", &self.name).finish()
    }
}

const AB: &[char] = &['a', 'b'];
pub const FIG12_ALPHABET: &[char] = &['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i'];

/// (a-prefix length parity, Some(a-count after the first b) if a b occurs).
fn prefix_suffix(word: &str) -> (usize, Option<usize>) {
    match word.find('b') {
        None => (word.len() % 2, None),
        Some(i) => (i % 2, Some(word[i + 1..].chars().filter(|&c| c == 'a').count())),
    }
}

fn suffix_ok(word: &str) -> bool {
    prefix_suffix(word).1.is_none_or(|n| n % 2 == 1)
}

fn l1(word: &str) -> bool {
    suffix_ok(word)
}

fn l2(word: &str) -> bool {
    prefix_suffix(word).0 == 0 && suffix_ok(word)
}

fn l3(word: &str) -> bool {
    prefix_suffix(word).0 == 1 && suffix_ok(word)
}

/// Accepted third letters for each (first, middle) letter pair of the
/// nine-letter language, indexed `[x][y]` with x ∈ {a,b,c}, y ∈ {d,e,f}.
pub const FIG12_TABLE: [[&str; 3]; 3] = [["g", "g", ""], ["g", "ghi", "gh"], ["g", "ghi", ""]];

pub fn fig12_member(x: char, y: char, z: char) -> bool {
    let xi = (x as u8).wrapping_sub(b'a') as usize;
    let yi = (y as u8).wrapping_sub(b'd') as usize;
    xi < 3 && yi < 3 && FIG12_TABLE[xi][yi].contains(z)
}

/// Words x (a|b|c)* y (d|e|f)* z whose (x, y, z) is in the table.
fn fig12(word: &str) -> bool {
    let w: Vec<char> = word.chars().collect();
    if w.len() < 3 {
        return false;
    }
    let (x, z) = (w[0], w[w.len() - 1]);
    let middle = &w[1..w.len() - 1];
    let first = "abc".contains(x);
    let Some(k) = middle.iter().position(|c| "def".contains(*c)) else {
        return false;
    };
    first
        && middle[..k].iter().all(|c| "abc".contains(*c))
        && middle[k..].iter().all(|c| "def".contains(*c))
        && fig12_member(x, middle[k], z)
}

pub fn oracle(name: &str) -> Result<LanguageOracle, FixtureError> {
    let (name, alphabet, predicate): (&'static str, &'static [char], fn(&str) -> bool) = match name {
        "L1" => ("L1", AB, l1),
        "L2" => ("L2", AB, l2),
        "L3" => ("L3", AB, l3),
        "FIG12" => ("FIG12", FIG12_ALPHABET, fig12),
        _ => return Err(FixtureError::Unknown(name.to_string())),
    };
    Ok(LanguageOracle { name, alphabet, predicate })
}

/// Explores a tracker's reachable states breadth-first and returns the DFA
/// over them (not minimized).
pub fn tracker_dfa<T, S, A>(alphabet: &[char], init: T, step: S, accept: A) -> Dfa
where
    T: Clone + Eq + Hash,
    S: Fn(&T, char) -> T,
    A: Fn(&T) -> bool,
{
    let mut ids = HashMap::from([(init.clone(), 0usize)]);
    let mut states = vec![init];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(alphabet.len());
        for &c in alphabet {
            let t = step(&states[i], c);
            let next = ids.len();
            let id = *ids.entry(t.clone()).or_insert_with(|| {
                states.push(t);
                queue.push_back(next);
                next
            });
            row.push(id);
        }
        if delta.len() <= i {
            delta.resize(i + 1, Vec::new());
        }
        delta[i] = row;
    }
    let names = (0..states.len()).map(|i| format!("t{i}")).collect();
    let accepting = states.iter().map(&accept).collect();
    Dfa::new(names, alphabet.to_vec(), 0, accepting, delta).expect("tracker DFA is well-formed")
}

/// The 8-state product of (seen b, a-prefix parity, post-b a parity)
/// trackers with the given acceptance rule. Unreachable combinations are
/// kept so the raw automaton has all 8 states.
pub fn parity_product(accept: fn(bool, usize, usize) -> bool) -> Dfa {
    let decode = |s: usize| (s & 4 != 0, (s >> 1) & 1, s & 1);
    Dfa::from_fn(
        8,
        AB,
        0,
        |s| {
            let (b, p, q) = decode(s);
            accept(b, p, q)
        },
        |s, c| {
            let (b, p, q) = decode(s);
            match (b, c) {
                (false, 'a') => (p ^ 1) << 1,
                (false, _) => 4 | (p << 1),
                (true, 'a') => 4 | (p << 1) | (q ^ 1),
                (true, _) => s,
            }
        },
    )
    .expect("parity product is well-formed")
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Fig12State {
    Start,
    First(char),
    Second(char, char),
    Accept,
    Dead,
}

fn fig12_raw() -> Dfa {
    use Fig12State::*;
    tracker_dfa(
        FIG12_ALPHABET,
        Start,
        |s, c| match (s, c) {
            (Start, 'a'..='c') => First(c),
            (First(x), 'a'..='c') => First(*x),
            (First(x), 'd'..='f') => Second(*x, c),
            (Second(x, y), 'd'..='f') => Second(*x, *y),
            (Second(x, y), 'g'..='i') if fig12_member(*x, *y, c) => Accept,
            _ => Dead,
        },
        |s| *s == Accept,
    )
}

fn ab_star_raw() -> Dfa {
    // 0: reading a's, 1: reading b's, 2: dead
    tracker_dfa(AB, 0u8, |&s, c| match (s, c) {
        (0, 'a') => 0,
        (0 | 1, 'b') => 1,
        _ => 2,
    }, |&s| s < 2)
}

fn t2_demo_raw() -> Dfa {
    // q1 -a-> q2 -a-> q2, q2 -b-> q1, q1 -b-> q1
    Dfa::new(
        vec!["q1".into(), "q2".into()],
        AB.to_vec(),
        0,
        vec![false, true],
        vec![vec![1, 0], vec![1, 0]],
    )
    .expect("well-formed")
}

/// Minimal DFA fixtures, canonically numbered.
pub fn dfa_fixture(name: &str) -> Result<Dfa, FixtureError> {
    let raw = match name {
        "G1" => parity_product(|b, _, q| !b || q == 1),
        "G2" => parity_product(|b, p, q| p == 0 && (!b || q == 1)),
        "G3" => parity_product(|b, p, q| p == 1 && (!b || q == 1)),
        "FIG12" => fig12_raw(),
        "AB_STAR" => ab_star_raw(),
        "T2_DEMO" => t2_demo_raw(),
        _ => return Err(FixtureError::Unknown(name.to_string())),
    };
    Ok(minimize(&raw))
}

/// The language oracle a DFA fixture is built to match, if any.
pub fn oracle_for_dfa(name: &str) -> Option<LanguageOracle> {
    match name {
        "G1" => oracle("L1").ok(),
        "G2" => oracle("L2").ok(),
        "G3" => oracle("L3").ok(),
        "FIG12" => oracle("FIG12").ok(),
        _ => None,
    }
}

/// The six-word pattern in the FIG12 automaton: every word is the matching
/// single letter and the base state is the start.
pub fn fig12_six_word_witness() -> FragmentWitness {
    let dfa = dfa_fixture("FIG12").expect("known fixture");
    let name = |w: &str| dfa.state_name(dfa.run_from(dfa.start(), w).expect("valid word")).to_string();
    let mut w = FragmentWitness::new(FragmentKind::SixWord);
    w.bind_state("q0", &name(""));
    for x in ["a", "b", "c"] {
        w.bind_state(&format!("q{x}"), &name(x));
    }
    for xy in ["ad", "ae", "bd", "bf", "ce", "cf"] {
        w.bind_state(&format!("q{xy}"), &name(xy));
    }
    for c in FIG12_ALPHABET {
        w.bind_word(&c.to_string(), &c.to_string());
    }
    w.fill_mappings(&dfa).expect("letters are in the alphabet");
    w
}

/// The reference G1 pattern: x=b, y=aba, z1=ab, z2=b, with
/// q1 the start, q2 and q3 the two post-b states.
pub fn g1_reference_witness() -> FragmentWitness {
    let dfa = dfa_fixture("G1").expect("known fixture");
    let name = |w: &str| dfa.state_name(dfa.run_from(dfa.start(), w).expect("valid word")).to_string();
    let mut w = FragmentWitness::new(FragmentKind::T3);
    w.bind_state("q1", &name(""));
    w.bind_state("q2", &name("b"));
    w.bind_state("q3", &name("ba"));
    for (k, v) in [("x", "b"), ("y", "aba"), ("z1", "ab"), ("z2", "b")] {
        w.bind_word(k, v);
    }
    w.fill_mappings(&dfa).expect("letters are in the alphabet");
    w
}

/// A named witness together with the DFA its state names refer to.
pub fn witness_fixture(name: &str) -> Result<(FragmentWitness, Dfa), FixtureError> {
    match name {
        "G1_T3" => Ok((g1_reference_witness(), dfa_fixture("G1")?)),
        "FIG12_SIX_WORD" => Ok((fig12_six_word_witness(), dfa_fixture("FIG12")?)),
        _ => Err(FixtureError::Unknown(name.to_string())),
    }
}

fn k2_unitaries(raw_kappa: bool) -> Vec<(Symbol, crate::qfa::CMatrix)> {
    let t1 = (1.0f64 / 3.0).sqrt();
    let t2 = (2.0f64 / 3.0).sqrt();
    let h = 0.5f64.sqrt();
    let (k33, k34, k43, k44) = if raw_kappa { (-t2, t1, t2, t1) } else { (t2, t1, -t1, t2) };
    #[rustfmt::skip]
    let kappa = [
        t2,  t1,  0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        t1,  -t2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, k33, k34, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, k43, k44, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
    ];
    #[rustfmt::skip]
    let a = [
        0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
    ];
    #[rustfmt::skip]
    let b = [
        0.0, 0.0, 0.0, 0.0, h,    h,    0.0, 0.0,
        0.0, 1.0, 0.0, 0.0, 0.0,  0.0,  0.0, 0.0,
        0.0, 0.0, 1.0, 0.0, 0.0,  0.0,  0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,  0.0,  1.0, 0.0,
        h,   0.0, 0.0, 0.0, 0.5,  -0.5, 0.0, 0.0,
        h,   0.0, 0.0, 0.0, -0.5, 0.5,  0.0, 0.0,
        0.0, 0.0, 0.0, 1.0, 0.0,  0.0,  0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,  0.0,  0.0, 1.0,
    ];
    #[rustfmt::skip]
    let end = [
        0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0,
        1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    ];
    vec![
        (Symbol::LeftEnd, real_matrix(8, 8, &kappa)),
        (Symbol::Letter('a'), real_matrix(8, 8, &a)),
        (Symbol::Letter('b'), real_matrix(8, 8, &b)),
        (Symbol::RightEnd, real_matrix(8, 8, &end)),
    ]
}

/// The two eight-state machines for the even/odd a-prefix languages. Basis
/// index i is state q_{i+1}; indices 0–3 are non-halting, {4, 7} accept and
/// {5, 6} reject. `K2_RAW_KAPPA` keeps an unrepaired left-endmarker matrix
/// whose columns are not orthonormal, for exercising the validator.
pub fn qfa_fixture(name: &str) -> Result<Qfa, FixtureError> {
    let (start, raw) = match name {
        "K2" => (0, false),
        "K3" => (3, false),
        "K2_RAW_KAPPA" => (0, true),
        _ => return Err(FixtureError::Unknown(name.to_string())),
    };
    Ok(Qfa::new(8, AB.to_vec(), start, &[4, 7], &[5, 6], k2_unitaries(raw)).expect("fixture shapes are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::words_up_to;

    #[test]
    fn oracle_spot_values() {
        let (o1, o2, o3) = (oracle("L1").unwrap(), oracle("L2").unwrap(), oracle("L3").unwrap());
        assert!(o1.contains("ba") && o2.contains("ba") && !o3.contains("ba"));
        assert!(o1.contains("") && o2.contains("") && !o3.contains(""));
        assert!(o3.contains("aba"));
        assert!(oracle("L4").is_err());
    }

    #[test]
    fn fig12_oracle_spot_values() {
        let o = oracle("FIG12").unwrap();
        assert!(o.contains("adg"));
        assert!(o.contains("abcaddfeh") == fig12_member('a', 'd', 'h'));
        assert!(o.contains("bfh") && o.contains("cei"));
        assert!(!o.contains("aeh") && !o.contains("bdi") && !o.contains("cfg"));
        assert!(!o.contains("ag") && !o.contains("adgg") && !o.contains("dag"));
    }

    #[test]
    fn dfa_fixtures_match_oracles() {
        for name in ["G1", "G2", "G3"] {
            let d = dfa_fixture(name).unwrap();
            let o = oracle_for_dfa(name).unwrap();
            for w in words_up_to(&['a', 'b'], 10) {
                assert_eq!(d.accepts(&w).unwrap(), o.contains(&w), "{name} on {w:?}");
            }
        }
    }

    #[test]
    fn fixture_state_counts() {
        assert_eq!(dfa_fixture("G1").unwrap().num_states(), 3);
        assert_eq!(dfa_fixture("G2").unwrap().num_states(), 5);
        assert_eq!(dfa_fixture("G3").unwrap().num_states(), 5);
        assert_eq!(dfa_fixture("AB_STAR").unwrap().num_states(), 3);
        assert_eq!(dfa_fixture("T2_DEMO").unwrap().num_states(), 2);
        assert!(dfa_fixture("nope").is_err());
    }

    #[test]
    fn qfa_fixtures_load() {
        for name in QFA_NAMES {
            assert_eq!(qfa_fixture(name).unwrap().dimension(), 8);
        }
        assert_eq!(qfa_fixture("K3").unwrap().start(), 3);
    }
}
