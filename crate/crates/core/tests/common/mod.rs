//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use nalgebra::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qfalab::automata::{words_up_to, Dfa, StateId};
use qfalab::combinators::{mix, MixtureSpec};
use qfalab::qfa::{CMatrix, CVector, Qfa, Symbol};
use qfalab::synthesis::reversible_qfa;

pub fn random_dfa(rng: &mut ChaCha8Rng, max_states: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let alphabet: &[char] = if rng.gen_bool(0.75) { &['a', 'b'] } else { &['a', 'b', 'c'] };
    let acc: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let table: Vec<Vec<StateId>> = (0..n).map(|_| alphabet.iter().map(|_| rng.gen_range(0..n)).collect()).collect();
    Dfa::from_fn(n, alphabet, 0, |s| acc[s], |s, c| table[s][alphabet.iter().position(|&x| x == c).unwrap()])
        .unwrap()
}

/// States reachable from the start.
pub fn reachable(dfa: &Dfa) -> Vec<StateId> {
    let r = dfa.reachable_from(dfa.start());
    (0..dfa.num_states()).filter(|&s| r[s]).collect()
}

/// Two states are equivalent when they agree on every word of length at
/// most the number of states.
pub fn nerode_equivalent(dfa: &Dfa, s: StateId, t: StateId) -> bool {
    words_up_to(dfa.alphabet(), dfa.num_states()).all(|w| {
        dfa.is_accepting(dfa.run_from(s, &w).unwrap()) == dfa.is_accepting(dfa.run_from(t, &w).unwrap())
    })
}

/// Distinct state maps induced by words, grown one length at a time until a
/// length adds nothing new. Words of length L are handled as the maps of
/// length L-1 followed by one more letter, which keeps this polynomial in
/// the monoid size.
pub fn word_mappings(dfa: &Dfa) -> HashSet<Vec<StateId>> {
    let n = dfa.num_states();
    let identity: Vec<StateId> = (0..n).collect();
    let mut seen: HashSet<Vec<StateId>> = HashSet::from([identity.clone()]);
    let mut layer: HashSet<Vec<StateId>> = HashSet::from([identity]);
    loop {
        let next: HashSet<Vec<StateId>> = layer
            .iter()
            .flat_map(|m| (0..dfa.alphabet().len()).map(move |c| m.iter().map(|&s| dfa.step(s, c)).collect()))
            .collect();
        let before = seen.len();
        seen.extend(next.iter().cloned());
        if seen.len() == before {
            return seen;
        }
        layer = next;
    }
}

/// q is in a closed component iff everything reachable from q reaches q.
pub fn definitionally_closed(dfa: &Dfa, q: StateId) -> bool {
    let r = dfa.reachable_from(q);
    (0..dfa.num_states()).filter(|&s| r[s]).all(|s| dfa.reachable_from(s)[q])
}

/// Recurrence of q under {x, y}* checked word by word: every t of length at
/// most `depth` must have some continuation u, also of length at most
/// `depth`, with q·t·u = q.
pub fn recurrent_by_words(q: StateId, maps: &[&[StateId]], depth: usize) -> bool {
    let run = |mut s: StateId, t: &[usize]| {
        for &i in t {
            s = maps[i][s];
        }
        s
    };
    let words: Vec<Vec<usize>> = {
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &frontier {
                for i in 0..maps.len() {
                    let mut v: Vec<usize> = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    };
    let starts: BTreeSet<StateId> = words.iter().map(|t| run(q, t)).collect();
    starts.into_iter().all(|s| words.iter().any(|u| run(s, u) == q))
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Haar-ish random unitary: Q factor of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| Complex::new(gaussian(rng), gaussian(rng)));
    g.qr().q()
}

pub fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> CVector {
    CVector::from_fn(d, |_, _| Complex::new(gaussian(rng), gaussian(rng)))
}

/// Random valid QFA over {a, b} with one accepting and one rejecting state
/// (the last two). When `invariant > 0`, `a` maps the first `invariant`
/// non-halting states among themselves, so V′_a is isometric there.
pub fn random_qfa(rng: &mut ChaCha8Rng, d: usize, invariant: usize) -> Qfa {
    let mut a = random_unitary(rng, d);
    if invariant > 0 {
        a = CMatrix::zeros(d, d);
        let k = invariant;
        a.view_mut((0, 0), (k, k)).copy_from(&random_unitary(rng, k));
        a.view_mut((k, k), (d - k, d - k)).copy_from(&random_unitary(rng, d - k));
    }
    let unitaries = vec![
        (Symbol::LeftEnd, random_unitary(rng, d)),
        (Symbol::RightEnd, random_unitary(rng, d)),
        (Symbol::Letter('a'), a),
        (Symbol::Letter('b'), random_unitary(rng, d)),
    ];
    Qfa::new(d, vec!['a', 'b'], 0, &[d - 2], &[d - 1], unitaries).unwrap()
}

/// Machine for a permutation-DFA language that answers correctly with
/// probability exactly 3/4: run the exact machine half the time, otherwise
/// accept or reject outright with equal odds.
pub fn three_quarter_machine(dfa: &Dfa) -> Qfa {
    let exact = reversible_qfa(dfa).unwrap();
    mix(&MixtureSpec {
        alphabet: dfa.alphabet().to_vec(),
        parts: vec![(exact, 0.5)],
        accept_bias: 0.25,
        reject_bias: 0.25,
    })
    .unwrap()
}

/// Even number of occurrences of `letter`, over {a, b}.
pub fn even_count_dfa(letter: char) -> Dfa {
    Dfa::from_fn(2, &['a', 'b'], 0, |s| s == 0, |s, c| if c == letter { 1 - s } else { s }).unwrap()
}
