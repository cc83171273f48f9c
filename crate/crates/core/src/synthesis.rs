//! Compiling fragment-free DFAs into measure-many QFAs.
//!
//! The minimal DFA splits into its closed components B_1..B_n (on which
//! every letter permutes states) and the rest, A. Each B_i becomes a
//! permutation machine started in its entry state, A becomes a reversible
//! machine that halts with a biased coin when the run leaves A, and the
//! pieces are mixed with weights p = (n+1)/(2n+1) for A and 1/(2n+1) for
//! each B_i.

use std::collections::{HashSet, VecDeque};

use num_rational::Rational64;
use thiserror::Error;

use crate::automata::{closed_sccs, language_contains, minimize, Dfa, StateId};
use crate::combinators::{mix, MixError, MixtureSpec};
use crate::fragments::{classify, Classification};
use crate::linalg::{complete_unitary, permutation_matrix};
use crate::qfa::{CMatrix, CVector, Qfa, Symbol, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error("letter `{letter}` does not permute closed component {component}")]
    PermutationViolation { component: usize, letter: char },
    #[error("no unique entry state for closed component {component}")]
    EntryStateAmbiguous { component: usize },
    #[error("languages of components {0} and {1} are incomparable")]
    ChainViolation(usize, usize),
    #[error("the non-closed part is not letter-injective ({} collisions); restructure it into a reversible automaton first", .0.len())]
    NotReversible(Vec<Collision>),
    #[error("language is not in the constructible class: {0}")]
    NotConstructible(String),
    #[error(transparent)]
    Mix(#[from] MixError),
}

/// The decomposition driving the construction. State indices refer to
/// `dfa`, the canonical minimal automaton.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisPlan {
    pub dfa: Dfa,
    pub a_states: Vec<StateId>,
    /// Closed components, sorted by smallest member.
    pub components: Vec<Vec<StateId>>,
    /// Entry state of each component.
    pub entry_states: Vec<StateId>,
    /// `contains[i][j]` is true when L_j ⊆ L_i, with L_i the language
    /// accepted from entry state i.
    pub contains: Vec<Vec<bool>>,
    /// Component indices from smallest language to largest.
    pub chain: Vec<usize>,
    /// a_i = number of j with L_j ⊆ L_i.
    pub a_counts: Vec<usize>,
    pub n: usize,
    pub p: Rational64,
    /// Accept weight of the A-machine on leaving A into component i,
    /// a_i / (n+1).
    pub betas: Vec<Rational64>,
}

impl SynthesisPlan {
    pub fn p_f64(&self) -> f64 {
        ratio_f64(self.p)
    }

    /// Component index containing `s`, if any.
    pub fn component_of(&self, s: StateId) -> Option<usize> {
        self.components.iter().position(|c| c.contains(&s))
    }
}

pub(crate) fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Computes the decomposition for `dfa` (minimized first).
pub fn plan(dfa: &Dfa) -> Result<SynthesisPlan, SynthesisError> {
    let dfa = minimize(dfa);
    let k = dfa.alphabet().len();
    let components = closed_sccs(&dfa);
    let in_b: HashSet<StateId> = components.iter().flatten().copied().collect();
    let a_states: Vec<StateId> = (0..dfa.num_states()).filter(|s| !in_b.contains(s)).collect();

    for (ci, comp) in components.iter().enumerate() {
        for l in 0..k {
            let images: HashSet<StateId> = comp.iter().map(|&s| dfa.step(s, l)).collect();
            if images.len() != comp.len() || !images.iter().all(|t| comp.contains(t)) {
                return Err(SynthesisError::PermutationViolation { component: ci, letter: dfa.alphabet()[l] });
            }
        }
    }

    let mut entry_states = Vec::with_capacity(components.len());
    for (ci, comp) in components.iter().enumerate() {
        let e = dfa.shortest_path_to(dfa.start(), |s| comp.contains(&s)).expect("minimal DFAs are connected");
        let target = dfa.run_indices(dfa.start(), &e);
        let q = *comp
            .iter()
            .find(|&&s| dfa.run_indices(s, &e) == target)
            .ok_or(SynthesisError::EntryStateAmbiguous { component: ci })?;
        if !entry_certified(&dfa, comp, q) {
            return Err(SynthesisError::EntryStateAmbiguous { component: ci });
        }
        entry_states.push(q);
    }

    let n = components.len();
    let langs: Vec<Dfa> = entry_states.iter().map(|&q| dfa.with_start(q).expect("in range")).collect();
    let mut contains = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            // L_j ⊆ L_i
            contains[i][j] = language_contains(&langs[j], langs[j].start(), &langs[i], langs[i].start())
                .expect("same alphabet")
                .contained;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !contains[i][j] && !contains[j][i] {
                return Err(SynthesisError::ChainViolation(i, j));
            }
        }
    }
    let a_counts: Vec<usize> = (0..n).map(|i| contains[i].iter().filter(|&&b| b).count()).collect();
    let mut chain: Vec<usize> = (0..n).collect();
    chain.sort_by_key(|&i| (a_counts[i], i));
    let den = (n + 1) as i64;
    let betas = a_counts.iter().map(|&a| Rational64::new(a as i64, den)).collect();
    let p = Rational64::new(n as i64 + 1, 2 * n as i64 + 1);
    Ok(SynthesisPlan { dfa, a_states, components, entry_states, contains, chain, a_counts, n, p, betas })
}

/// Product reachability from (start, q): every reachable pair whose first
/// state lies in `comp` must be diagonal.
fn entry_certified(dfa: &Dfa, comp: &[StateId], q: StateId) -> bool {
    let n = dfa.num_states();
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::from([(dfa.start(), q)]);
    seen[dfa.start() * n + q] = true;
    while let Some((s, t)) = queue.pop_front() {
        if comp.contains(&s) && s != t {
            return false;
        }
        for l in 0..dfa.alphabet().len() {
            let (s2, t2) = (dfa.step(s, l), dfa.step(t, l));
            if !seen[s2 * n + t2] {
                seen[s2 * n + t2] = true;
                queue.push_back((s2, t2));
            }
        }
    }
    true
}

/// Two A-states sent by one letter to the same A-state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub letter: char,
    pub first: StateId,
    pub second: StateId,
    pub target: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversibilityReport {
    pub collisions: Vec<Collision>,
}

impl ReversibilityReport {
    pub fn passed(&self) -> bool {
        self.collisions.is_empty()
    }
}

/// Every letter, restricted to moves that stay inside A, must be injective.
pub fn check_reversible_a(plan: &SynthesisPlan) -> ReversibilityReport {
    let dfa = &plan.dfa;
    let in_a: HashSet<StateId> = plan.a_states.iter().copied().collect();
    let mut collisions = Vec::new();
    for (l, &letter) in dfa.alphabet().iter().enumerate() {
        let mut first_source = std::collections::BTreeMap::new();
        for &s in &plan.a_states {
            let t = dfa.step(s, l);
            if !in_a.contains(&t) {
                continue;
            }
            if let Some(&s0) = first_source.get(&t) {
                collisions.push(Collision { letter, first: s0, second: s, target: t });
            } else {
                first_source.insert(t, s);
            }
        }
    }
    ReversibilityReport { collisions }
}

/// A compiled machine together with its guarantee.
#[derive(Debug, Clone)]
pub struct Synthesized {
    pub qfa: Qfa,
    pub p: Rational64,
    pub plan: SynthesisPlan,
}

/// Compiles `dfa` into a QFA recognizing its language with probability
/// (n+1)/(2n+1).
pub fn synthesize(dfa: &Dfa) -> Result<Synthesized, SynthesisError> {
    let verdict = classify(dfa);
    let plan = match verdict.classification {
        Classification::RecognizableConstructible(plan) => plan,
        other => return Err(SynthesisError::NotConstructible(other.describe())),
    };
    let report = check_reversible_a(&plan);
    if !report.passed() {
        return Err(SynthesisError::NotReversible(report.collisions));
    }
    let qfa = build(&plan)?;
    Ok(Synthesized { qfa, p: plan.p, plan })
}

fn build(plan: &SynthesisPlan) -> Result<Qfa, SynthesisError> {
    let dfa = &plan.dfa;
    let n = plan.n;
    let branch = 1.0 / (2 * n + 1) as f64;
    let p = plan.p_f64();
    let mut parts: Vec<(Qfa, f64)> = plan
        .components
        .iter()
        .zip(&plan.entry_states)
        .map(|(comp, &q)| (component_machine(dfa, comp, q), branch))
        .collect();
    let (mut accept_bias, mut reject_bias) = (0.0, 0.0);
    match plan.component_of(dfa.start()) {
        // the whole automaton is one closed component; the A-machine would
        // leave A before reading anything, so it is a fixed coin
        Some(i) => {
            let beta = ratio_f64(plan.betas[i]);
            accept_bias = p * beta;
            reject_bias = p * (1.0 - beta);
        }
        None => parts.insert(0, (transient_machine(plan), p)),
    }
    Ok(mix(&MixtureSpec { alphabet: dfa.alphabet().to_vec(), parts, accept_bias, reject_bias })?)
}

/// Permutation machine over one closed component: each state has a halting
/// twin that `$` swaps it with.
fn component_machine(dfa: &Dfa, comp: &[StateId], start: StateId) -> Qfa {
    let m = comp.len();
    let pos = |s: StateId| comp.iter().position(|&t| t == s).expect("closed component");
    let mut unitaries = vec![(Symbol::LeftEnd, CMatrix::identity(2 * m, 2 * m))];
    for (l, &c) in dfa.alphabet().iter().enumerate() {
        let perm: Vec<usize> = (0..2 * m).map(|i| if i < m { pos(dfa.step(comp[i], l)) } else { i }).collect();
        unitaries.push((Symbol::Letter(c), permutation_matrix(&perm)));
    }
    let swap: Vec<usize> = (0..2 * m).map(|i| (i + m) % (2 * m)).collect();
    unitaries.push((Symbol::RightEnd, permutation_matrix(&swap)));
    let acc: Vec<usize> = (0..m).filter(|&i| dfa.is_accepting(comp[i])).map(|i| m + i).collect();
    let rej: Vec<usize> = (0..m).filter(|&i| !dfa.is_accepting(comp[i])).map(|i| m + i).collect();
    Qfa::new(2 * m, dfa.alphabet().to_vec(), pos(start), &acc, &rej, unitaries).expect("consistent shapes")
}

/// Reversible machine over A. Basis: A-states, then one accepting and one
/// rejecting halting state per A-state.
fn transient_machine(plan: &SynthesisPlan) -> Qfa {
    let dfa = &plan.dfa;
    let a = &plan.a_states;
    let m = a.len();
    let dim = 3 * m;
    let pos = |s: StateId| a.iter().position(|&t| t == s);
    let basis = |i: usize| {
        let mut v = CVector::zeros(dim);
        v[i] = C64::new(1.0, 0.0);
        v
    };
    let mut unitaries = vec![(Symbol::LeftEnd, CMatrix::identity(dim, dim))];
    for (l, &c) in dfa.alphabet().iter().enumerate() {
        let fixed: Vec<(usize, CVector)> = (0..m)
            .map(|i| {
                let t = dfa.step(a[i], l);
                let col = match pos(t) {
                    Some(j) => basis(j),
                    None => {
                        let ci = plan.component_of(t).expect("outside A means inside some component");
                        let beta = ratio_f64(plan.betas[ci]);
                        let mut v = CVector::zeros(dim);
                        v[m + i] = C64::new(beta.sqrt(), 0.0);
                        v[2 * m + i] = C64::new((1.0 - beta).sqrt(), 0.0);
                        v
                    }
                };
                (i, col)
            })
            .collect();
        unitaries.push((Symbol::Letter(c), complete_unitary(dim, &fixed)));
    }
    let end: Vec<(usize, CVector)> = (0..m)
        .map(|i| (i, basis(if dfa.is_accepting(a[i]) { m + i } else { 2 * m + i })))
        .collect();
    unitaries.push((Symbol::RightEnd, complete_unitary(dim, &end)));
    let acc: Vec<usize> = (m..2 * m).collect();
    let rej: Vec<usize> = (2 * m..3 * m).collect();
    let start = pos(dfa.start()).expect("start is in A");
    Qfa::new(dim, dfa.alphabet().to_vec(), start, &acc, &rej, unitaries).expect("consistent shapes")
}

/// Embeds a DFA whose letters all permute its states as a QFA that accepts
/// exactly its language with certainty.
pub fn reversible_qfa(dfa: &Dfa) -> Result<Qfa, SynthesisError> {
    let all: Vec<StateId> = (0..dfa.num_states()).collect();
    for (l, &letter) in dfa.alphabet().iter().enumerate() {
        let images: HashSet<StateId> = all.iter().map(|&s| dfa.step(s, l)).collect();
        if images.len() != all.len() {
            return Err(SynthesisError::PermutationViolation { component: 0, letter });
        }
    }
    Ok(component_machine(dfa, &all, dfa.start()))
}
