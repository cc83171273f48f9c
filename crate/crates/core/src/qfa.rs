//! Measure-many one-way quantum finite automata.
//!
//! A machine is a family of unitaries indexed by the working alphabet
//! (input letters plus the endmarkers `^` and `$`) over a finite basis that
//! is partitioned into accepting, rejecting and non-halting states. Reading a
//! symbol applies its unitary and then measures the halting subspaces; the
//! surviving amplitude is the unnormalized non-halting projection.
//!
//! Probabilities are tracked exactly in double precision: acceptance of a
//! word is the sum of the accepting increments over `^ w $`. Whatever
//! non-halting mass is left after `$` counts as neither accept nor reject.

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Spelling of the left endmarker in words and files.
pub const LEFT_ENDMARKER: char = '^';
/// Spelling of the right endmarker in words and files.
pub const RIGHT_ENDMARKER: char = '$';

/// Unitarity tolerance for user-supplied machines.
pub const USER_TOLERANCE: f64 = 1e-9;
/// Unitarity tolerance for machines built by this crate.
pub const INTERNAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QfaError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("matrix for `{symbol}` is {rows}x{cols}, expected {dim}x{dim}")]
    ShapeMismatch { symbol: Symbol, rows: usize, cols: usize, dim: usize },
    #[error("no unitary given for `{0}`")]
    MissingUnitary(Symbol),
    #[error("symbol `{0}` is not in the working alphabet")]
    UnknownSymbol(char),
    #[error("duplicate alphabet symbol `{0}`")]
    DuplicateSymbol(char),
    #[error("symbol `{0}` is reserved for endmarkers")]
    ReservedSymbol(char),
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("basis state {0} is both accepting and rejecting")]
    OverlappingHalting(usize),
    #[error("state has length {got}, expected {dim}")]
    StateDimension { got: usize, dim: usize },
    #[error("transition matrices are not unitary within {tol:e} (worst `{symbol}`: {deviation:e})")]
    NotUnitary { symbol: Symbol, deviation: f64, tol: f64 },
    #[error("recognition probability must exceed 1/2, got {0}")]
    InvalidProbability(f64),
    #[error("alphabets differ")]
    AlphabetMismatch,
}

/// A member of the working alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    LeftEnd,
    Letter(char),
    RightEnd,
}

impl Symbol {
    pub fn to_char(self) -> char {
        match self {
            Symbol::LeftEnd => LEFT_ENDMARKER,
            Symbol::RightEnd => RIGHT_ENDMARKER,
            Symbol::Letter(c) => c,
        }
    }

    pub fn from_char(c: char) -> Symbol {
        match c {
            LEFT_ENDMARKER => Symbol::LeftEnd,
            RIGHT_ENDMARKER => Symbol::RightEnd,
            c => Symbol::Letter(c),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateRole {
    Accept,
    Reject,
    NonHalting,
}

/// Amplitude vector over the basis. Norm may be below one mid-run.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition(pub CVector);

impl Superposition {
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[i] = C64::new(1.0, 0.0);
        Superposition(v)
    }

    pub fn zeros(dim: usize) -> Self {
        Superposition(CVector::zeros(dim))
    }

    pub fn from_real(values: &[f64]) -> Self {
        Superposition(CVector::from_iterator(values.len(), values.iter().map(|&x| C64::new(x, 0.0))))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Result of reading one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    /// Non-halting projection after the measurement (unnormalized).
    pub state: Superposition,
    pub accept: f64,
    pub reject: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub symbol: Symbol,
    /// State after the unitary, before measuring.
    pub before_measure: Superposition,
    pub accept: f64,
    pub reject: f64,
    pub after: Superposition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub p_accept: f64,
    pub p_reject: f64,
    /// Non-halting mass remaining after the right endmarker.
    pub p_residual: f64,
    pub trace: Option<Vec<TraceStep>>,
}

impl RunOutcome {
    pub fn residual_flagged(&self, tol: f64) -> bool {
        self.p_residual > tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitarityReport {
    pub tol: f64,
    /// max |(U†U − I)_{ij}| per symbol, working alphabet order.
    pub deviations: Vec<(Symbol, f64)>,
}

impl UnitarityReport {
    pub fn passed(&self) -> bool {
        self.deviations.iter().all(|&(_, d)| d <= self.tol)
    }

    pub fn worst(&self) -> (Symbol, f64) {
        self.deviations
            .iter()
            .copied()
            .fold((Symbol::LeftEnd, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub word: String,
    pub in_language: bool,
    pub p_accept: f64,
    pub p_reject: f64,
}

/// Outcome of an exhaustive recognition check.
#[derive(Debug, Clone, PartialEq)]
pub struct RecognitionReport {
    pub p: f64,
    pub tol: f64,
    pub max_len: usize,
    pub words_checked: usize,
    /// min over w ∈ L of p_accept(w) − p (None when no word is in L).
    pub worst_accept_margin: Option<(String, f64)>,
    /// min over w ∉ L of p_reject(w) − p.
    pub worst_reject_margin: Option<(String, f64)>,
    pub counterexamples: Vec<Counterexample>,
    /// Words whose residual non-halting mass exceeded the tolerance.
    pub residual_words: usize,
}

impl RecognitionReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// A measure-many QFA.
#[derive(Debug, Clone, PartialEq)]
pub struct Qfa {
    dimension: usize,
    alphabet: Vec<char>,
    left: CMatrix,
    right: CMatrix,
    letters: Vec<CMatrix>,
    start: usize,
    roles: Vec<StateRole>,
}

impl Qfa {
    /// Assembles a machine. Shapes, indices and the halting partition are
    /// checked; unitarity is not (see [`Qfa::validate`]).
    pub fn new(
        dimension: usize,
        alphabet: Vec<char>,
        start: usize,
        acc: &[usize],
        rej: &[usize],
        unitaries: Vec<(Symbol, CMatrix)>,
    ) -> Result<Self, QfaError> {
        if dimension == 0 {
            return Err(QfaError::ZeroDimension);
        }
        for (i, &c) in alphabet.iter().enumerate() {
            if c == LEFT_ENDMARKER || c == RIGHT_ENDMARKER {
                return Err(QfaError::ReservedSymbol(c));
            }
            if alphabet[..i].contains(&c) {
                return Err(QfaError::DuplicateSymbol(c));
            }
        }
        if start >= dimension {
            return Err(QfaError::IndexOutOfRange(start));
        }
        let mut roles = vec![StateRole::NonHalting; dimension];
        for &i in acc {
            *roles.get_mut(i).ok_or(QfaError::IndexOutOfRange(i))? = StateRole::Accept;
        }
        for &i in rej {
            let r = roles.get_mut(i).ok_or(QfaError::IndexOutOfRange(i))?;
            if *r == StateRole::Accept {
                return Err(QfaError::OverlappingHalting(i));
            }
            *r = StateRole::Reject;
        }
        let mut left = None;
        let mut right = None;
        let mut letters: Vec<Option<CMatrix>> = vec![None; alphabet.len()];
        for (sym, m) in unitaries {
            if m.nrows() != dimension || m.ncols() != dimension {
                return Err(QfaError::ShapeMismatch {
                    symbol: sym,
                    rows: m.nrows(),
                    cols: m.ncols(),
                    dim: dimension,
                });
            }
            match sym {
                Symbol::LeftEnd => left = Some(m),
                Symbol::RightEnd => right = Some(m),
                Symbol::Letter(c) => {
                    let i = alphabet.iter().position(|&a| a == c).ok_or(QfaError::UnknownSymbol(c))?;
                    letters[i] = Some(m);
                }
            }
        }
        let left = left.ok_or(QfaError::MissingUnitary(Symbol::LeftEnd))?;
        let right = right.ok_or(QfaError::MissingUnitary(Symbol::RightEnd))?;
        let letters = letters
            .into_iter()
            .zip(&alphabet)
            .map(|(m, &c)| m.ok_or(QfaError::MissingUnitary(Symbol::Letter(c))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Qfa { dimension, alphabet, left, right, letters, start, roles })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn roles(&self) -> &[StateRole] {
        &self.roles
    }

    pub fn accepting(&self) -> Vec<usize> {
        self.indices_with(StateRole::Accept)
    }

    pub fn rejecting(&self) -> Vec<usize> {
        self.indices_with(StateRole::Reject)
    }

    pub fn non_halting(&self) -> Vec<usize> {
        self.indices_with(StateRole::NonHalting)
    }

    fn indices_with(&self, role: StateRole) -> Vec<usize> {
        (0..self.dimension).filter(|&i| self.roles[i] == role).collect()
    }

    /// Working alphabet: `^`, the letters in order, `$`.
    pub fn working_alphabet(&self) -> Vec<Symbol> {
        std::iter::once(Symbol::LeftEnd)
            .chain(self.alphabet.iter().map(|&c| Symbol::Letter(c)))
            .chain(std::iter::once(Symbol::RightEnd))
            .collect()
    }

    pub fn unitary(&self, symbol: Symbol) -> Result<&CMatrix, QfaError> {
        match symbol {
            Symbol::LeftEnd => Ok(&self.left),
            Symbol::RightEnd => Ok(&self.right),
            Symbol::Letter(c) => self
                .alphabet
                .iter()
                .position(|&a| a == c)
                .map(|i| &self.letters[i])
                .ok_or(QfaError::UnknownSymbol(c)),
        }
    }

    /// All unitaries in working-alphabet order.
    pub fn unitaries(&self) -> Vec<(Symbol, &CMatrix)> {
        self.working_alphabet().into_iter().map(|s| (s, self.unitary(s).unwrap())).collect()
    }

    pub(crate) fn with_roles(&self, roles: Vec<StateRole>) -> Qfa {
        Qfa { roles, ..self.clone() }
    }

    /// Parses a word over the working alphabet; `^` and `$` denote the
    /// endmarkers.
    pub fn parse_symbols(&self, word: &str) -> Result<Vec<Symbol>, QfaError> {
        word.chars()
            .map(|c| {
                let s = Symbol::from_char(c);
                match s {
                    Symbol::Letter(l) if !self.alphabet.contains(&l) => Err(QfaError::UnknownSymbol(l)),
                    _ => Ok(s),
                }
            })
            .collect()
    }

    /// Per-symbol deviation of U†U from the identity.
    pub fn validate(&self, tol: f64) -> UnitarityReport {
        let id = CMatrix::identity(self.dimension, self.dimension);
        let deviations = self
            .unitaries()
            .into_iter()
            .map(|(s, u)| {
                let gram = u.adjoint() * u - &id;
                (s, gram.iter().map(|z| z.norm()).fold(0.0, f64::max))
            })
            .collect();
        UnitarityReport { tol, deviations }
    }

    /// Errors with [`QfaError::NotUnitary`] unless every matrix passes.
    pub fn ensure_unitary(&self, tol: f64) -> Result<(), QfaError> {
        let report = self.validate(tol);
        if report.passed() {
            Ok(())
        } else {
            let (symbol, deviation) = report.worst();
            Err(QfaError::NotUnitary { symbol, deviation, tol })
        }
    }

    fn measure(&self, mut v: CVector) -> (CVector, f64, f64) {
        let (mut acc, mut rej) = (0.0, 0.0);
        for (i, z) in v.iter_mut().enumerate() {
            match self.roles[i] {
                StateRole::Accept => {
                    acc += z.norm_sqr();
                    *z = C64::new(0.0, 0.0);
                }
                StateRole::Reject => {
                    rej += z.norm_sqr();
                    *z = C64::new(0.0, 0.0);
                }
                StateRole::NonHalting => {}
            }
        }
        (v, acc, rej)
    }

    /// Reads one symbol: unitary, then measurement.
    pub fn step(&self, state: &Superposition, symbol: Symbol) -> Result<StepOutcome, QfaError> {
        if state.len() != self.dimension {
            return Err(QfaError::StateDimension { got: state.len(), dim: self.dimension });
        }
        let u = self.unitary(symbol)?;
        let (v, accept, reject) = self.measure(u * &state.0);
        Ok(StepOutcome { state: Superposition(v), accept, reject })
    }

    /// Runs `^ word $` from the start basis state.
    pub fn run(&self, word: &str, with_trace: bool) -> Result<RunOutcome, QfaError> {
        let mut symbols = vec![Symbol::LeftEnd];
        for c in word.chars() {
            if !self.alphabet.contains(&c) {
                return Err(QfaError::UnknownSymbol(c));
            }
            symbols.push(Symbol::Letter(c));
        }
        symbols.push(Symbol::RightEnd);

        let mut state = Superposition::basis(self.dimension, self.start);
        let (mut p_accept, mut p_reject) = (0.0, 0.0);
        let mut trace = with_trace.then(Vec::new);
        for sym in symbols {
            let u = self.unitary(sym)?;
            let before = u * &state.0;
            let (after, acc, rej) = self.measure(before.clone());
            p_accept += acc;
            p_reject += rej;
            state = Superposition(after);
            if let Some(t) = trace.as_mut() {
                t.push(TraceStep {
                    symbol: sym,
                    before_measure: Superposition(before),
                    accept: acc,
                    reject: rej,
                    after: state.clone(),
                });
            }
        }
        Ok(RunOutcome { p_accept, p_reject, p_residual: state.norm_sqr(), trace })
    }

    /// V′ for a single symbol: the unitary followed by the projection onto
    /// the non-halting subspace.
    pub fn nonhalting_step_operator(&self, symbol: Symbol) -> Result<CMatrix, QfaError> {
        let mut m = self.unitary(symbol)?.clone();
        for (i, role) in self.roles.iter().enumerate() {
            if *role != StateRole::NonHalting {
                m.row_mut(i).fill(C64::new(0.0, 0.0));
            }
        }
        Ok(m)
    }

    /// V′_w = P·V_{w_k} ⋯ P·V_{w_1}; the identity for the empty word.
    pub fn nonhalting_operator(&self, word: &[Symbol]) -> Result<CMatrix, QfaError> {
        let mut acc = CMatrix::identity(self.dimension, self.dimension);
        for &s in word {
            acc = self.nonhalting_step_operator(s)? * acc;
        }
        Ok(acc)
    }

    /// Checks every word up to `max_len` against `oracle`: members must be
    /// accepted and non-members rejected with probability at least `p − tol`.
    pub fn verify_recognition(
        &self,
        oracle: &dyn Fn(&str) -> bool,
        p: f64,
        max_len: usize,
        tol: f64,
    ) -> Result<RecognitionReport, QfaError> {
        if !(p > 0.5) {
            return Err(QfaError::InvalidProbability(p));
        }
        let letter_ops: Vec<&CMatrix> = self.letters.iter().collect();
        let mut report = RecognitionReport {
            p,
            tol,
            max_len,
            words_checked: 0,
            worst_accept_margin: None,
            worst_reject_margin: None,
            counterexamples: Vec::new(),
            residual_words: 0,
        };
        let start = Superposition::basis(self.dimension, self.start);
        let (after_left, acc0, rej0) = self.measure(&self.left * &start.0);
        // DFS over words, sharing prefixes
        let mut stack = vec![(String::new(), after_left, acc0, rej0)];
        while let Some((word, state, acc, rej)) = stack.pop() {
            let (rest, a_end, r_end) = self.measure(&self.right * &state);
            let p_accept = acc + a_end;
            let p_reject = rej + r_end;
            let residual: f64 = rest.iter().map(|z| z.norm_sqr()).sum();
            if residual > tol {
                report.residual_words += 1;
            }
            let member = oracle(&word);
            let (margin_slot, margin) = if member {
                (&mut report.worst_accept_margin, p_accept - p)
            } else {
                (&mut report.worst_reject_margin, p_reject - p)
            };
            if margin_slot.as_ref().is_none_or(|(w, m)| margin < *m || (margin == *m && word.len() < w.len())) {
                *margin_slot = Some((word.clone(), margin));
            }
            if margin < -tol {
                report.counterexamples.push(Counterexample {
                    word: word.clone(),
                    in_language: member,
                    p_accept,
                    p_reject,
                });
            }
            report.words_checked += 1;
            if word.chars().count() < max_len {
                for (i, u) in letter_ops.iter().enumerate().rev() {
                    let (next, a, r) = self.measure(*u * &state);
                    let mut w = word.clone();
                    w.push(self.alphabet[i]);
                    stack.push((w, next, acc + a, rej + r));
                }
            }
        }
        report.counterexamples.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
        Ok(report)
    }
}
