//! Closure operations on QFAs: complement, weighted mixtures and the union
//! built from them, plus the point-cloud separability diagnostic.

mod separability;

use thiserror::Error;

pub use separability::{separability, CloudPoint, Line, PointCloud, Separability, SeparabilityVerdict};

use crate::linalg::complete_unitary;
use crate::qfa::{CMatrix, CVector, Qfa, QfaError, StateRole, Symbol, C64};

/// Tolerance on the total weight of a mixture.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixError {
    #[error("part {0} has a different alphabet")]
    AlphabetMismatch(usize),
    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("negative weight {0}")]
    NegativeWeight(f64),
    #[error("probability {0} is not in (1/2, 1]")]
    InvalidProbability(f64),
    #[error("1/p1 + 1/p2 = {0} is not below 3; the union construction degenerates")]
    LimitCondition(f64),
    #[error(transparent)]
    Qfa(#[from] QfaError),
}

/// Swaps accepting and rejecting states.
pub fn complement(qfa: &Qfa) -> Qfa {
    let roles = qfa
        .roles()
        .iter()
        .map(|r| match r {
            StateRole::Accept => StateRole::Reject,
            StateRole::Reject => StateRole::Accept,
            StateRole::NonHalting => StateRole::NonHalting,
        })
        .collect();
    qfa.with_roles(roles)
}

/// Runs part i with probability `weight_i`, or halts immediately with the
/// bias probabilities.
#[derive(Debug, Clone)]
pub struct MixtureSpec {
    pub alphabet: Vec<char>,
    pub parts: Vec<(Qfa, f64)>,
    pub accept_bias: f64,
    pub reject_bias: f64,
}

fn same_letters(a: &[char], b: &[char]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Builds the mixture as one machine.
///
/// Basis: a hub start state, then each part's basis in order, then one
/// frozen accepting state if `accept_bias > 0` and one frozen rejecting
/// state if `reject_bias > 0`. The left endmarker first rotates the hub into
/// the weighted superposition of the parts' starts and bias states, then
/// applies each part's own left-endmarker matrix. Every other symbol acts
/// block-diagonally.
pub fn mix(spec: &MixtureSpec) -> Result<Qfa, MixError> {
    let mut total = spec.accept_bias + spec.reject_bias;
    for w in spec.parts.iter().map(|p| p.1).chain([spec.accept_bias, spec.reject_bias]) {
        if w < 0.0 {
            return Err(MixError::NegativeWeight(w));
        }
    }
    for (i, (q, w)) in spec.parts.iter().enumerate() {
        if !same_letters(q.alphabet(), &spec.alphabet) {
            return Err(MixError::AlphabetMismatch(i));
        }
        total += w;
    }
    if (total - 1.0).abs() > WEIGHT_TOLERANCE {
        return Err(MixError::WeightSum(total));
    }

    let mut offsets = Vec::with_capacity(spec.parts.len());
    let mut dim = 1;
    for (q, _) in &spec.parts {
        offsets.push(dim);
        dim += q.dimension();
    }
    let acc_bias = (spec.accept_bias > 0.0).then(|| {
        dim += 1;
        dim - 1
    });
    let rej_bias = (spec.reject_bias > 0.0).then(|| {
        dim += 1;
        dim - 1
    });

    let block = |sym: Symbol| -> Result<CMatrix, MixError> {
        let mut m = CMatrix::identity(dim, dim);
        for ((q, _), &off) in spec.parts.iter().zip(&offsets) {
            let d = q.dimension();
            m.view_mut((off, off), (d, d)).copy_from(q.unitary(sym)?);
        }
        Ok(m)
    };

    let mut spread = CVector::zeros(dim);
    for ((q, w), &off) in spec.parts.iter().zip(&offsets) {
        spread[off + q.start()] = C64::new(w.sqrt(), 0.0);
    }
    if let Some(i) = acc_bias {
        spread[i] = C64::new(spec.accept_bias.sqrt(), 0.0);
    }
    if let Some(i) = rej_bias {
        spread[i] = C64::new(spec.reject_bias.sqrt(), 0.0);
    }
    // exact renormalization keeps the matrix unitary to machine precision
    let norm = spread.norm();
    let spread = spread / C64::new(norm, 0.0);
    let rotate = complete_unitary(dim, &[(0, spread)]);

    let mut unitaries = vec![(Symbol::LeftEnd, block(Symbol::LeftEnd)? * rotate)];
    for &c in &spec.alphabet {
        unitaries.push((Symbol::Letter(c), block(Symbol::Letter(c))?));
    }
    unitaries.push((Symbol::RightEnd, block(Symbol::RightEnd)?));

    let mut acc = Vec::new();
    let mut rej = Vec::new();
    for ((q, _), &off) in spec.parts.iter().zip(&offsets) {
        acc.extend(q.accepting().into_iter().map(|i| i + off));
        rej.extend(q.rejecting().into_iter().map(|i| i + off));
    }
    acc.extend(acc_bias);
    rej.extend(rej_bias);
    Ok(Qfa::new(dim, spec.alphabet.clone(), 0, &acc, &rej, unitaries)?)
}

fn check_probability(p: f64) -> Result<(), MixError> {
    if p > 0.5 && p <= 1.0 {
        Ok(())
    } else {
        Err(MixError::InvalidProbability(p))
    }
}

/// Given machines recognizing L1 with probability p1 and L2 with p2,
/// builds one recognizing L1 ∪ L2 with probability 2p1p2/(p1+p2+p1p2).
/// Requires 1/p1 + 1/p2 < 3.
pub fn union(q1: &Qfa, p1: f64, q2: &Qfa, p2: f64) -> Result<(Qfa, f64), MixError> {
    check_probability(p1)?;
    check_probability(p2)?;
    let inv = 1.0 / p1 + 1.0 / p2;
    if inv >= 3.0 - WEIGHT_TOLERANCE {
        return Err(MixError::LimitCondition(inv));
    }
    if !same_letters(q1.alphabet(), q2.alphabet()) {
        return Err(MixError::AlphabetMismatch(1));
    }
    let s = p1 + p2 + p1 * p2;
    let spec = MixtureSpec {
        alphabet: q1.alphabet().to_vec(),
        parts: vec![(q1.clone(), p2 / s), (q2.clone(), p1 / s)],
        accept_bias: p1 * p2 / s,
        reject_bias: 0.0,
    };
    Ok((mix(&spec)?, 2.0 * p1 * p2 / s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::qfa_fixture;

    #[test]
    fn complement_is_involution() {
        let k2 = qfa_fixture("K2").unwrap();
        assert_eq!(complement(&complement(&k2)), k2);
    }

    #[test]
    fn accept_everything_bias() {
        let q = mix(&MixtureSpec { alphabet: vec!['a'], parts: vec![], accept_bias: 1.0, reject_bias: 0.0 }).unwrap();
        for w in ["", "a", "aaa"] {
            assert!((q.run(w, false).unwrap().p_accept - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_sum_is_checked() {
        let k2 = qfa_fixture("K2").unwrap();
        let err = mix(&MixtureSpec { alphabet: vec!['a', 'b'], parts: vec![(k2, 0.5)], accept_bias: 0.0, reject_bias: 0.0 })
            .unwrap_err();
        assert!(matches!(err, MixError::WeightSum(_)));
    }

    #[test]
    fn union_limits() {
        let k2 = qfa_fixture("K2").unwrap();
        assert!(matches!(union(&k2, 2.0 / 3.0, &k2, 2.0 / 3.0), Err(MixError::LimitCondition(_))));
        assert!(matches!(union(&k2, 0.5, &k2, 1.0), Err(MixError::InvalidProbability(_))));
        let (_, p) = union(&k2, 1.0, &k2, 1.0).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
    }
}
