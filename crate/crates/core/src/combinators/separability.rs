//! Can the words of a language be split from the rest by a line in the
//! plane of (accept probability under machine 1, under machine 2)?
//!
//! Coordinates are snapped to nearby small-denominator rationals and all
//! geometry after that is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::automata::words_up_to;
use crate::qfa::{Qfa, QfaError};

const SNAP_TOL: f64 = 1e-9;
const SNAP_MAX_DENOM: i64 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct CloudPoint {
    pub word: String,
    pub p1: f64,
    pub p2: f64,
    pub in_language: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<CloudPoint>,
}

/// The line a·x + b·y = c; words of the language satisfy a·x + b·y ≥ c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl Line {
    pub fn to_f64(&self) -> (f64, f64, f64) {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        (f(&self.a), f(&self.b), f(&self.c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparabilityVerdict {
    /// One side is empty.
    Trivial,
    /// Strictly separable; the margin is positive.
    Separable,
    /// The two sides touch: only a non-strict separating line exists.
    LimitCase,
    /// The convex hulls overlap.
    Overlap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Separability {
    pub cloud: PointCloud,
    pub verdict: SeparabilityVerdict,
    pub line: Option<Line>,
    /// Half the distance between the hulls: +∞ when trivial, 0 for the
    /// limit case and for overlap.
    pub margin: f64,
    /// Exact squared hull distance, when strictly separable.
    pub distance_squared: Option<BigRational>,
}

type Pt = (BigRational, BigRational);

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest fraction with denominator ≤ 1000 within 1e-9, else the nearest
/// multiple of 1e-9.
pub fn snap(x: f64) -> BigRational {
    for d in 1..=SNAP_MAX_DENOM {
        let k = (x * d as f64).round();
        if (x - k / d as f64).abs() <= SNAP_TOL {
            return ratio(k as i64, d);
        }
    }
    ratio((x * 1e9).round() as i64, 1_000_000_000)
}

fn sub(p: &Pt, q: &Pt) -> Pt {
    (&p.0 - &q.0, &p.1 - &q.1)
}

fn dot(p: &Pt, q: &Pt) -> BigRational {
    &p.0 * &q.0 + &p.1 * &q.1
}

fn cross(o: &Pt, a: &Pt, b: &Pt) -> BigRational {
    let (u, v) = (sub(a, o), sub(b, o));
    &u.0 * &v.1 - &u.1 * &v.0
}

/// Convex hull vertices in counter-clockwise order, collinear points
/// dropped.
fn hull(points: &[Pt]) -> Vec<Pt> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Pt> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Pt> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn edges(h: &[Pt]) -> Vec<(Pt, Pt)> {
    match h.len() {
        0 => vec![],
        1 => vec![(h[0].clone(), h[0].clone())],
        2 => vec![(h[0].clone(), h[1].clone())],
        n => (0..n).map(|i| (h[i].clone(), h[(i + 1) % n].clone())).collect(),
    }
}

/// Closest point to `p` on segment [a, b].
fn closest_on_segment(p: &Pt, a: &Pt, b: &Pt) -> Pt {
    let ab = sub(b, a);
    let len2 = dot(&ab, &ab);
    if len2.is_zero() {
        return a.clone();
    }
    let mut t = dot(&sub(p, a), &ab) / len2;
    if t.is_negative() {
        t = int(0);
    } else if t > int(1) {
        t = int(1);
    }
    (&a.0 + &t * &ab.0, &a.1 + &t * &ab.1)
}

fn candidate_axes(hin: &[Pt], hout: &[Pt]) -> Vec<Pt> {
    let mut axes: Vec<Pt> = Vec::new();
    let mut push = |d: Pt| {
        if !(d.0.is_zero() && d.1.is_zero()) {
            let perp = (-d.1.clone(), d.0.clone());
            for v in [perp.clone(), (-perp.0, -perp.1), d.clone(), (-d.0, -d.1)] {
                if !axes.contains(&v) {
                    axes.push(v);
                }
            }
        }
    };
    for h in [hin, hout] {
        for (a, b) in edges(h) {
            push(sub(&b, &a));
        }
    }
    for u in hin {
        for v in hout {
            push(sub(u, v));
        }
    }
    axes
}

fn gap(axis: &Pt, hin: &[Pt], hout: &[Pt]) -> (BigRational, BigRational) {
    let lo_in = hin.iter().map(|p| dot(axis, p)).min().expect("nonempty");
    let hi_out = hout.iter().map(|p| dot(axis, p)).max().expect("nonempty");
    (&lo_in - hi_out, lo_in)
}

fn normalized(a: BigRational, b: BigRational, c: BigRational) -> Line {
    let m = [&a, &b, &c].iter().map(|r| r.abs()).max().expect("three values");
    if m.is_zero() {
        return Line { a, b, c };
    }
    Line { a: a / &m, b: b / &m, c: c / &m }
}

/// Separates exact point sets; `inside` must end up on the ≥ side.
pub(crate) fn separate_points(
    inside: &[Pt],
    outside: &[Pt],
) -> (SeparabilityVerdict, Option<Line>, f64, Option<BigRational>) {
    if inside.is_empty() || outside.is_empty() {
        return (SeparabilityVerdict::Trivial, None, f64::INFINITY, None);
    }
    let (hin, hout) = (hull(inside), hull(outside));
    let axes = candidate_axes(&hin, &hout);
    let mut best: Option<(BigRational, &Pt, BigRational)> = None;
    for axis in &axes {
        let (g, lo) = gap(axis, &hin, &hout);
        if best.as_ref().is_none_or(|(bg, _, _)| g > *bg) {
            best = Some((g, axis, lo));
        }
    }
    // identical single points give no axis at all
    let Some((g, axis, lo)) = best else {
        return (SeparabilityVerdict::Overlap, None, 0.0, None);
    };
    if g.is_negative() {
        return (SeparabilityVerdict::Overlap, None, 0.0, None);
    }
    if g.is_zero() {
        let line = normalized(axis.0.clone(), axis.1.clone(), lo);
        return (SeparabilityVerdict::LimitCase, Some(line), 0.0, None);
    }
    // strictly separable: closest pair of boundary points
    let mut closest: Option<(BigRational, Pt, Pt)> = None;
    let mut consider = |pin: Pt, pout: Pt| {
        let d = sub(&pin, &pout);
        let d2 = dot(&d, &d);
        if closest.as_ref().is_none_or(|(c, _, _)| d2 < *c) {
            closest = Some((d2, pin, pout));
        }
    };
    for p in &hin {
        for (a, b) in edges(&hout) {
            consider(p.clone(), closest_on_segment(p, &a, &b));
        }
    }
    for p in &hout {
        for (a, b) in edges(&hin) {
            consider(closest_on_segment(p, &a, &b), p.clone());
        }
    }
    let (d2, pin, pout) = closest.expect("nonempty hulls");
    let n = sub(&pin, &pout);
    let mid = ((&pin.0 + &pout.0) / int(2), (&pin.1 + &pout.1) / int(2));
    let c = dot(&n, &mid);
    let margin = d2.to_f64().unwrap_or(f64::NAN).sqrt() / 2.0;
    (SeparabilityVerdict::Separable, Some(normalized(n.0, n.1, c)), margin, Some(d2))
}

/// Evaluates both machines on every word up to `max_len` and looks for a
/// line splitting members of `oracle` from non-members.
pub fn separability(
    q1: &Qfa,
    q2: &Qfa,
    oracle: &dyn Fn(&str) -> bool,
    max_len: usize,
) -> Result<Separability, QfaError> {
    let mut a1 = q1.alphabet().to_vec();
    let mut a2 = q2.alphabet().to_vec();
    a1.sort_unstable();
    a2.sort_unstable();
    if a1 != a2 {
        return Err(QfaError::AlphabetMismatch);
    }
    let mut cloud = PointCloud::default();
    for word in words_up_to(q1.alphabet(), max_len) {
        let p1 = q1.run(&word, false)?.p_accept;
        let p2 = q2.run(&word, false)?.p_accept;
        let in_language = oracle(&word);
        cloud.points.push(CloudPoint { word, p1, p2, in_language });
    }
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for p in &cloud.points {
        let pt = (snap(p.p1), snap(p.p2));
        if p.in_language {
            inside.push(pt);
        } else {
            outside.push(pt);
        }
    }
    let (verdict, line, margin, distance_squared) = separate_points(&inside, &outside);
    Ok(Separability { cloud, verdict, line, margin, distance_squared })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64, d: i64) -> Pt {
        (ratio(x, d), ratio(y, d))
    }

    #[test]
    fn snapping() {
        assert_eq!(snap(2.0 / 3.0), ratio(2, 3));
        assert_eq!(snap(0.0), int(0));
        assert_eq!(snap(0.1234567891234), ratio(123_456_789, 1_000_000_000));
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let h = hull(&[p(0, 0, 1), p(2, 0, 1), p(1, 0, 1), p(0, 2, 1), p(1, 1, 2)]);
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn strict_gap_along_x() {
        let (v, line, margin, d2) = separate_points(&[p(2, 0, 3), p(2, 1, 3)], &[p(0, 0, 1), p(1, 1, 3)]);
        assert_eq!(v, SeparabilityVerdict::Separable);
        assert_eq!(d2, Some(ratio(1, 9)));
        assert!((margin - 1.0 / 6.0).abs() < 1e-15);
        let l = line.unwrap();
        assert!(l.b.is_zero() && l.a.is_positive());
    }

    #[test]
    fn touching_and_overlapping() {
        let inside = [p(2, 0, 3), p(0, 2, 3)];
        let (v, line, _, _) = separate_points(&inside, &[p(1, 1, 3), p(0, 0, 1)]);
        assert_eq!(v, SeparabilityVerdict::LimitCase);
        assert_eq!(line.unwrap(), Line { a: int(1), b: int(1), c: ratio(2, 3) });
        let (v, line, _, _) = separate_points(&inside, &[p(1, 1, 2)]);
        assert_eq!(v, SeparabilityVerdict::Separable);
        assert!(line.is_some());
        let (v, _, _, _) = separate_points(&inside, &[p(1, 1, 4), p(1, 1, 2)]);
        assert_eq!(v, SeparabilityVerdict::Overlap);
        assert_eq!(separate_points(&[], &inside).0, SeparabilityVerdict::Trivial);
    }
}
