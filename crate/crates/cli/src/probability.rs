//! Reading recognition probabilities from the command line.
//!
//! `a/b` is taken exactly. A decimal with k fractional digits stands for
//! every value that rounds to it; if that interval contains a fraction whose
//! denominator is at most √(10^k), the one with the smallest denominator is
//! used (so `0.6667` means 2/3), otherwise the decimal itself. Fractions that
//! small are spaced more than 10^-k apart, so the match is never accidental.

use num_rational::Rational64;

/// Fraction with the smallest denominator in [lo, hi], for 0 ≤ lo ≤ hi.
fn simplest_between(ln: i128, ld: i128, hn: i128, hd: i128) -> (i128, i128) {
    let fl = ln / ld;
    if fl * ld == ln {
        return (fl, 1);
    }
    if (fl + 1) * hd <= hn {
        return (fl + 1, 1);
    }
    // lo and hi share the integer part; recurse on reciprocals of the rest
    let (n, d) = simplest_between(hd, hn - fl * hd, ld, ln - fl * ld);
    (fl * n + d, n)
}

pub fn parse_probability(text: &str) -> Result<Rational64, String> {
    let bad = || format!("`{text}` is not a probability (use a decimal such as 0.75 or a fraction such as 3/4)");
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d <= 0 || n < 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits_ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if int.is_empty() && frac.is_empty() || !digits_ok(int) || !digits_ok(frac) || frac.len() > 15 {
        return Err(bad());
    }
    let k = frac.len() as u32;
    let scale = 10i128.pow(k);
    let m: i128 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let exact = reduce(m, scale);
    if k == 0 {
        return to_rational(exact).ok_or_else(bad);
    }
    let (lo_n, hi_n, den) = ((2 * m - 1).max(0), 2 * m + 1, 2 * scale);
    let (n, d) = simplest_between(lo_n, den, hi_n, den);
    let limit = (scale as f64).sqrt().floor() as i128;
    let chosen = if d <= limit { (n, d) } else { exact };
    to_rational(chosen).ok_or_else(bad)
}

fn reduce(n: i128, d: i128) -> (i128, i128) {
    let (mut a, mut b) = (n, d);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    (n / a, d / a)
}

fn to_rational((n, d): (i128, i128)) -> Option<Rational64> {
    Some(Rational64::new(i64::try_from(n).ok()?, i64::try_from(d).ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn decimals_snap_only_to_small_denominators() {
        assert_eq!(parse_probability("0.6667").unwrap(), r(2, 3));
        assert_eq!(parse_probability("0.667").unwrap(), r(2, 3));
        assert_eq!(parse_probability("0.75").unwrap(), r(3, 4));
        assert_eq!(parse_probability("0.9").unwrap(), r(9, 10));
        assert_eq!(parse_probability("0.123").unwrap(), r(123, 1000));
        assert_eq!(parse_probability("0.6").unwrap(), r(3, 5));
        assert_eq!(parse_probability("1").unwrap(), r(1, 1));
        assert_eq!(parse_probability(".5").unwrap(), r(1, 2));
    }

    #[test]
    fn fractions_are_exact() {
        assert_eq!(parse_probability("6/11").unwrap(), r(6, 11));
        assert!(parse_probability("1/0").is_err());
        assert!(parse_probability("abc").is_err());
        assert!(parse_probability("-0.5").is_err());
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(55, 100, 65, 100), (3, 5));
        // brute force over denominators: 7/57 ≈ 0.12281 is the first hit
        assert_eq!(simplest_between(1225, 10000, 1235, 10000), (7, 57));
    }
}
