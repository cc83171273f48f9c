use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }
}

/// What a command produced, before formatting.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub payload: Value,
    pub table: String,
}

impl Outcome {
    pub fn new(status: Status, payload: Value, table: String) -> Self {
        Outcome { status, payload, table }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub arguments: Vec<String>,
    pub status: Status,
    pub payload: Value,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub timing_seconds: f64,
}

impl CommandReport {
    pub fn new(command: &str, arguments: Vec<String>, outcome: &Outcome, took: Duration) -> Self {
        CommandReport {
            command: command.to_string(),
            arguments,
            status: outcome.status,
            payload: outcome.payload.clone(),
            timing_seconds: num(took.as_secs_f64()),
        }
    }
}

/// `x` with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding can carry into a new leading digit, e.g. 9.99… -> 10.0…
        if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > 12 && decimals > 0 {
            let d = decimals - 1;
            return format!("{x:.d$}");
        }
        s
    } else {
        format!("{x:.11e}")
    }
}

/// `x` rounded to 12 significant digits, for structured output.
pub fn num(x: f64) -> f64 {
    if x.is_finite() {
        fmt_num(x).parse().unwrap_or(x)
    } else {
        x
    }
}

/// JSON number rounded to 12 digits; non-finite values become strings.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        serde_json::json!(num(x))
    } else {
        Value::String(fmt_num(x))
    }
}

/// Left-aligned plain-text table.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(headers.to_vec(), &mut out);
    line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_num(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_num(0.6), "0.600000000000");
        assert_eq!(fmt_num(1.0), "1.00000000000");
        assert_eq!(fmt_num(9.9999999999999), "10.0000000000");
        assert_eq!(fmt_num(1e-9), "1.00000000000e-9");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(num(6.0 / 11.0), 0.545454545455);
    }

    #[test]
    fn table_layout() {
        let t = table(&["a", "long"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    long\n---  ----\nxyz  1\n");
    }
}
