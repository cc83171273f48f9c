use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::Rational64;
use serde_json::{json, Value};
use thiserror::Error;

use qfalab::automata::Dfa;
use qfalab::combinators::{self, separability, MixError, SeparabilityVerdict};
use qfalab::fixtures::{self, LanguageOracle};
use qfalab::fragments::{classify_with_cap, verify_witness, Classification, FragmentWitness, VerificationReport};
use qfalab::io::{self, IoError, PlanReport};
use qfalab::qfa::{CMatrix, CVector, Qfa, Superposition, Symbol, C64};
use qfalab::spectral::{decompose_pair, decompose_word, norm_decay, Decomposition};
use qfalab::synthesis::synthesize;

use crate::probability::parse_probability;
use crate::report::{fmt_num, jnum, table, Outcome, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: IoError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

fn domain(e: impl ToString) -> CliError {
    CliError::Domain(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, format!("{text}\n")).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path) -> impl FnOnce(IoError) -> CliError + '_ {
    move |source| CliError::Parse { path: path.display().to_string(), source }
}

pub fn load_dfa(path: &Path, complete_with_sink: bool) -> Result<io::ParseReport, CliError> {
    io::parse_dfa(&read(path)?, complete_with_sink).map_err(parse_err(path))
}

pub fn load_qfa(path: &Path, tol: f64) -> Result<Qfa, CliError> {
    io::parse_qfa(&read(path)?, tol).map_err(parse_err(path))
}

fn probability(text: &str) -> Result<Rational64, CliError> {
    parse_probability(text).map_err(CliError::Usage)
}

fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Membership test named by a fixture oracle or given by a DFA file.
pub enum Language {
    Oracle(LanguageOracle),
    Dfa(Dfa),
}

impl Language {
    pub fn from_args(oracle: Option<&str>, oracle_dfa: Option<&Path>) -> Result<Language, CliError> {
        match (oracle, oracle_dfa) {
            (Some(name), None) => fixtures::oracle(name).map(Language::Oracle).map_err(|e| CliError::Usage(e.to_string())),
            (None, Some(path)) => Ok(Language::Dfa(load_dfa(path, false)?.dfa)),
            _ => Err(CliError::Usage("give exactly one of --oracle and --oracle-dfa".into())),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        match self {
            Language::Oracle(o) => o.contains(word),
            Language::Dfa(d) => d.accepts(word).unwrap_or(false),
        }
    }
}

fn verification_json(r: &VerificationReport) -> Value {
    json!({
        "passed": r.passed(),
        "conditions": r.conditions.iter().map(|c| json!({
            "id": c.id, "description": c.description, "passed": c.passed, "detail": c.detail,
        })).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

fn verification_table(r: &VerificationReport) -> String {
    let rows: Vec<Vec<String>> = r
        .conditions
        .iter()
        .map(|c| {
            vec![
                c.id.clone(),
                c.description.clone(),
                if c.passed { "pass".into() } else { "FAIL".into() },
                c.detail.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut out = table(&["condition", "requirement", "result", "detail"], &rows);
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn witness_table(w: &FragmentWitness) -> String {
    let mut rows: Vec<Vec<String>> = w.states.iter().map(|(k, v)| vec![k.clone(), format!("state {v}")]).collect();
    rows.extend(w.words.iter().map(|(k, v)| {
        let shown = if v.is_empty() { "ε".to_string() } else { v.clone() };
        vec![k.clone(), format!("word {shown}")]
    }));
    table(&["binding", "value"], &rows)
}

pub fn classify(path: &Path, complete_with_sink: bool, cap: usize) -> Result<Outcome, CliError> {
    let parsed = load_dfa(path, complete_with_sink)?;
    let verdict = classify_with_cap(&parsed.dfa, cap);
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", verdict.classification.describe());
    let _ = writeln!(
        out,
        "states: {} given, {} in the minimal automaton",
        parsed.dfa.num_states(),
        verdict.minimal.num_states()
    );
    let _ = writeln!(
        out,
        "transition monoid: {} elements ({})",
        verdict.monoid_size,
        if verdict.monoid_complete { "complete" } else { "stopped at the cap" }
    );
    for (s, c) in &parsed.completed {
        let _ = writeln!(out, "completed missing transition ({s}, {c}) to the sink");
    }
    let mut payload = json!({
        "classification": verdict.classification.kind_name(),
        "summary": verdict.classification.describe(),
        "states": parsed.dfa.num_states(),
        "minimal_states": verdict.minimal.num_states(),
        "monoid": { "size": verdict.monoid_size, "complete": verdict.monoid_complete },
        "completed_transitions": parsed.completed.iter().map(|(s, c)| json!([s, c.to_string()])).collect::<Vec<_>>(),
        "minimal_dfa": serde_json::to_value(io::DfaFile::from(&verdict.minimal)).expect("serializable"),
    });
    let show_witness = |label: &str, w: &FragmentWitness, out: &mut String| -> Result<Value, CliError> {
        let report = verify_witness(&verdict.minimal, w).map_err(domain)?;
        let _ = writeln!(out, "\n{label} ({} pattern, states named as in the minimal automaton):", w.kind);
        out.push_str(&witness_table(w));
        let _ = writeln!(out);
        out.push_str(&verification_table(&report));
        Ok(json!({
            "witness": serde_json::to_value(w).expect("serializable"),
            "verification": verification_json(&report),
        }))
    };
    let status = match &verdict.classification {
        Classification::NotRecognizable(w) => {
            payload["witness"] = show_witness("witness", w, &mut out)?;
            Status::Pass
        }
        Classification::OutsideClassU(w) => {
            payload["witness"] = show_witness("witness", w, &mut out)?;
            if let Some(n) = &verdict.necessary_condition_witness {
                payload["necessary_condition_witness"] = show_witness("also violates a necessary condition", n, &mut out)?;
            }
            Status::Pass
        }
        Classification::RecognizableConstructible(plan) => {
            let report = PlanReport::from(plan);
            out.push('\n');
            out.push_str(&plan_table(&report));
            payload["plan"] = serde_json::to_value(&report).expect("serializable");
            Status::Pass
        }
        Classification::Inconclusive(reason) => {
            payload["reason"] = json!(reason);
            Status::Inconclusive
        }
    };
    Ok(Outcome::new(status, payload, out))
}

fn plan_table(p: &PlanReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "transient part A: {{{}}}", p.a_states.join(", "));
    let rows: Vec<Vec<String>> = p
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            vec![
                format!("B{}", i + 1),
                format!("{{{}}}", c.join(", ")),
                p.entry_states[i].clone(),
                p.a_counts[i].to_string(),
                p.betas[i].clone(),
            ]
        })
        .collect();
    out.push_str(&table(&["component", "states", "entry", "a_i", "beta_i"], &rows));
    let chain: Vec<String> = p.chain.iter().map(|i| format!("L{}", i + 1)).collect();
    let _ = writeln!(out, "chain (smallest language first): {}", chain.join(" ⊆ "));
    let _ = writeln!(out, "n = {}, p = {} = {}", p.n, p.p, fmt_num(frac_f64(&p.p)));
    out
}

fn frac_f64(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN),
        None => s.parse().unwrap_or(f64::NAN),
    }
}

pub struct SimulateArgs<'a> {
    pub qfa: &'a Path,
    pub word: Option<&'a str>,
    pub all_up_to: Option<usize>,
    pub oracle: Option<&'a str>,
    pub oracle_dfa: Option<&'a Path>,
    pub p: Option<&'a str>,
    pub trace: bool,
    pub tol: f64,
}

pub fn simulate(a: SimulateArgs) -> Result<Outcome, CliError> {
    let q = load_qfa(a.qfa, a.tol)?;
    match (a.word, a.all_up_to) {
        (Some(word), None) => {
            let r = q.run(word, a.trace).map_err(domain)?;
            let mut out = String::new();
            let _ = writeln!(out, "word: {}", if word.is_empty() { "ε" } else { word });
            let _ = writeln!(out, "p_accept   = {}", fmt_num(r.p_accept));
            let _ = writeln!(out, "p_reject   = {}", fmt_num(r.p_reject));
            let _ = writeln!(out, "p_residual = {}", fmt_num(r.p_residual));
            if r.residual_flagged(a.tol) {
                let _ = writeln!(out, "warning: residual mass above tolerance");
            }
            let mut payload = json!({
                "word": word,
                "p_accept": jnum(r.p_accept),
                "p_reject": jnum(r.p_reject),
                "p_residual": jnum(r.p_residual),
            });
            if let Some(trace) = &r.trace {
                let rows: Vec<Vec<String>> = trace
                    .iter()
                    .map(|t| vec![t.symbol.to_string(), fmt_num(t.accept), fmt_num(t.reject), fmt_num(t.after.norm_sqr())])
                    .collect();
                out.push('\n');
                out.push_str(&table(&["symbol", "accept", "reject", "non-halting mass"], &rows));
                payload["trace"] = trace
                    .iter()
                    .map(|t| {
                        json!({
                            "symbol": t.symbol.to_string(),
                            "accept": jnum(t.accept),
                            "reject": jnum(t.reject),
                            "non_halting": jnum(t.after.norm_sqr()),
                        })
                    })
                    .collect();
            }
            Ok(Outcome::new(Status::Pass, payload, out))
        }
        (None, Some(n)) => {
            let lang = Language::from_args(a.oracle, a.oracle_dfa)?;
            let p_text = a.p.ok_or_else(|| CliError::Usage("--all-up-to needs --p".into()))?;
            let p = probability(p_text)?;
            let r = q.verify_recognition(&|w| lang.contains(w), ratio_f64(p), n, a.tol).map_err(domain)?;
            let mut out = String::new();
            let _ = writeln!(out, "checked {} words up to length {n} against p = {p}", r.words_checked);
            let margin = |m: &Option<(String, f64)>| match m {
                Some((w, x)) => format!("{} at {}", fmt_num(*x), if w.is_empty() { "ε" } else { w }),
                None => "none".into(),
            };
            let _ = writeln!(out, "worst accept margin (members):     {}", margin(&r.worst_accept_margin));
            let _ = writeln!(out, "worst reject margin (non-members): {}", margin(&r.worst_reject_margin));
            if r.residual_words > 0 {
                let _ = writeln!(out, "{} words left residual mass above tolerance", r.residual_words);
            }
            let rows: Vec<Vec<String>> = r
                .counterexamples
                .iter()
                .take(20)
                .map(|c| vec![c.word.clone(), c.in_language.to_string(), fmt_num(c.p_accept), fmt_num(c.p_reject)])
                .collect();
            if !rows.is_empty() {
                let _ = writeln!(out, "\n{} counterexamples (first 20):", r.counterexamples.len());
                out.push_str(&table(&["word", "member", "accept", "reject"], &rows));
            }
            let _ = writeln!(out, "result: {}", if r.passed() { "pass" } else { "FAIL" });
            let m = |x: &Option<(String, f64)>| x.as_ref().map(|(w, v)| json!({"word": w, "margin": jnum(*v)}));
            let payload = json!({
                "p": p.to_string(),
                "max_len": n,
                "words_checked": r.words_checked,
                "worst_accept_margin": m(&r.worst_accept_margin),
                "worst_reject_margin": m(&r.worst_reject_margin),
                "residual_words": r.residual_words,
                "counterexamples": r.counterexamples.iter().map(|c| json!({
                    "word": c.word, "member": c.in_language,
                    "p_accept": jnum(c.p_accept), "p_reject": jnum(c.p_reject),
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(if r.passed() { Status::Pass } else { Status::Fail }, payload, out))
        }
        _ => Err(CliError::Usage("give either a word or --all-up-to N".into())),
    }
}

pub fn synthesize_cmd(
    path: &Path,
    out_path: Option<&Path>,
    plan_path: Option<&Path>,
    cap: usize,
    tol: f64,
) -> Result<Outcome, CliError> {
    let dfa = load_dfa(path, false)?.dfa;
    let verdict = classify_with_cap(&dfa, cap);
    if let Classification::Inconclusive(reason) = &verdict.classification {
        let out = format!("verdict: {}\nno machine written\n", verdict.classification.describe());
        return Ok(Outcome::new(Status::Inconclusive, json!({ "reason": reason }), out));
    }
    let s = synthesize(&dfa).map_err(domain)?;
    let report = PlanReport::from(&s.plan);
    let audit = s.qfa.validate(tol);
    let mut out = plan_table(&report);
    let _ = writeln!(out, "machine dimension {}, worst unitarity deviation {}", s.qfa.dimension(), fmt_num(audit.worst().1));
    if let Some(p) = out_path {
        write(p, &io::qfa_to_json(&s.qfa))?;
        let _ = writeln!(out, "wrote {}", p.display());
    }
    if let Some(p) = plan_path {
        write(p, &serde_json::to_string_pretty(&report).expect("serializable"))?;
        let _ = writeln!(out, "wrote {}", p.display());
    }
    let payload = json!({
        "plan": serde_json::to_value(&report).expect("serializable"),
        "dimension": s.qfa.dimension(),
        "unitarity_deviation": jnum(audit.worst().1),
    });
    Ok(Outcome::new(Status::Pass, payload, out))
}

pub fn union_cmd(q1: &Path, p1: &str, q2: &Path, p2: &str, out_path: Option<&Path>, tol: f64) -> Result<Outcome, CliError> {
    let (m1, m2) = (load_qfa(q1, tol)?, load_qfa(q2, tol)?);
    let (r1, r2) = (probability(p1)?, probability(p2)?);
    let (f1, f2) = (ratio_f64(r1), ratio_f64(r2));
    let (u, p) = match combinators::union(&m1, f1, &m2, f2) {
        Ok(v) => v,
        Err(e @ MixError::LimitCondition(_)) => {
            return Err(domain(format!("LimitCondition: p1 = {r1}, p2 = {r2}: {e}")));
        }
        Err(e) => return Err(domain(e)),
    };
    let exact = (r1 * r2 * 2) / (r1 + r2 + r1 * r2);
    let mut out = String::new();
    let _ = writeln!(out, "p1 = {r1}, p2 = {r2}");
    let _ = writeln!(out, "combined machine: dimension {}, p = {exact} = {}", u.dimension(), fmt_num(p));
    if let Some(path) = out_path {
        write(path, &io::qfa_to_json(&u))?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    let payload = json!({
        "p1": r1.to_string(), "p2": r2.to_string(),
        "p": exact.to_string(), "p_value": jnum(p), "dimension": u.dimension(),
    });
    Ok(Outcome::new(Status::Pass, payload, out))
}

pub fn complement_cmd(path: &Path, out_path: Option<&Path>, tol: f64) -> Result<Outcome, CliError> {
    let q = combinators::complement(&load_qfa(path, tol)?);
    let text = io::qfa_to_json(&q);
    let out = match out_path {
        Some(p) => {
            write(p, &text)?;
            format!("wrote {}\n", p.display())
        }
        None => format!("{text}\n"),
    };
    Ok(Outcome::new(Status::Pass, json!({ "dimension": q.dimension(), "accepting": q.accepting(), "rejecting": q.rejecting() }), out))
}

pub fn validate_cmd(path: &Path, tol: f64) -> Result<Outcome, CliError> {
    let q = io::parse_qfa_unchecked(&read(path)?).map_err(parse_err(path))?;
    let r = q.validate(tol);
    let rows: Vec<Vec<String>> = r
        .deviations
        .iter()
        .map(|(s, d)| vec![s.to_string(), fmt_num(*d), if *d <= tol { "pass".into() } else { "FAIL".into() }])
        .collect();
    let mut out = table(&["symbol", "max |U†U - I|", "result"], &rows);
    let _ = writeln!(out, "tolerance {}: {}", fmt_num(tol), if r.passed() { "pass" } else { "FAIL" });
    let payload = json!({
        "tolerance": jnum(tol),
        "deviations": r.deviations.iter().map(|(s, d)| json!({"symbol": s.to_string(), "deviation": jnum(*d)})).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(if r.passed() { Status::Pass } else { Status::Fail }, payload, out))
}

fn complex_str(z: C64) -> String {
    if z.im == 0.0 {
        fmt_num(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_num(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", fmt_num(z.re), fmt_num(z.im.abs()))
    }
}

fn basis_json(m: &CMatrix) -> Value {
    m.column_iter()
        .map(|c| c.iter().map(|z| json!([jnum(z.re), jnum(z.im)])).collect::<Vec<_>>())
        .collect()
}

fn basis_table(label: &str, m: &CMatrix) -> String {
    let mut out = format!("{label} basis ({} vectors):\n", m.ncols());
    for (i, c) in m.column_iter().enumerate() {
        let entries: Vec<String> = c.iter().map(|z| complex_str(*z)).collect();
        let _ = writeln!(out, "  v{}: [{}]", i + 1, entries.join(", "));
    }
    out
}

pub fn decompose_cmd(path: &Path, word: &str, with: Option<&str>, steps: usize, tol: f64) -> Result<Outcome, CliError> {
    let q = load_qfa(path, tol)?;
    let d: Decomposition = match with {
        Some(y) => decompose_pair(&q, word, y),
        None => decompose_word(&q, word),
    }
    .map_err(domain)?;
    // probe: the non-halting part of the state right after the left endmarker
    let after_left = q
        .step(&Superposition::basis(q.dimension(), q.start()), Symbol::LeftEnd)
        .map_err(domain)?
        .state
        .0;
    let psi: CVector = d.project_e2(&after_left);
    let decay = norm_decay(&q, word, &psi, steps).map_err(domain)?;
    let mut out = String::new();
    let words = match with {
        Some(y) => format!("words {word:?} and {y:?}"),
        None => format!("word {word:?}"),
    };
    let _ = writeln!(out, "{words}: non-halting states {:?}", d.nonhalting);
    let _ = writeln!(out, "dim E1 = {}, dim E2 = {}", d.dim_e1(), d.dim_e2());
    if let Some(u) = d.unimodular_eigenvalues {
        let _ = writeln!(out, "eigenvalues on the unit circle: {u}");
    }
    out.push_str(&basis_table("E1", &d.e1_basis));
    out.push_str(&basis_table("E2", &d.e2_basis));
    let _ = writeln!(out, "\nnorm decay of the E2 part of the post-endmarker state under {word:?}:");
    let rows: Vec<Vec<String>> = decay.iter().map(|(k, n)| vec![k.to_string(), fmt_num(*n)]).collect();
    out.push_str(&table(&["k", "norm"], &rows));
    let payload = json!({
        "word": word,
        "with": with,
        "nonhalting": d.nonhalting,
        "dim_e1": d.dim_e1(),
        "dim_e2": d.dim_e2(),
        "unimodular_eigenvalues": d.unimodular_eigenvalues,
        "e1_basis": basis_json(&d.e1_basis),
        "e2_basis": basis_json(&d.e2_basis),
        "norm_decay": decay.iter().map(|(k, n)| json!([k, jnum(*n)])).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(Status::Pass, payload, out))
}

pub fn separability_cmd(
    q1: &Path,
    q2: &Path,
    lang: Language,
    max_len: usize,
    tol: f64,
) -> Result<Outcome, CliError> {
    let (m1, m2) = (load_qfa(q1, tol)?, load_qfa(q2, tol)?);
    let s = separability(&m1, &m2, &|w| lang.contains(w), max_len).map_err(domain)?;
    let rows: Vec<Vec<String>> = s
        .cloud
        .points
        .iter()
        .map(|p| {
            let w = if p.word.is_empty() { "ε".to_string() } else { p.word.clone() };
            vec![w, fmt_num(p.p1), fmt_num(p.p2), if p.in_language { "in".into() } else { "out".into() }]
        })
        .collect();
    let mut out = table(&["word", "p1", "p2", "label"], &rows);
    let verdict = match s.verdict {
        SeparabilityVerdict::Trivial => "trivial (one side is empty)",
        SeparabilityVerdict::Separable => "separable",
        SeparabilityVerdict::LimitCase => "limit case (the sides touch)",
        SeparabilityVerdict::Overlap => "overlap (no separating line)",
    };
    let _ = writeln!(out, "\nverdict: {verdict}");
    let line = s.line.as_ref().map(|l| {
        let (a, b, c) = l.to_f64();
        let _ = writeln!(out, "line: {}·p1 + {}·p2 = {}  (members on the ≥ side)", l.a, l.b, l.c);
        json!({ "a": l.a.to_string(), "b": l.b.to_string(), "c": l.c.to_string(), "a_value": jnum(a), "b_value": jnum(b), "c_value": jnum(c) })
    });
    let _ = writeln!(out, "margin: {}", fmt_num(s.margin));
    let payload = json!({
        "verdict": format!("{:?}", s.verdict),
        "line": line,
        "margin": jnum(s.margin),
        "distance_squared": s.distance_squared.as_ref().map(|d| d.to_string()),
        "cloud": s.cloud.points.iter().map(|p| json!({
            "word": p.word, "p1": jnum(p.p1), "p2": jnum(p.p2), "in_language": p.in_language,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(Status::Pass, payload, out))
}

pub fn fixtures_list() -> Outcome {
    let mut out = String::new();
    let groups = [
        ("dfa", fixtures::DFA_NAMES),
        ("qfa", fixtures::QFA_NAMES),
        ("witness", fixtures::WITNESS_NAMES),
        ("oracle", fixtures::ORACLE_NAMES),
    ];
    for (kind, names) in groups {
        let _ = writeln!(out, "{kind:<8} {}", names.join(" "));
    }
    let payload = groups.iter().map(|(k, n)| (k.to_string(), json!(n))).collect::<serde_json::Map<_, _>>();
    Outcome::new(Status::Pass, Value::Object(payload), out)
}

pub fn fixtures_emit(name: &str, out_path: Option<&PathBuf>) -> Result<Outcome, CliError> {
    let (kind, text) = if let Ok(d) = fixtures::dfa_fixture(name) {
        ("dfa", io::dfa_to_json(&d))
    } else if let Ok(q) = fixtures::qfa_fixture(name) {
        ("qfa", io::qfa_to_json(&q))
    } else if let Ok((w, d)) = fixtures::witness_fixture(name) {
        ("witness", io::witness_to_json(&w, Some(&d)))
    } else {
        return Err(CliError::Usage(format!("unknown fixture `{name}`; see `fixtures list`")));
    };
    let out = match out_path {
        Some(p) => {
            write(p, &text)?;
            format!("wrote {kind} fixture {name} to {}\n", p.display())
        }
        None => format!("{text}\n"),
    };
    Ok(Outcome::new(Status::Pass, json!({ "name": name, "kind": kind }), out))
}

pub fn verify_witness_cmd(path: &Path, dfa_path: Option<&Path>) -> Result<Outcome, CliError> {
    let file = io::parse_witness(&read(path)?).map_err(parse_err(path))?;
    let dfa = match (dfa_path, &file.dfa) {
        (Some(p), _) => load_dfa(p, false)?.dfa,
        (None, Some(d)) => d.to_dfa(false).map_err(parse_err(path))?.dfa,
        (None, None) => return Err(CliError::Usage("witness file has no \"dfa\"; pass --dfa".into())),
    };
    let report = verify_witness(&dfa, &file.witness).map_err(domain)?;
    let mut out = format!("{} witness\n", file.witness.kind);
    out.push_str(&witness_table(&file.witness));
    out.push('\n');
    out.push_str(&verification_table(&report));
    let _ = writeln!(out, "result: {}", if report.passed() { "pass" } else { "FAIL" });
    let status = if report.passed() { Status::Pass } else { Status::Fail };
    Ok(Outcome::new(status, verification_json(&report), out))
}
