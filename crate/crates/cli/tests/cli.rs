use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qfalab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfalab"))
        .current_dir(dir)
        .env_remove("QFALAB_MONOID_CAP")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn emit(dir: &Path, name: &str) -> PathBuf {
    let file = format!("{}.json", name.to_lowercase());
    let o = qfalab(dir, &["fixtures", "emit", name, "-o", &file]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir.join(file)
}

fn structured(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let o = qfalab(dir, &full);
    (code(&o), serde_json::from_str(&stdout(&o)).expect("structured output is JSON"))
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    for name in ["G1", "G2", "G3", "AB_STAR", "K2", "K3", "K2_RAW_KAPPA"] {
        emit(dir.path(), name);
    }
    dir
}

#[test]
fn classify_examples() {
    let dir = setup();
    let d = dir.path();
    let o = qfalab(d, &["classify", "g1.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("NotRecognizable (T3 pattern)"));
    assert!(stdout(&o).contains("11         q3·z2 accepting            pass"));

    let o = qfalab(d, &["classify", "g2.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("RecognizableConstructible (p = 3/5)"));

    let (c, v) = structured(d, &["classify", "ab_star.json"]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["classification"], "OutsideClassU");
    assert_eq!(v["payload"]["witness"]["witness"]["kind"], "TwoCycles");
    assert_eq!(v["payload"]["witness"]["verification"]["passed"], true);
}

#[test]
fn monoid_cap_from_env_makes_inconclusive() {
    let dir = setup();
    let o = Command::new(env!("CARGO_BIN_EXE_qfalab"))
        .current_dir(dir.path())
        .env("QFALAB_MONOID_CAP", "3")
        .args(["classify", "g2.json"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = qfalab(dir.path(), &["--monoid-cap", "3", "synthesize", "g2.json"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn simulate_examples() {
    let dir = setup();
    let d = dir.path();
    let (c, v) = structured(d, &["simulate", "k2.json", "ba"]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["p_accept"].as_f64().unwrap(), 0.666666666667);

    let o = qfalab(d, &["simulate", "k2.json", "--all-up-to", "10", "--oracle", "L2", "--p", "0.6666"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("result: pass"));

    // K2 does not recognize L1
    let o = qfalab(d, &["simulate", "k2.json", "--all-up-to", "4", "--oracle", "L1", "--p", "0.6666"]);
    assert_eq!(code(&o), 1);

    let o = qfalab(d, &["simulate", "k2.json", "bq"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("`q`"));

    let o = qfalab(d, &["simulate", "k2.json", "--all-up-to", "3", "--oracle", "L2", "--p", "0.5"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn trace_lists_every_symbol() {
    let dir = setup();
    let (_, v) = structured(dir.path(), &["simulate", "k2.json", "ab", "--trace"]);
    let symbols: Vec<&str> = v["payload"]["trace"].as_array().unwrap().iter().map(|t| t["symbol"].as_str().unwrap()).collect();
    assert_eq!(symbols, ["^", "a", "b", "$"]);
}

#[test]
fn synthesize_then_simulate() {
    let dir = setup();
    let d = dir.path();
    for (dfa, lang) in [("g2.json", "L2"), ("g3.json", "L3")] {
        let o = qfalab(d, &["synthesize", dfa, "-o", "out.json", "--plan", "plan.json"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let plan: Value = serde_json::from_str(&std::fs::read_to_string(d.join("plan.json")).unwrap()).unwrap();
        assert_eq!(plan["p"], "3/5");
        let o = qfalab(d, &["simulate", "out.json", "--all-up-to", "8", "--oracle", lang, "--p", "0.6"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let o = qfalab(d, &["synthesize", "g1.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn union_and_complement() {
    let dir = setup();
    let d = dir.path();
    let o = qfalab(d, &["union", "k2.json", "0.6667", "k3.json", "0.6667", "-o", "u.json"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("LimitCondition"));
    assert!(!d.join("u.json").exists());

    let (c, v) = structured(d, &["union", "k2.json", "1", "k3.json", "1", "-o", "u.json"]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["p"], "2/3");
    let o = qfalab(d, &["simulate", "u.json", "--all-up-to", "6", "--oracle", "L1", "--p", "2/3"]);
    // K2 and K3 only reach 2/3, so the combination claims too much
    assert_eq!(code(&o), 1);

    let o = qfalab(d, &["complement", "k2.json", "-o", "c.json"]);
    assert_eq!(code(&o), 0);
    let (_, a) = structured(d, &["simulate", "k2.json", "ab"]);
    let (_, b) = structured(d, &["simulate", "c.json", "ab"]);
    assert_eq!(a["payload"]["p_accept"], b["payload"]["p_reject"]);
}

#[test]
fn decompose_example() {
    let dir = setup();
    let (c, v) = structured(dir.path(), &["decompose", "k2.json", "--word", "b"]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["dim_e1"], 2);
    assert_eq!(v["payload"]["dim_e2"], 2);
    let (_, v) = structured(dir.path(), &["decompose", "k2.json", "--word", "a", "--with", "b"]);
    assert_eq!(v["payload"]["dim_e1"], 2);
}

#[test]
fn separability_reports_limit_case() {
    let dir = setup();
    let (c, v) = structured(dir.path(), &["separability", "k2.json", "k3.json", "--oracle", "L1", "--max-len", "4"]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["verdict"], "LimitCase");
    assert_eq!(v["payload"]["line"]["c"], "2/3");
    assert_eq!(v["payload"]["cloud"].as_array().unwrap().len(), 31);
}

#[test]
fn validate_audits_the_raw_matrix() {
    let dir = setup();
    let o = qfalab(dir.path(), &["validate", "k2_raw_kappa.json", "--tol", "1e-12"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("0.333333333333     FAIL"));
    let o = qfalab(dir.path(), &["validate", "k2.json", "--tol", "1e-12"]);
    assert_eq!(code(&o), 0);
    // loading for simulation validates too
    assert_eq!(code(&qfalab(dir.path(), &["simulate", "k2_raw_kappa.json", "a"])), 2);
}

#[test]
fn witness_files() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for name in ["G1_T3", "FIG12_SIX_WORD"] {
        emit(d, name);
        let o = qfalab(d, &["verify-witness", &format!("{}.json", name.to_lowercase())]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    // corrupt the G1 pattern: one word cannot separate both ways
    let text = std::fs::read_to_string(d.join("g1_t3.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["witness"]["words"]["z1"] = "b".into();
    v["witness"]["words"]["z2"] = "b".into();
    std::fs::write(d.join("bad.json"), v.to_string()).unwrap();
    let (c, r) = structured(d, &["verify-witness", "bad.json"]);
    assert_eq!(c, 1);
    let failed: Vec<&str> = r["payload"]["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"8") || failed.contains(&"10"), "{failed:?}");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"alphabet\": [\"a\"],\n \"states\": [ }").unwrap();
    let o = qfalab(dir.path(), &["classify", "bad.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));

    std::fs::write(
        dir.path().join("partial.json"),
        r#"{"alphabet":["a","b"],"states":["p"],"start":"p","accept":["p"],"delta":{"p":{"a":"p"}}}"#,
    )
    .unwrap();
    assert_eq!(code(&qfalab(dir.path(), &["classify", "partial.json"])), 2);
    let o = qfalab(dir.path(), &["classify", "partial.json", "--complete-with-sink"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("completed missing transition (p, b)"));

    assert_eq!(code(&qfalab(dir.path(), &["classify", "missing.json"])), 2);
    assert_eq!(code(&qfalab(dir.path(), &["fixtures", "emit", "NOPE"])), 2);
}

#[test]
fn written_files_round_trip_and_output_is_deterministic() {
    let dir = setup();
    let d = dir.path();
    // emitting what was read back gives the same bytes
    for name in ["G2", "K2"] {
        let o = qfalab(d, &["fixtures", "emit", name]);
        let first = stdout(&o);
        let file = format!("{}.json", name.to_lowercase());
        assert_eq!(first, std::fs::read_to_string(d.join(file)).unwrap());
    }
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_seconds");
        v.to_string()
    };
    let a = structured(d, &["classify", "g1.json"]).1;
    let b = structured(d, &["classify", "g1.json"]).1;
    assert_eq!(strip(a), strip(b));
}
