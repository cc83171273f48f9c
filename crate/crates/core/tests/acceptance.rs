//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qfalab::automata::{
    closed_sccs, minimize_with_map, transition_monoid, words_up_to, DEFAULT_MONOID_CAP,
};
use qfalab::combinators::{union, MixError};
use qfalab::fixtures::{dfa_fixture, fig12_six_word_witness, g1_reference_witness, oracle, qfa_fixture};
use qfalab::fragments::{
    classify, detect_t3, detect_two_cycles, recurrent_under, verify_witness, Classification, FragmentKind,
};
use qfalab::qfa::{Symbol, CVector};
use qfalab::spectral::{decompose_word, find_shrinking_word, norm_decay};
use qfalab::synthesis::synthesize;

use common::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_k2_k3_probabilities() -> Check {
    let mut words = 0;
    for (machine, lang) in [("K2", "L2"), ("K3", "L3")] {
        let q = qfa_fixture(machine).map_err(|e| e.to_string())?;
        let o = oracle(lang).map_err(|e| e.to_string())?;
        for w in words_up_to(&['a', 'b'], 10) {
            let r = q.run(&w, false).map_err(|e| e.to_string())?;
            if o.contains(&w) {
                ensure((r.p_accept - 2.0 / 3.0).abs() <= 1e-9, format!("{machine} accepts {w:?} with {}", r.p_accept))?;
            } else {
                ensure(r.p_reject >= 2.0 / 3.0 - 1e-9, format!("{machine} rejects {w:?} with {}", r.p_reject))?;
            }
            words += 1;
        }
        let report = q.verify_recognition(&|w| o.contains(w), 2.0 / 3.0 - 1e-9, 10, 1e-9).map_err(|e| e.to_string())?;
        ensure(report.passed(), format!("{machine}: verify_recognition reported counterexamples"))?;
    }
    Ok(format!("{words} word/machine pairs"))
}

fn c2_g1_not_recognizable() -> Check {
    let g1 = dfa_fixture("G1").map_err(|e| e.to_string())?;
    let verdict = classify(&g1);
    let Classification::NotRecognizable(w) = &verdict.classification else {
        return Err(format!("got {}", verdict.classification.describe()));
    };
    ensure(w.kind == FragmentKind::T3, format!("witness kind {}", w.kind))?;
    let found = verify_witness(&verdict.minimal, w).map_err(|e| e.to_string())?;
    ensure(found.passed(), format!("detected witness fails {:?}", found.failed_ids()))?;
    let reference = verify_witness(&verdict.minimal, &g1_reference_witness()).map_err(|e| e.to_string())?;
    ensure(reference.passed(), format!("x=b, y=aba, z1=ab, z2=b fails {:?}", reference.failed_ids()))?;
    Ok(format!("detected x={} y={} z1={} z2={}", w.words["x"], w.words["y"], w.words["z1"], w.words["z2"]))
}

fn c3_synthesis() -> Check {
    let mut details = Vec::new();
    for (name, lang) in [("G2", "L2"), ("G3", "L3")] {
        let dfa = dfa_fixture(name).map_err(|e| e.to_string())?;
        let s = synthesize(&dfa).map_err(|e| e.to_string())?;
        ensure(s.p == Rational64::new(3, 5), format!("{name}: p = {}", s.p))?;
        ensure(s.plan.n == 2, format!("{name}: n = {}", s.plan.n))?;
        let u = s.qfa.validate(1e-9);
        ensure(u.passed(), format!("{name}: unitarity deviation {:e}", u.worst().1))?;
        let o = oracle(lang).map_err(|e| e.to_string())?;
        let r = s.qfa.verify_recognition(&|w| o.contains(w), 0.6 - 1e-9, 8, 1e-9).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("{name}: {} counterexamples, first {:?}", r.counterexamples.len(), r.counterexamples.first()))?;
        let margin = |m: &Option<(String, f64)>| m.as_ref().map_or(f64::NAN, |x| x.1);
        details.push(format!(
            "{name}: dim {}, worst margins {:.3e}/{:.3e}",
            s.qfa.dimension(),
            margin(&r.worst_accept_margin),
            margin(&r.worst_reject_margin)
        ));
    }
    Ok(details.join("; "))
}

fn c4_union() -> Check {
    let k2 = qfa_fixture("K2").map_err(|e| e.to_string())?;
    let k3 = qfa_fixture("K3").map_err(|e| e.to_string())?;
    ensure(
        matches!(union(&k2, 2.0 / 3.0, &k3, 2.0 / 3.0), Err(MixError::LimitCondition(_))),
        "p1 = p2 = 2/3 was not rejected",
    )?;
    let (d1, d2) = (even_count_dfa('a'), even_count_dfa('b'));
    let (m1, m2) = (three_quarter_machine(&d1), three_quarter_machine(&d2));
    let (u, p) = union(&m1, 0.75, &m2, 0.75).map_err(|e| e.to_string())?;
    ensure((p - 6.0 / 11.0).abs() <= 1e-9, format!("p = {p}"))?;
    let mut cases = [0usize; 4];
    for w in words_up_to(&['a', 'b'], 6) {
        let (in1, in2) = (d1.accepts(&w).unwrap(), d2.accepts(&w).unwrap());
        // the parts answer correctly with probability exactly 3/4
        for (m, inside) in [(&m1, in1), (&m2, in2)] {
            let r = m.run(&w, false).map_err(|e| e.to_string())?;
            let right = if inside { r.p_accept } else { r.p_reject };
            ensure((right - 0.75).abs() <= 1e-9, format!("toy machine on {w:?}: {right}"))?;
        }
        let r = u.run(&w, false).map_err(|e| e.to_string())?;
        match (in1, in2) {
            (true, true) => ensure(r.p_accept >= p - 1e-9, format!("{w:?} in both: accept {}", r.p_accept))?,
            (true, false) | (false, true) => {
                ensure(r.p_accept >= p - 1e-9, format!("{w:?} in one: accept {}", r.p_accept))?
            }
            (false, false) => ensure(r.p_reject >= p - 1e-9, format!("{w:?} in neither: reject {}", r.p_reject))?,
        }
        cases[usize::from(in1) * 2 + usize::from(in2)] += 1;
    }
    Ok(format!("p = {p:.12}; words per case (neither, L2 only, L1 only, both) = {cases:?}"))
}

fn c5_unitarity_audit() -> Check {
    let raw = qfa_fixture("K2_RAW_KAPPA").map_err(|e| e.to_string())?.validate(1e-12);
    let (sym, dev) = raw.worst();
    ensure(!raw.passed(), "raw left-endmarker matrix passed")?;
    ensure(sym == Symbol::LeftEnd, format!("worst symbol {sym}"))?;
    ensure((dev - 1.0 / 3.0).abs() <= 1e-12, format!("deviation {dev}"))?;
    let fixed = qfa_fixture("K2").map_err(|e| e.to_string())?.validate(1e-12);
    ensure(fixed.passed(), format!("repaired K2 deviation {:e}", fixed.worst().1))?;
    Ok(format!("raw deviation {dev:.15}, repaired {:.1e}", fixed.worst().1))
}

fn c6_spectral() -> Check {
    let k2 = qfa_fixture("K2").map_err(|e| e.to_string())?;
    let d = decompose_word(&k2, "b").map_err(|e| e.to_string())?;
    ensure(d.dim_e1() == 2, format!("dim E1 = {}", d.dim_e1()))?;
    let vb = k2.nonhalting_operator(&[Symbol::Letter('b')]).map_err(|e| e.to_string())?;
    for v in d.e1_basis.column_iter() {
        ensure(((&vb * v).norm() - v.norm()).abs() <= 1e-9, "E1 norm not preserved under b")?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut longest = 0;
    let mut probes: Vec<CVector> = d.e2_basis.column_iter().map(|c| c.into_owned()).collect();
    for _ in 0..20 {
        probes.push(d.project_e2(&random_vector(&mut rng, k2.dimension())));
    }
    for v in &probes {
        let t = find_shrinking_word(&k2, "b", "a", v, 1e-6, 4)
            .map_err(|e| e.to_string())?
            .ok_or("no shrinking word within 4 blocks")?;
        let word = k2.parse_symbols(&t.word).map_err(|e| e.to_string())?;
        let after = (k2.nonhalting_operator(&word).map_err(|e| e.to_string())? * v).norm();
        ensure(after < 1e-6, format!("word {:?} leaves norm {after}", t.word))?;
        longest = longest.max(t.blocks.len());
    }

    let mut structured = 0;
    for i in 0..100 {
        let invariant = if i % 2 == 0 { 2 } else { 0 };
        let q = random_qfa(&mut rng, 6, invariant);
        let d = decompose_word(&q, "a").map_err(|e| e.to_string())?;
        let non = q.non_halting().len();
        ensure(d.dim_e1() + d.dim_e2() == non, format!("qfa {i}: {} + {} != {non}", d.dim_e1(), d.dim_e2()))?;
        ensure(d.unimodular_eigenvalues == Some(d.dim_e1()), format!("qfa {i}: eigenvalue count disagrees"))?;
        if invariant > 0 {
            ensure(d.dim_e1() >= invariant, format!("qfa {i}: invariant block lost"))?;
            structured += 1;
        }
        let v = d.project_e2(&random_vector(&mut rng, 6));
        let decay = norm_decay(&q, "a", &v, 60).map_err(|e| e.to_string())?;
        for pair in decay.windows(2) {
            ensure(pair[1].1 <= pair[0].1 + 1e-12, format!("qfa {i}: norm grew at step {}", pair[1].0))?;
        }
        if v.norm() > 1e-9 {
            ensure(decay[60].1 < decay[0].1, format!("qfa {i}: no decay on E2"))?;
        }
    }
    Ok(format!("{} E2 probes shrink within {longest} blocks; 100 random machines ({structured} with an invariant block)", probes.len()))
}

fn c7_fig12() -> Check {
    let dfa = dfa_fixture("FIG12").map_err(|e| e.to_string())?;
    let monoid = transition_monoid(&dfa, DEFAULT_MONOID_CAP);
    ensure(monoid.is_complete(), "monoid enumeration incomplete")?;
    ensure(detect_t3(&dfa, &monoid).is_none(), "detect_t3 found a pattern")?;
    let six = verify_witness(&dfa, &fig12_six_word_witness()).map_err(|e| e.to_string())?;
    ensure(six.conditions.len() == 7, format!("{} conditions checked", six.conditions.len()))?;
    ensure(six.passed(), format!("six-word witness fails {:?}", six.failed_ids()))?;
    let two = detect_two_cycles(&dfa, &monoid).ok_or("two-cycles detector found nothing")?;
    let two_report = verify_witness(&dfa, &two).map_err(|e| e.to_string())?;
    ensure(two_report.passed(), format!("two-cycles witness fails {:?}", two_report.failed_ids()))?;
    let verdict = classify(&dfa);
    ensure(
        matches!(verdict.classification, Classification::OutsideClassU(_)),
        format!("classify gave {}", verdict.classification.describe()),
    )?;
    Ok(format!("{} states, monoid size {}", dfa.num_states(), monoid.len()))
}

fn c8_property_oracles() -> Check {
    const RUNS: usize = 250;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut recurrence_cases = 0;
    for i in 0..RUNS {
        let dfa = random_dfa(&mut rng, 6);
        let n = dfa.num_states();

        let (min, map) = minimize_with_map(&dfa);
        let live = reachable(&dfa);
        for &s in &live {
            for &t in &live {
                let same = map[s] == map[t];
                ensure(same == nerode_equivalent(&dfa, s, t), format!("dfa {i}: minimize disagrees on ({s},{t})"))?;
            }
        }
        let classes: std::collections::BTreeSet<_> = live.iter().map(|&s| map[s]).collect();
        ensure(classes.len() == min.num_states(), format!("dfa {i}: minimal size"))?;

        let monoid = transition_monoid(&dfa, DEFAULT_MONOID_CAP);
        ensure(monoid.is_complete(), format!("dfa {i}: monoid incomplete"))?;
        let by_words = word_mappings(&dfa);
        ensure(monoid.len() == by_words.len(), format!("dfa {i}: monoid size {} vs {}", monoid.len(), by_words.len()))?;
        for e in monoid.elements() {
            ensure(by_words.contains(&e.mapping), format!("dfa {i}: stray monoid element"))?;
            let replay: Vec<_> = (0..n).map(|s| dfa.run_indices(s, &e.word)).collect();
            ensure(replay == e.mapping, format!("dfa {i}: witness word does not replay"))?;
        }

        let closed: Vec<bool> = {
            let mut v = vec![false; n];
            for c in closed_sccs(&dfa) {
                for s in c {
                    v[s] = true;
                }
            }
            v
        };
        for q in 0..n {
            ensure(closed[q] == definitionally_closed(&dfa, q), format!("dfa {i}: closed_sccs disagrees on {q}"))?;
        }

        let elems = monoid.elements();
        for _ in 0..4 {
            use rand::Rng;
            let f = &elems[rng.gen_range(0..elems.len())].mapping;
            let g = &elems[rng.gen_range(0..elems.len())].mapping;
            let maps = [f.as_slice(), g.as_slice()];
            for q in 0..n {
                let fast = recurrent_under(n, q, &maps).is_ok();
                ensure(fast == recurrent_by_words(q, &maps, 6), format!("dfa {i}: recurrence disagrees at {q}"))?;
                recurrence_cases += 1;
            }
        }
    }
    Ok(format!("{RUNS} random DFAs per oracle, {recurrence_cases} recurrence cases"))
}

fn c9_non_closure() -> Check {
    let (l1, l2, l3) = (oracle("L1").unwrap(), oracle("L2").unwrap(), oracle("L3").unwrap());
    for w in words_up_to(&['a', 'b'], 10) {
        ensure(l1.contains(&w) == (l2.contains(&w) || l3.contains(&w)), format!("L1 != L2 ∪ L3 at {w:?}"))?;
    }
    let kinds: Vec<&str> = ["G2", "G3", "G1"]
        .iter()
        .map(|n| classify(&dfa_fixture(n).unwrap()).classification.kind_name())
        .collect();
    ensure(
        kinds == ["RecognizableConstructible", "RecognizableConstructible", "NotRecognizable"],
        format!("got {kinds:?}"),
    )?;
    Ok("L2, L3 recognizable; L1 = L2 ∪ L3 is not".to_string())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 9] = [
        ("K2/K3 recognize L2/L3 with probability 2/3", Duration::from_secs(5), c1_k2_k3_probabilities),
        ("G1 is not recognizable, witness verifies", Duration::from_secs(1), c2_g1_not_recognizable),
        ("G2/G3 compile with p = 3/5", Duration::from_secs(10), c3_synthesis),
        ("union limit case and 6/11 bounds", Duration::from_secs(5), c4_union),
        ("unitarity audit of the raw endmarker matrix", Duration::from_millis(100), c5_unitarity_audit),
        ("ergodic/transient decomposition", Duration::from_secs(10), c6_spectral),
        ("FIG12: no T3, six-word witness, two cycles", Duration::from_secs(30), c7_fig12),
        ("property oracles on random DFAs", Duration::from_secs(60), c8_property_oracles),
        ("non-closure under union end to end", Duration::from_secs(5), c9_non_closure),
    ];
    // optional criterion numbers on the command line restrict the run
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    let mut ran = 0;
    for (i, (title, limit, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let in_time = took <= *limit;
        let line = match (&result, in_time) {
            (Ok(detail), true) => format!("PASS  criterion {}: {title} [{took:.2?} / {limit:?}] {detail}", i + 1),
            (Ok(detail), false) => format!("FAIL  criterion {}: {title} [{took:.2?} exceeds {limit:?}] {detail}", i + 1),
            (Err(why), _) => format!("FAIL  criterion {}: {title} [{took:.2?}] {why}", i + 1),
        };
        if result.is_err() || !in_time {
            failures += 1;
        }
        println!("{line}");
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
