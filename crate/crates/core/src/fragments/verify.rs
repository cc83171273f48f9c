use std::collections::{BTreeMap, BTreeSet};

use crate::automata::{Dfa, StateId};

use super::search::recurrent_under;
use super::{FragmentError, FragmentKind, FragmentWitness};

/// One checked condition of a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub detail: Option<String>,
}

/// Per-condition outcome of replaying a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub kind: FragmentKind,
    pub conditions: Vec<ConditionCheck>,
    /// Remarks that do not affect the outcome, such as ambiguous readings.
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect()
    }

    fn check(&mut self, id: impl Into<String>, description: impl Into<String>, failures: Vec<String>) {
        let passed = failures.is_empty();
        self.conditions.push(ConditionCheck {
            id: id.into(),
            description: description.into(),
            passed,
            detail: (!passed).then(|| failures.join("; ")),
        });
    }
}

struct Ctx<'a> {
    dfa: &'a Dfa,
    w: &'a FragmentWitness,
}

impl Ctx<'_> {
    fn s(&self, b: &str) -> Result<StateId, FragmentError> {
        self.w.state(self.dfa, b)
    }

    fn word(&self, b: &str) -> Result<Vec<usize>, FragmentError> {
        self.w.word(self.dfa, b)
    }

    fn map(&self, b: &str) -> Result<Vec<StateId>, FragmentError> {
        let w = self.word(b)?;
        Ok((0..self.dfa.num_states()).map(|s| self.dfa.run_indices(s, &w)).collect())
    }

    fn name(&self, s: StateId) -> &str {
        self.dfa.state_name(s)
    }

    /// `from·word = to` as a failure list.
    fn goes(&self, from: &str, word: &str, to: &str) -> Result<Vec<String>, FragmentError> {
        let (f, t) = (self.s(from)?, self.s(to)?);
        let got = self.dfa.run_indices(f, &self.word(word)?);
        Ok(if got == t {
            vec![]
        } else {
            vec![format!("{from}·{word} = {} (expected {})", self.name(got), self.name(t))]
        })
    }

    fn lands(&self, from: &str, word: &str, accept: bool) -> Result<Vec<String>, FragmentError> {
        let got = self.dfa.run_indices(self.s(from)?, &self.word(word)?);
        Ok(if self.dfa.is_accepting(got) == accept {
            vec![]
        } else {
            let want = if accept { "accepting" } else { "rejecting" };
            vec![format!("{from}·{word} = {} is not {want}", self.name(got))]
        })
    }

    fn recurrent(&self, state: &str, words: &[&str]) -> Result<Vec<String>, FragmentError> {
        let maps = words.iter().map(|b| self.map(b)).collect::<Result<Vec<_>, _>>()?;
        let refs: Vec<&[StateId]> = maps.iter().map(Vec::as_slice).collect();
        Ok(match recurrent_under(self.dfa.num_states(), self.s(state)?, &refs) {
            Ok(()) => vec![],
            Err(bad) => vec![format!("{state} reaches {} with no way back", self.name(bad))],
        })
    }
}

/// Replays every condition of the witness's kind on `dfa`.
///
/// Missing bindings and words over the wrong alphabet are errors; failed
/// conditions are reported, not raised.
pub fn verify_witness(dfa: &Dfa, witness: &FragmentWitness) -> Result<VerificationReport, FragmentError> {
    let (states, words) = witness.kind.bindings();
    for b in states {
        witness.state(dfa, b)?;
    }
    for b in words {
        witness.word(dfa, b)?;
    }
    let c = Ctx { dfa, w: witness };
    let mut r = VerificationReport { kind: witness.kind, conditions: Vec::new(), notes: Vec::new() };
    match witness.kind {
        FragmentKind::T2 => {
            let ne = if c.s("q1")? != c.s("q2")? { vec![] } else { vec!["q1 = q2".to_string()] };
            r.check("1", "q1 ≠ q2", ne);
            r.check("2", "q1·x = q2", c.goes("q1", "x", "q2")?);
            r.check("3", "q2·x = q2", c.goes("q2", "x", "q2")?);
            r.check("4", "q2·y = q1", c.goes("q2", "y", "q1")?);
        }
        FragmentKind::T3 => {
            let ne = if c.s("q2")? != c.s("q3")? { vec![] } else { vec!["q2 = q3".to_string()] };
            r.check("1", "q2 ≠ q3", ne);
            r.check("2", "q1·x = q2", c.goes("q1", "x", "q2")?);
            r.check("3", "q2·x = q2", c.goes("q2", "x", "q2")?);
            r.check("4", "q1·y = q3", c.goes("q1", "y", "q3")?);
            r.check("5", "q3·y = q3", c.goes("q3", "y", "q3")?);
            r.check("6", "q2 recurrent under {x,y}*", c.recurrent("q2", &["x", "y"])?);
            r.check("7", "q3 recurrent under {x,y}*", c.recurrent("q3", &["x", "y"])?);
            r.check("8", "q2·z1 accepting", c.lands("q2", "z1", true)?);
            r.check("9", "q2·z2 rejecting", c.lands("q2", "z2", false)?);
            r.check("10", "q3·z1 rejecting", c.lands("q3", "z1", false)?);
            r.check("11", "q3·z2 accepting", c.lands("q3", "z2", true)?);
        }
        FragmentKind::TwoCycles => {
            let (q1, q2, q3) = (c.s("q1")?, c.s("q2")?, c.s("q3")?);
            let ne = if q1 != q2 && q2 != q3 && q1 != q3 { vec![] } else { vec!["states coincide".to_string()] };
            r.check("1", "q1, q2, q3 pairwise distinct", ne);
            r.check("2", "q1·x = q2", c.goes("q1", "x", "q2")?);
            r.check("3", "q2·x = q2", c.goes("q2", "x", "q2")?);
            r.check("4", "q2·y = q3", c.goes("q2", "y", "q3")?);
            r.check("5", "q3·y = q3", c.goes("q3", "y", "q3")?);
        }
        FragmentKind::SixWord => verify_six_word(&c, &mut r)?,
        FragmentKind::General => verify_general(&c, &mut r)?,
    }
    Ok(r)
}

const TOP: [&str; 3] = ["a", "b", "c"];
const MID: [&str; 3] = ["d", "e", "f"];
const PAIRS: [(&str, &str); 6] = [("a", "d"), ("a", "e"), ("b", "d"), ("b", "f"), ("c", "e"), ("c", "f")];

fn verify_six_word(c: &Ctx, r: &mut VerificationReport) -> Result<(), FragmentError> {
    let mut f1 = vec![];
    let mut f2 = vec![];
    let mut f3 = vec![];
    for x in TOP {
        let qx = format!("q{x}");
        f1.extend(c.goes("q0", x, &qx)?);
        f2.extend(c.goes(&qx, x, &qx)?);
        f3.extend(c.recurrent(&qx, &TOP)?);
    }
    r.check("1", "q0·x = q_x for x ∈ {a,b,c}", f1);
    r.check("2", "q_x·x = q_x", f2);
    r.check("3", "q_x recurrent under {a,b,c}*", f3);
    let (mut f4, mut f5, mut f6) = (vec![], vec![], vec![]);
    for (x, y) in PAIRS {
        let (qx, qxy) = (format!("q{x}"), format!("q{x}{y}"));
        f4.extend(c.goes(&qx, y, &qxy)?);
        f5.extend(c.goes(&qxy, y, &qxy)?);
        f6.extend(c.recurrent(&qxy, &MID)?);
    }
    r.check("4", "q_x·y = q_xy for the six defined pairs", f4);
    r.check("5", "q_xy·y = q_xy", f5);
    r.check("6", "q_xy recurrent under {d,e,f}*", f6);
    let mut f7 = vec![];
    for (s, z) in [("qad", "g"), ("qbf", "h"), ("qce", "i")] {
        f7.extend(c.lands(s, z, true)?);
    }
    for (s, z) in [("qae", "h"), ("qbd", "i"), ("qcf", "g")] {
        f7.extend(c.lands(s, z, false)?);
    }
    r.check("7", "g,h,i accept from qad,qbf,qce and reject from qae,qbd,qcf", f7);
    Ok(())
}

/// Parses `a<level>_<index>` word bindings into levels (1-based).
fn general_levels(w: &FragmentWitness) -> Result<BTreeMap<usize, Vec<String>>, FragmentError> {
    let mut levels: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for key in w.words.keys() {
        let parsed = key
            .strip_prefix('a')
            .and_then(|rest| rest.split_once('_'))
            .and_then(|(l, i)| Some((l.parse::<usize>().ok()?, i.parse::<usize>().ok()?)));
        match parsed {
            Some((l, _)) if l >= 1 => levels.entry(l).or_default().push(key.clone()),
            _ => return Err(FragmentError::MalformedGeneral(format!("word binding `{key}` is not a<level>_<index>"))),
        }
    }
    let Some(&top) = levels.keys().next_back() else {
        return Err(FragmentError::MalformedGeneral("no word bindings".into()));
    };
    if let Some(missing) = (1..=top).find(|l| !levels.contains_key(l)) {
        return Err(FragmentError::MalformedGeneral(format!("level {missing} has no words")));
    }
    Ok(levels)
}

/// Literal reading of the multi-level pattern:
/// - level 1 is {q1}; level j+1 is every image of a level-j state under a
///   level-j word;
/// - every level strictly between the first and the last is recurrent under
///   the previous level's words;
/// - for every distinct word w and level j using it, B is the set of images
///   of level-j states under w, and D is the set of last-level states
///   reachable from B in the automaton; D must hold as many accepting as
///   rejecting states.
fn verify_general(c: &Ctx, r: &mut VerificationReport) -> Result<(), FragmentError> {
    let dfa = c.dfa;
    let levels = general_levels(c.w)?;
    let last = levels.len() + 1;
    let maps: BTreeMap<&String, Vec<StateId>> =
        c.w.words.keys().map(|k| Ok((k, c.map(k)?))).collect::<Result<_, FragmentError>>()?;

    // state sets per level, with collision tracking
    let mut state_levels: Vec<BTreeSet<StateId>> = vec![BTreeSet::from([c.s("q1")?])];
    for j in 1..last {
        let mut next = BTreeSet::new();
        let mut seen: BTreeMap<StateId, (StateId, &String)> = BTreeMap::new();
        for &s in &state_levels[j - 1] {
            for k in &levels[&j] {
                let t = maps[k][s];
                if let Some((s0, k0)) = seen.insert(t, (s, k)) {
                    r.notes.push(format!(
                        "level {}: {}·{} and {}·{} both give {}",
                        j + 1,
                        dfa.state_name(s0),
                        c.w.words[k0],
                        dfa.state_name(s),
                        c.w.words[k],
                        dfa.state_name(t)
                    ));
                }
                next.insert(t);
            }
        }
        state_levels.push(next);
    }

    // the same state on several levels
    let mut first_level: BTreeMap<StateId, usize> = BTreeMap::new();
    for (j, set) in state_levels.iter().enumerate() {
        for &s in set {
            if let Some(&j0) = first_level.get(&s) {
                r.notes.push(format!("state {} appears on levels {} and {}", dfa.state_name(s), j0 + 1, j + 1));
            } else {
                first_level.insert(s, j);
            }
        }
    }

    for j in 2..last {
        let prev: Vec<&[StateId]> = levels[&(j - 1)].iter().map(|k| maps[k].as_slice()).collect();
        let failures: Vec<String> = state_levels[j - 1]
            .iter()
            .filter_map(|&s| {
                recurrent_under(dfa.num_states(), s, &prev).err().map(|bad| {
                    format!("{} reaches {} with no way back", dfa.state_name(s), dfa.state_name(bad))
                })
            })
            .collect();
        r.check(
            format!("recurrence L{j}"),
            format!("level-{j} states recurrent under level-{} words", j - 1),
            failures,
        );
    }

    // distinct words and the levels they occur on
    let mut occurrences: BTreeMap<&String, Vec<(usize, &String)>> = BTreeMap::new();
    for (&j, keys) in &levels {
        for k in keys {
            occurrences.entry(&c.w.words[k]).or_default().push((j, k));
        }
    }
    let final_states = &state_levels[last - 1];
    for (word, occ) in &occurrences {
        let mut distinct_levels: Vec<usize> = occ.iter().map(|&(j, _)| j).collect();
        distinct_levels.dedup();
        if distinct_levels.len() > 1 {
            r.notes.push(format!("word `{word}` is bound on levels {distinct_levels:?}"));
        }
        for &j in &distinct_levels {
            let key = occ.iter().find(|&&(l, _)| l == j).expect("present").1;
            let b: BTreeSet<StateId> = state_levels[j - 1].iter().map(|&s| maps[key][s]).collect();
            let mut reach = vec![false; dfa.num_states()];
            for &s in &b {
                for (t, yes) in dfa.reachable_from(s).into_iter().enumerate() {
                    reach[t] |= yes;
                }
            }
            let d: BTreeSet<StateId> = final_states.iter().copied().filter(|&t| reach[t]).collect();

            // reachability restricted to the pattern's own words
            let mut via_levels = b.clone();
            for l in j + 1..last {
                via_levels = via_levels
                    .iter()
                    .flat_map(|&s| levels[&l].iter().map(move |k| (s, k)))
                    .map(|(s, k)| maps[k][s])
                    .collect();
            }
            let via_levels: BTreeSet<StateId> = via_levels.intersection(final_states).copied().collect();
            if via_levels != d {
                r.notes.push(format!(
                    "word `{word}` on level {j}: plain reachability gives {} last-level states, level paths give {}",
                    d.len(),
                    via_levels.len()
                ));
            }
            let acc = d.iter().filter(|&&s| dfa.is_accepting(s)).count();
            let rej = d.len() - acc;
            let failures =
                if acc == rej { vec![] } else { vec![format!("{acc} accepting vs {rej} rejecting")] };
            r.check(format!("balance {word}@L{j}"), format!("D for `{word}` on level {j} is balanced"), failures);
        }
    }
    Ok(())
}
