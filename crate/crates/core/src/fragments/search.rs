use std::collections::{BTreeMap, VecDeque};

use crate::automata::{Dfa, Monoid, MonoidElement, StateId};

use super::{FragmentKind, FragmentWitness};

/// Default node budget for [`search_6word`].
pub const DEFAULT_SEARCH_BUDGET: usize = 2_000_000;

/// Checks that every state reachable from `q` using the given maps can get
/// back to `q` the same way. Returns the first offending state.
pub fn recurrent_under(n: usize, q: StateId, maps: &[&[StateId]]) -> Result<(), StateId> {
    let mut reach = vec![false; n];
    let mut order = vec![q];
    reach[q] = true;
    let mut i = 0;
    while i < order.len() {
        let s = order[i];
        i += 1;
        for m in maps {
            let t = m[s];
            if !reach[t] {
                reach[t] = true;
                order.push(t);
            }
        }
    }
    // backward search inside the reachable part
    let mut back = vec![false; n];
    back[q] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &s in &order {
            if !back[s] && maps.iter().any(|m| back[m[s]]) {
                back[s] = true;
                changed = true;
            }
        }
    }
    match order.iter().find(|&&s| !back[s]) {
        Some(&bad) => Err(bad),
        None => Ok(()),
    }
}

/// Shortest words telling states apart in a fixed direction: for every
/// ordered pair (s, t), a shortest z with s·z accepting and t·z rejecting.
#[derive(Debug, Clone)]
pub struct SeparationTable {
    n: usize,
    // (letter, successor pair) on a shortest path; base pairs have dist 0
    next: Vec<Option<(usize, usize)>>,
    dist: Vec<usize>,
}

impl SeparationTable {
    pub fn new(dfa: &Dfa) -> Self {
        let n = dfa.num_states();
        let k = dfa.alphabet().len();
        let mut pred = vec![vec![Vec::new(); n]; k];
        for s in 0..n {
            for l in 0..k {
                pred[l][dfa.step(s, l)].push(s);
            }
        }
        let mut dist = vec![usize::MAX; n * n];
        let mut next = vec![None; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            for t in 0..n {
                if dfa.is_accepting(s) && !dfa.is_accepting(t) {
                    dist[s * n + t] = 0;
                    queue.push_back(s * n + t);
                }
            }
        }
        while let Some(p) = queue.pop_front() {
            let (s, t) = (p / n, p % n);
            for l in 0..k {
                for &s0 in &pred[l][s] {
                    for &t0 in &pred[l][t] {
                        let q = s0 * n + t0;
                        if dist[q] == usize::MAX {
                            dist[q] = dist[p] + 1;
                            next[q] = Some((l, p));
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        SeparationTable { n, next, dist }
    }

    pub fn exists(&self, s: StateId, t: StateId) -> bool {
        self.dist[s * self.n + t] != usize::MAX
    }

    /// A shortest z with s·z accepting and t·z rejecting.
    pub fn word(&self, s: StateId, t: StateId) -> Option<Vec<usize>> {
        let mut p = s * self.n + t;
        if self.dist[p] == usize::MAX {
            return None;
        }
        let mut w = Vec::with_capacity(self.dist[p]);
        while let Some((l, q)) = self.next[p] {
            w.push(l);
            p = q;
        }
        Some(w)
    }
}

fn name(dfa: &Dfa, s: StateId) -> &str {
    dfa.state_name(s)
}

fn finish(mut w: FragmentWitness, dfa: &Dfa) -> FragmentWitness {
    w.fill_mappings(dfa).expect("detector words are over the alphabet");
    w
}

fn reachability(dfa: &Dfa) -> Vec<Vec<bool>> {
    (0..dfa.num_states()).map(|s| dfa.reachable_from(s)).collect()
}

/// For each state q, the (element index, t) pairs with e(q) = t = e(t),
/// skipping the identity.
fn pumps(monoid: &Monoid, n: usize) -> Vec<Vec<(usize, StateId)>> {
    let mut out = vec![Vec::new(); n];
    for (i, e) in monoid.elements().iter().enumerate() {
        if e.is_identity() {
            continue;
        }
        for (q, list) in out.iter_mut().enumerate() {
            let t = e.apply(q);
            if e.apply(t) == t {
                list.push((i, t));
            }
        }
    }
    out
}

/// Looks for q1 ≠ q2, x with q1·x = q2 = q2·x, and y with q2·y = q1.
pub fn detect_t2(dfa: &Dfa, monoid: &Monoid) -> Option<FragmentWitness> {
    let reach = reachability(dfa);
    for f in monoid.elements() {
        if f.is_identity() {
            continue;
        }
        for q1 in 0..dfa.num_states() {
            let q2 = f.apply(q1);
            if q2 == q1 || f.apply(q2) != q2 || !reach[q2][q1] {
                continue;
            }
            let y = dfa.shortest_path_to(q2, |s| s == q1).expect("reachable");
            let mut w = FragmentWitness::new(FragmentKind::T2);
            w.bind_state("q1", name(dfa, q1))
                .bind_state("q2", name(dfa, q2))
                .bind_word("x", &f.witness_word(dfa))
                .bind_word("y", &dfa.decode(&y));
            return Some(finish(w, dfa));
        }
    }
    None
}

/// Looks for pairwise distinct q1, q2, q3 with q1·x = q2 = q2·x and
/// q2·y = q3 = q3·y.
pub fn detect_two_cycles(dfa: &Dfa, monoid: &Monoid) -> Option<FragmentWitness> {
    let n = dfa.num_states();
    let elems = monoid.elements();
    // second[q2][q3] = smallest element index pumping q2 into q3 ≠ q2
    let mut second: Vec<BTreeMap<StateId, usize>> = vec![BTreeMap::new(); n];
    for (q2, list) in pumps(monoid, n).into_iter().enumerate() {
        for (i, q3) in list {
            if q3 != q2 {
                second[q2].entry(q3).or_insert(i);
            }
        }
    }
    for f in elems {
        if f.is_identity() {
            continue;
        }
        for q1 in 0..n {
            let q2 = f.apply(q1);
            if q2 == q1 || f.apply(q2) != q2 {
                continue;
            }
            let best = second[q2].iter().filter(|(&q3, _)| q3 != q1).min_by_key(|(_, &i)| i);
            if let Some((&q3, &gi)) = best {
                let mut w = FragmentWitness::new(FragmentKind::TwoCycles);
                w.bind_state("q1", name(dfa, q1))
                    .bind_state("q2", name(dfa, q2))
                    .bind_state("q3", name(dfa, q3))
                    .bind_word("x", &f.witness_word(dfa))
                    .bind_word("y", &elems[gi].witness_word(dfa));
                return Some(finish(w, dfa));
            }
        }
    }
    None
}

/// Looks for the eleven-condition pattern: q1·x = q2 = q2·x,
/// q1·y = q3 = q3·y, q2 ≠ q3, both recurrent under {x, y}, and words z1, z2
/// separating q2 and q3 in both directions.
pub fn detect_t3(dfa: &Dfa, monoid: &Monoid) -> Option<FragmentWitness> {
    let n = dfa.num_states();
    let sep = SeparationTable::new(dfa);
    let elems = monoid.elements();
    let pumped = pumps(monoid, n);
    for f in elems {
        if f.is_identity() {
            continue;
        }
        for q1 in 0..n {
            let q2 = f.apply(q1);
            if f.apply(q2) != q2 {
                continue;
            }
            for &(gi, q3) in &pumped[q1] {
                if q3 == q2 || !sep.exists(q2, q3) || !sep.exists(q3, q2) {
                    continue;
                }
                let g = &elems[gi];
                let maps = [f.mapping.as_slice(), g.mapping.as_slice()];
                if recurrent_under(n, q2, &maps).is_err() || recurrent_under(n, q3, &maps).is_err() {
                    continue;
                }
                let z1 = sep.word(q2, q3).expect("checked");
                let z2 = sep.word(q3, q2).expect("checked");
                let mut w = FragmentWitness::new(FragmentKind::T3);
                w.bind_state("q1", name(dfa, q1))
                    .bind_state("q2", name(dfa, q2))
                    .bind_state("q3", name(dfa, q3))
                    .bind_word("x", &f.witness_word(dfa))
                    .bind_word("y", &g.witness_word(dfa))
                    .bind_word("z1", &dfa.decode(&z1))
                    .bind_word("z2", &dfa.decode(&z2));
                return Some(finish(w, dfa));
            }
        }
    }
    None
}

/// Result of the bounded six-word search.
#[derive(Debug, Clone, PartialEq)]
pub struct SixWordSearch {
    pub witness: Option<FragmentWitness>,
    pub nodes: usize,
    /// True when the budget ran out before the search space did.
    pub budget_exhausted: bool,
}

struct Budget {
    used: usize,
    limit: usize,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}

/// Bounded search for the two-level, nine-word pattern. Never claims
/// absence: `None` with `budget_exhausted = false` only means the finite
/// monoid-level search space was covered.
pub fn search_6word(dfa: &Dfa, monoid: &Monoid, budget: usize) -> SixWordSearch {
    let n = dfa.num_states();
    let sep = SeparationTable::new(dfa);
    let elems = monoid.elements();
    let mut b = Budget { used: 0, limit: budget };
    let mut out = SixWordSearch { witness: None, nodes: 0, budget_exhausted: false };

    'outer: for q0 in 0..n {
        // level-one words: e(q0) = s and e(s) = s
        let level1: Vec<(&MonoidElement, StateId)> = elems
            .iter()
            .filter(|e| !e.is_identity())
            .filter_map(|e| {
                let s = e.apply(q0);
                (e.apply(s) == s).then_some((e, s))
            })
            .collect();
        for &(fa, qa) in &level1 {
            for &(fb, qb) in &level1 {
                for &(fc, qc) in &level1 {
                    if !b.tick() {
                        out.budget_exhausted = true;
                        break 'outer;
                    }
                    let top = [fa.mapping.as_slice(), fb.mapping.as_slice(), fc.mapping.as_slice()];
                    if [qa, qb, qc].iter().any(|&q| recurrent_under(n, q, &top).is_err()) {
                        continue;
                    }
                    match second_level(dfa, elems, &sep, [qa, qb, qc], &mut b) {
                        Err(()) => {
                            out.budget_exhausted = true;
                            break 'outer;
                        }
                        Ok(None) => {}
                        Ok(Some((words, states))) => {
                            let mut w = FragmentWitness::new(FragmentKind::SixWord);
                            w.bind_state("q0", name(dfa, q0))
                                .bind_state("qa", name(dfa, qa))
                                .bind_state("qb", name(dfa, qb))
                                .bind_state("qc", name(dfa, qc))
                                .bind_word("a", &fa.witness_word(dfa))
                                .bind_word("b", &fb.witness_word(dfa))
                                .bind_word("c", &fc.witness_word(dfa));
                            for (k, s) in states {
                                w.bind_state(k, name(dfa, s));
                            }
                            for (k, word) in words {
                                w.bind_word(k, &dfa.decode(&word));
                            }
                            out.witness = Some(finish(w, dfa));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    out.nodes = b.used.min(budget);
    out
}

type LevelTwo = (Vec<(&'static str, Vec<usize>)>, Vec<(&'static str, StateId)>);

/// Given q_a, q_b, q_c, searches d, e, f and the separating g, h, i.
/// `Err(())` means the budget ran out.
fn second_level(
    dfa: &Dfa,
    elems: &[MonoidElement],
    sep: &SeparationTable,
    [qa, qb, qc]: [StateId; 3],
    b: &mut Budget,
) -> Result<Option<LevelTwo>, ()> {
    let n = dfa.num_states();
    // a word for letter y must pump both of its defined sources
    let pump_both = |e: &&MonoidElement, s: StateId, t: StateId| {
        !e.is_identity() && e.apply(e.apply(s)) == e.apply(s) && e.apply(e.apply(t)) == e.apply(t)
    };
    let cd: Vec<&MonoidElement> = elems.iter().filter(|e| pump_both(e, qa, qb)).collect();
    let ce: Vec<&MonoidElement> = elems.iter().filter(|e| pump_both(e, qa, qc)).collect();
    let cf: Vec<&MonoidElement> = elems.iter().filter(|e| pump_both(e, qb, qc)).collect();
    for fd in &cd {
        let (qad, qbd) = (fd.apply(qa), fd.apply(qb));
        for fe in &ce {
            if !b.tick() {
                return Err(());
            }
            let (qae, qce) = (fe.apply(qa), fe.apply(qc));
            // i separates q_ce (accept) from q_bd (reject)
            if !sep.exists(qce, qbd) {
                continue;
            }
            for ff in &cf {
                if !b.tick() {
                    return Err(());
                }
                let (qbf, qcf) = (ff.apply(qb), ff.apply(qc));
                if !sep.exists(qad, qcf) || !sep.exists(qbf, qae) {
                    continue;
                }
                let maps = [fd.mapping.as_slice(), fe.mapping.as_slice(), ff.mapping.as_slice()];
                if [qad, qae, qbd, qbf, qce, qcf].iter().any(|&q| recurrent_under(n, q, &maps).is_err()) {
                    continue;
                }
                let words = vec![
                    ("d", fd.word.clone()),
                    ("e", fe.word.clone()),
                    ("f", ff.word.clone()),
                    ("g", sep.word(qad, qcf).expect("checked")),
                    ("h", sep.word(qbf, qae).expect("checked")),
                    ("i", sep.word(qce, qbd).expect("checked")),
                ];
                let states =
                    vec![("qad", qad), ("qae", qae), ("qbd", qbd), ("qbf", qbf), ("qce", qce), ("qcf", qcf)];
                return Ok(Some((words, states)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::transition_monoid;

    #[test]
    fn recurrence_on_cycle_and_chain() {
        // 0 -> 1 -> 0 under m; 2 -> 0
        let m = [1, 0, 0];
        assert!(recurrent_under(3, 0, &[&m]).is_ok());
        assert_eq!(recurrent_under(3, 2, &[&m]), Err(0));
    }

    #[test]
    fn separation_table_words_separate() {
        let d = Dfa::from_fn(3, &['a', 'b'], 0, |s| s == 2, |s, c| if c == 'a' { (s + 1) % 3 } else { s }).unwrap();
        let t = SeparationTable::new(&d);
        for s in 0..3 {
            for u in 0..3 {
                match t.word(s, u) {
                    Some(z) => {
                        assert!(d.is_accepting(d.run_indices(s, &z)));
                        assert!(!d.is_accepting(d.run_indices(u, &z)));
                    }
                    None => assert_eq!(s, u),
                }
            }
        }
        assert_eq!(t.word(1, 0).unwrap().len(), 1);
    }

    #[test]
    fn one_state_has_no_patterns() {
        let d = Dfa::from_fn(1, &['a'], 0, |_| true, |_, _| 0).unwrap();
        let m = transition_monoid(&d, 100);
        assert!(detect_t2(&d, &m).is_none());
        assert!(detect_t3(&d, &m).is_none());
        assert!(detect_two_cycles(&d, &m).is_none());
        let s = search_6word(&d, &m, 1000);
        assert!(s.witness.is_none() && !s.budget_exhausted);
    }
}
