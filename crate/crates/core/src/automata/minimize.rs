use std::collections::{HashMap, VecDeque};

use super::{Dfa, StateId};

/// Canonical minimal DFA for the same language.
///
/// Unreachable states are dropped, equivalent states merged, and the result
/// is renumbered in BFS discovery order from the start state (alphabet order
/// breaks ties). States are named `q0`, `q1`, ... in that order.
pub fn minimize(dfa: &Dfa) -> Dfa {
    minimize_with_map(dfa).0
}

/// Like [`minimize`], also returning for each original state the index of
/// its class in the result (`None` for unreachable states).
pub fn minimize_with_map(dfa: &Dfa) -> (Dfa, Vec<Option<StateId>>) {
    let n = dfa.num_states();
    let k = dfa.alphabet().len();
    let reachable = dfa.reachable_from(dfa.start());
    let live: Vec<StateId> = (0..n).filter(|&s| reachable[s]).collect();

    // Moore refinement: split blocks by (block, successor blocks) signature
    // until the number of blocks stops growing.
    let mut block = vec![usize::MAX; n];
    for &s in &live {
        block[s] = usize::from(dfa.is_accepting(s));
    }
    let mut count = {
        let mut ids: Vec<usize> = live.iter().map(|&s| block[s]).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    };
    loop {
        let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![usize::MAX; n];
        for &s in &live {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(block[s]);
            sig.extend(dfa.row(s).iter().map(|&t| block[t]));
            let len = sigs.len();
            next[s] = *sigs.entry(sig).or_insert(len);
        }
        let new_count = sigs.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // Canonical numbering by BFS over blocks.
    let mut order = vec![usize::MAX; count];
    let mut rep = Vec::with_capacity(count);
    let mut queue = VecDeque::new();
    order[block[dfa.start()]] = 0;
    rep.push(dfa.start());
    queue.push_back(dfa.start());
    while let Some(s) = queue.pop_front() {
        for &t in dfa.row(s) {
            if order[block[t]] == usize::MAX {
                order[block[t]] = rep.len();
                rep.push(t);
                queue.push_back(t);
            }
        }
    }

    let names = (0..count).map(|i| format!("q{i}")).collect();
    let accepting = rep.iter().map(|&s| dfa.is_accepting(s)).collect();
    let delta = rep
        .iter()
        .map(|&s| dfa.row(s).iter().map(|&t| order[block[t]]).collect())
        .collect();
    let min = Dfa::new(names, dfa.alphabet().to_vec(), 0, accepting, delta)
        .expect("quotient of a well-formed DFA is well-formed");
    let map = (0..n).map(|s| reachable[s].then(|| order[block[s]])).collect();
    (min, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_state_is_fixed_point() {
        let d = Dfa::from_fn(1, &['a', 'b'], 0, |_| true, |_, _| 0).unwrap();
        assert_eq!(minimize(&d), d);
    }

    #[test]
    fn merges_equivalent_and_drops_unreachable() {
        // 0 -a-> 1, 1 -a-> 2, 2 -a-> 1; 1 and 2 both accepting; 3 unreachable
        let d = Dfa::from_fn(
            4,
            &['a'],
            0,
            |s| s == 1 || s == 2,
            |s, _| match s {
                0 => 1,
                1 => 2,
                2 => 1,
                _ => 3,
            },
        )
        .unwrap();
        let (m, map) = minimize_with_map(&d);
        assert_eq!(m.num_states(), 2);
        assert_eq!(map, vec![Some(0), Some(1), Some(1), None]);
    }

    #[test]
    fn canonical_names_follow_bfs() {
        // start at state 2 to make sure renumbering happens
        let d = Dfa::from_fn(3, &['a'], 2, |s| s == 0, |s, _| (s + 1) % 3).unwrap();
        let m = minimize(&d);
        assert_eq!(m.start(), 0);
        assert_eq!(m.state_names(), &["q0", "q1", "q2"]);
        // 2 -> 0 -> 1, so q1 is the old state 0 (accepting)
        assert!(m.is_accepting(1));
    }
}
