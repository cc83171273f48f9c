use super::{Dfa, StateId};

/// Strongly connected components of the transition graph (Tarjan, iterative).
/// Each component is sorted; components come out in reverse topological order.
pub fn strongly_connected_components(dfa: &Dfa) -> Vec<Vec<StateId>> {
    let n = dfa.num_states();
    let k = dfa.alphabet().len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (state, next letter to explore)
        let mut call = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < k {
                let w = dfa.step(v, *next);
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Bottom SCCs: components with no edge leaving them. Sorted by smallest
/// member.
pub fn closed_sccs(dfa: &Dfa) -> Vec<Vec<StateId>> {
    let comps = strongly_connected_components(dfa);
    let mut comp_of = vec![0; dfa.num_states()];
    for (i, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = i;
        }
    }
    let mut closed: Vec<Vec<StateId>> = comps
        .iter()
        .enumerate()
        .filter(|(i, c)| c.iter().all(|&s| dfa.row(s).iter().all(|&t| comp_of[t] == *i)))
        .map(|(_, c)| c.clone())
        .collect();
    closed.sort();
    closed
}
