//! Small shared algorithms: lasso cycle detection on deterministic
//! steppers and an iterative Tarjan SCC.

use std::collections::HashMap;
use std::hash::Hash;

/// Run a deterministic step function along the ultimately periodic word
/// u v^omega and return the states that occur infinitely often, i.e. the
/// states visited during one repetition of the stabilized cycle.
///
/// The state at cycle-aligned positions (after u, after u v, ...) must
/// eventually repeat; we iterate v until it does.
pub fn lasso_inf_states<S, F>(initial: S, step: F, stem: &[u32], cycle: &[u32]) -> Vec<S>
where
    S: Clone + Eq + Hash,
    F: Fn(&S, u32) -> S,
{
    assert!(!cycle.is_empty());
    let mut state = initial;
    for &letter in stem {
        state = step(&state, letter);
    }
    let mut seen: HashMap<S, usize> = HashMap::new();
    let mut boundaries: Vec<S> = Vec::new();
    let first_repeat = loop {
        if let Some(&i) = seen.get(&state) {
            break i;
        }
        seen.insert(state.clone(), boundaries.len());
        boundaries.push(state.clone());
        for &letter in cycle {
            state = step(&state, letter);
        }
    };
    // states visited from the first repeated boundary through the loop
    let mut inf = Vec::new();
    let mut s = boundaries[first_repeat].clone();
    loop {
        for &letter in cycle {
            inf.push(s.clone());
            s = step(&s, letter);
        }
        if s == boundaries[first_repeat] {
            break;
        }
    }
    inf
}

/// Strongly connected components of a directed graph in adjacency-list
/// form. Components are returned in reverse topological order.
pub fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut next_index = 0usize;

    // iterative DFS: (node, next child position)
    let mut call_stack: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        call_stack.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut child)) = call_stack.last_mut() {
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call_stack.pop();
                if let Some(&(parent, _)) = call_stack.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    components.push(component);
                }
            }
        }
    }
    components
}
