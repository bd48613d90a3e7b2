//! Graph utilities over adjacency lists indexed `0..n`.

use fixedbitset::FixedBitSet;

/// Strongly connected components of the subgraph induced by `allowed`
/// (all nodes when `None`), in reverse topological order.
pub fn tarjan_scc(adj: &[Vec<usize>], allowed: Option<&FixedBitSet>) -> Vec<Vec<usize>> {
    let n = adj.len();
    let ok = |v: usize| allowed.is_none_or(|a| a.contains(v));
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = FixedBitSet::with_capacity(n);
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN || !ok(root) {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack.insert(root);
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if !ok(w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack.insert(w);
                    call.push((w, 0));
                } else if on_stack.contains(w) {
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
                    let w = stack.pop().expect("tarjan stack");
                    on_stack.set(w, false);
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Nodes reachable from `roots` inside `allowed`.
pub fn reachable(adj: &[Vec<usize>], roots: &[usize], allowed: Option<&FixedBitSet>) -> FixedBitSet {
    let ok = |v: usize| allowed.is_none_or(|a| a.contains(v));
    let mut seen = FixedBitSet::with_capacity(adj.len());
    let mut todo: Vec<usize> = roots.iter().copied().filter(|&r| ok(r)).collect();
    for &r in &todo {
        seen.insert(r);
    }
    while let Some(v) = todo.pop() {
        for &w in &adj[v] {
            if ok(w) && !seen.contains(w) {
                seen.insert(w);
                todo.push(w);
            }
        }
    }
    seen
}

fn is_cyclic(adj: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || adj[comp[0]].contains(&comp[0])
}

/// Nodes that lie on some cycle of the subgraph induced by `allowed`.
pub fn cyclic_states(adj: &[Vec<usize>], allowed: Option<&FixedBitSet>) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(adj.len());
    for comp in tarjan_scc(adj, allowed) {
        if is_cyclic(adj, &comp) {
            out.extend(comp);
        }
    }
    out
}

/// Whether a cycle inside `allowed` is reachable from `roots` (moving only
/// through `allowed`).
pub fn cycle_reachable(adj: &[Vec<usize>], roots: &[usize], allowed: Option<&FixedBitSet>) -> bool {
    let reach = reachable(adj, roots, allowed);
    !cyclic_states(adj, Some(&reach)).is_clear()
}

/// Generalized Büchi check: is there a cycle reachable from `roots` within
/// `allowed` that visits every set in `fair`?
pub fn fair_scc_exists(
    adj: &[Vec<usize>],
    roots: &[usize],
    allowed: Option<&FixedBitSet>,
    fair: &[FixedBitSet],
) -> bool {
    let reach = reachable(adj, roots, allowed);
    tarjan_scc(adj, Some(&reach)).iter().any(|comp| {
        is_cyclic(adj, comp) && fair.iter().all(|set| comp.iter().any(|&v| set.contains(v)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, items: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        s.extend(items.iter().copied());
        s
    }

    #[test]
    fn scc_of_two_cycles() {
        // 0 -> 1 <-> 2, 0 -> 3 -> 3
        let adj = vec![vec![1, 3], vec![2], vec![1], vec![3]];
        let mut comps = tarjan_scc(&adj, None);
        comps.sort();
        assert_eq!(comps, vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(cyclic_states(&adj, None).ones().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn restricted_subgraph() {
        let adj = vec![vec![1, 3], vec![2], vec![1], vec![3]];
        assert!(!cycle_reachable(&adj, &[0], Some(&set(4, &[0, 2]))));
        assert!(cycle_reachable(&adj, &[0], Some(&set(4, &[0, 1, 2]))));
    }

    #[test]
    fn fairness() {
        let adj = vec![vec![1, 3], vec![2], vec![1], vec![3]];
        assert!(fair_scc_exists(&adj, &[0], None, &[set(4, &[1]), set(4, &[2])]));
        assert!(!fair_scc_exists(&adj, &[0], None, &[set(4, &[1]), set(4, &[3])]));
        assert!(!fair_scc_exists(&adj, &[0], None, &[set(4, &[0])]));
        assert!(fair_scc_exists(&adj, &[0], None, &[]));
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n]).collect();
        assert_eq!(tarjan_scc(&adj, None).len(), 1);
    }
}
