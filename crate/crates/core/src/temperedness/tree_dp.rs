//! Exact maximum-average connected subtree with a size floor.
//!
//! For every vertex v (as the topmost vertex of the subtree when the tree is
//! rooted at local vertex 0) and every size s, `best[v][s]` is the largest
//! total weight of a connected subtree of size s containing v inside v's
//! subtree. Children are merged one at a time as in a knapsack, and the
//! split chosen at each merge is recorded for reconstruction.

use crate::graph::Graph;

pub(crate) struct BestSubtree {
    pub average: f64,
    /// Local vertex ids.
    pub vertices: Vec<usize>,
}

/// `tree` must be a tree on `0..n` with `n >= min_size >= 1`.
pub(crate) fn best_subtree_average(tree: &Graph, weights: &[f64], min_size: usize) -> BestSubtree {
    let n = tree.vertex_count();
    assert!(n >= min_size && min_size >= 1);

    // Iterative DFS order from vertex 0.
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &u in tree.neighbors(v) {
            if parent[u] == usize::MAX {
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    let children: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            tree.neighbors(v)
                .iter()
                .copied()
                .filter(|&u| u != 0 && parent[u] == v)
                .collect()
        })
        .collect();

    let mut best: Vec<Vec<f64>> = vec![Vec::new(); n];
    // choice[v][k][s]: size taken from the k-th child when the partial
    // table (after merging children 0..=k) is at size s.
    let mut choice: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];

    for &v in order.iter().rev() {
        let mut cur = vec![f64::NEG_INFINITY, weights[v]];
        for &c in &children[v] {
            let child = &best[c];
            let mut next = vec![f64::NEG_INFINITY; cur.len() + child.len() - 1];
            let mut pick = vec![0usize; next.len()];
            for (s, &a) in cur.iter().enumerate() {
                if a == f64::NEG_INFINITY {
                    continue;
                }
                if a > next[s] {
                    next[s] = a;
                    pick[s] = 0;
                }
                for (t, &b) in child.iter().enumerate().skip(1) {
                    let val = a + b;
                    if val > next[s + t] {
                        next[s + t] = val;
                        pick[s + t] = t;
                    }
                }
            }
            choice[v].push(pick);
            cur = next;
        }
        best[v] = cur;
    }

    let mut top = (f64::NEG_INFINITY, 0usize, 0usize);
    for (v, row) in best.iter().enumerate() {
        for (s, &total) in row.iter().enumerate().skip(min_size) {
            let avg = total / s as f64;
            if total > f64::NEG_INFINITY && avg > top.0 {
                top = (avg, v, s);
            }
        }
    }

    let mut vertices = Vec::new();
    let mut work = vec![(top.1, top.2)];
    while let Some((v, mut s)) = work.pop() {
        vertices.push(v);
        for k in (0..children[v].len()).rev() {
            let t = choice[v][k][s];
            if t > 0 {
                work.push((children[v][k], t));
                s -= t;
            }
        }
        debug_assert_eq!(s, 1);
    }
    vertices.sort_unstable();
    BestSubtree {
        average: top.0,
        vertices,
    }
}
