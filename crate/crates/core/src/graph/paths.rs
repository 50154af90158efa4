use serde::{Deserialize, Serialize};

use super::{Enumerated, Graph};
use crate::caps::{Caps, Completeness};
use crate::error::{Error, Result};

/// A self-avoiding vertex sequence x_0, …, x_n with consecutive vertices
/// adjacent. Its length ‖ϑ‖ is n, the number of steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplePath {
    pub vertices: Vec<usize>,
}

impl SimplePath {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn origin(&self) -> usize {
        self.vertices[0]
    }

    pub fn terminus(&self) -> usize {
        *self.vertices.last().expect("nonempty path")
    }

    /// υ_ϑ(x): how many times the path leaves x. Every vertex but the
    /// terminus is left exactly once.
    pub fn leave_count(&self, x: usize) -> usize {
        let n = self.vertices.len();
        self.vertices[..n.saturating_sub(1)].iter().filter(|&&v| v == x).count()
    }

    /// Consecutive pairs, oriented along the path.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Checks adjacency of consecutive vertices and that no vertex repeats.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        if self.vertices.is_empty() || self.vertices.iter().any(|&v| !g.contains(v)) {
            return false;
        }
        let mut seen = g.mask(&[]);
        for &v in &self.vertices {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        self.steps().all(|(u, v)| g.has_edge(u, v))
    }
}

/// Depth-first walk over every simple path of length 1..=`max_len` that
/// starts at `origin` and stays inside `domain` (a membership mask).
///
/// Neighbors are visited in increasing order, so paths are reported in
/// lexicographic order of their vertex sequences. Each reported path counts
/// against the caps. The callback receives the vertex sequence.
pub fn walk_simple_paths<F>(
    g: &Graph,
    domain: &[bool],
    origin: usize,
    max_len: usize,
    caps: &Caps,
    mut visit: F,
) -> Completeness
where
    F: FnMut(&[usize]),
{
    let mut budget = caps.budget();
    let mut on_path = vec![false; g.vertex_count()];
    let mut stack = vec![origin];
    on_path[origin] = true;
    // Explicit DFS: cursor[i] is the next neighbor index to try at depth i.
    let mut cursor = vec![0usize];
    while let Some(&top) = stack.last() {
        let depth = stack.len() - 1;
        let nbrs = g.neighbors(top);
        let mut advanced = false;
        if depth < max_len {
            while cursor[depth] < nbrs.len() {
                let next = nbrs[cursor[depth]];
                cursor[depth] += 1;
                if !domain[next] || on_path[next] {
                    continue;
                }
                if !budget.admit() {
                    return budget.completeness();
                }
                stack.push(next);
                on_path[next] = true;
                cursor.push(0);
                visit(&stack);
                advanced = true;
                break;
            }
        }
        if !advanced {
            on_path[top] = false;
            stack.pop();
            cursor.pop();
        }
    }
    budget.completeness()
}

/// Streams every simple path inside the subgraph induced on `domain` from
/// `origin` to any vertex of `targets`, of length at most `max_len`.
///
/// Paths may pass through other targets on the way. A target equal to the
/// origin contributes nothing: cycles are excluded.
pub fn enumerate_simple_paths<F>(
    g: &Graph,
    domain: &[usize],
    origin: usize,
    targets: &[usize],
    max_len: usize,
    caps: &Caps,
    mut visit: F,
) -> Result<Completeness>
where
    F: FnMut(&[usize]),
{
    g.check_vertex(origin)?;
    let mask = g.mask(domain);
    if !mask[origin] {
        return Err(Error::InvalidArgument(format!("origin {origin} is not in the domain")));
    }
    let target_mask = g.mask(targets);
    if let Some(&t) = targets.iter().find(|&&t| t >= g.vertex_count() || !mask[t]) {
        return Err(Error::InvalidArgument(format!("target {t} is not in the domain")));
    }
    Ok(walk_simple_paths(g, &mask, origin, max_len, caps, |p| {
        if target_mask[*p.last().expect("nonempty")] {
            visit(p);
        }
    }))
}

/// Collecting form of [`enumerate_simple_paths`].
pub fn simple_paths(
    g: &Graph,
    domain: &[usize],
    origin: usize,
    targets: &[usize],
    max_len: usize,
    caps: &Caps,
) -> Result<Enumerated<SimplePath>> {
    let mut items = Vec::new();
    let completeness = enumerate_simple_paths(g, domain, origin, targets, max_len, caps, |p| {
        items.push(SimplePath { vertices: p.to_vec() })
    })?;
    Ok(Enumerated { items, completeness })
}
