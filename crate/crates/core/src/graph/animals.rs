use serde::{Deserialize, Serialize};

use super::{Enumerated, Graph};
use crate::caps::{Budget, Caps, Completeness};
use crate::error::{Error, Result};

/// A finite connected subgraph of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Animal {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Animal {
    /// The animal spanned by a vertex set together with all host edges
    /// between its vertices.
    pub fn induced(g: &Graph, vertices: &[usize]) -> Animal {
        let sub = g.induced(vertices);
        Animal {
            vertices: sub.vertices,
            edges: sub.edges,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Nonempty, edges are host edges between its own vertices, and the
    /// edge set connects the vertex set.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        if self.vertices.is_empty() || self.vertices.iter().any(|&v| !g.contains(v)) {
            return false;
        }
        let mask = g.mask(&self.vertices);
        if !self
            .edges
            .iter()
            .all(|&(u, v)| g.contains(u) && g.contains(v) && mask[u] && mask[v] && g.has_edge(u, v))
        {
            return false;
        }
        let local = |x: usize| self.vertices.binary_search(&x).ok();
        let mut uf = UnionFind::new(self.vertices.len());
        for &(u, v) in &self.edges {
            match (local(u), local(v)) {
                (Some(a), Some(b)) => uf.union(a, b),
                _ => return false,
            }
        }
        uf.components == 1
    }
}

/// Streams every connected vertex set `A ⊆ host` with
/// `min_vertices <= |A| <= max_vertices`, each exactly once, as a sorted
/// vertex list.
///
/// Uses the ESU extension-set scheme: sets are grouped by their smallest
/// vertex (ascending) and grown only through vertices larger than it that
/// are not yet adjacent to the current set, which makes every connected set
/// reachable along exactly one branch. The order is deterministic.
pub fn enumerate_connected_sets<F>(
    g: &Graph,
    host: &[usize],
    min_vertices: usize,
    max_vertices: usize,
    caps: &Caps,
    mut visit: F,
) -> Result<Completeness>
where
    F: FnMut(&[usize]),
{
    if min_vertices == 0 {
        return Err(Error::InvalidArgument("min_vertices must be at least 1".into()));
    }
    for &v in host {
        g.check_vertex(v)?;
    }
    let mut budget = caps.budget();
    if min_vertices > max_vertices {
        return Ok(budget.completeness());
    }
    let mut state = Esu {
        g,
        in_host: g.mask(host),
        in_set: vec![false; g.vertex_count()],
        // Number of set members adjacent to each vertex.
        touching: vec![0; g.vertex_count()],
        set: Vec::with_capacity(max_vertices),
        sorted: Vec::with_capacity(max_vertices),
        min_vertices,
        max_vertices,
    };
    let mut roots: Vec<usize> = host.to_vec();
    roots.sort_unstable();
    roots.dedup();
    for root in roots {
        state.add(root);
        let ext: Vec<usize> = g
            .neighbors(root)
            .iter()
            .copied()
            .filter(|&u| u > root && state.in_host[u])
            .collect();
        state.extend(root, ext, &mut budget, &mut visit);
        state.remove(root);
        if budget.is_stopped() {
            break;
        }
    }
    Ok(budget.completeness())
}

struct Esu<'a> {
    g: &'a Graph,
    in_host: Vec<bool>,
    in_set: Vec<bool>,
    touching: Vec<usize>,
    set: Vec<usize>,
    sorted: Vec<usize>,
    min_vertices: usize,
    max_vertices: usize,
}

impl Esu<'_> {
    fn add(&mut self, v: usize) {
        self.in_set[v] = true;
        self.set.push(v);
        for &u in self.g.neighbors(v) {
            self.touching[u] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.in_set[v] = false;
        self.set.pop();
        for &u in self.g.neighbors(v) {
            self.touching[u] -= 1;
        }
    }

    fn extend<F: FnMut(&[usize])>(&mut self, root: usize, mut ext: Vec<usize>, budget: &mut Budget, visit: &mut F) {
        if self.set.len() >= self.min_vertices {
            if !budget.admit() {
                return;
            }
            self.sorted.clear();
            self.sorted.extend_from_slice(&self.set);
            self.sorted.sort_unstable();
            visit(&self.sorted);
        }
        if self.set.len() == self.max_vertices {
            return;
        }
        // Take extension vertices smallest first.
        ext.sort_unstable_by(|a, b| b.cmp(a));
        while let Some(w) = ext.pop() {
            // Exclusive neighborhood of w: outside the set and not adjacent
            // to any member (checked before w joins).
            let mut next = ext.clone();
            for &u in self.g.neighbors(w) {
                if u > root && self.in_host[u] && !self.in_set[u] && self.touching[u] == 0 {
                    next.push(u);
                }
            }
            self.add(w);
            self.extend(root, next, budget, visit);
            self.remove(w);
            if budget.is_stopped() {
                return;
            }
        }
    }
}

/// Streams every animal with vertex count in range inside `host`, using the
/// induced-edge convention: one animal per connected vertex set.
pub fn enumerate_animals<F>(
    g: &Graph,
    host: &[usize],
    min_vertices: usize,
    max_vertices: usize,
    caps: &Caps,
    mut visit: F,
) -> Result<Completeness>
where
    F: FnMut(Animal),
{
    enumerate_connected_sets(g, host, min_vertices, max_vertices, caps, |vs| {
        visit(Animal::induced(g, vs))
    })
}

/// Collecting form of [`enumerate_animals`].
pub fn animals(
    g: &Graph,
    host: &[usize],
    min_vertices: usize,
    max_vertices: usize,
    caps: &Caps,
) -> Result<Enumerated<Animal>> {
    let mut items = Vec::new();
    let completeness = enumerate_animals(g, host, min_vertices, max_vertices, caps, |a| items.push(a))?;
    Ok(Enumerated { items, completeness })
}

/// Number of edge subsets of the induced subgraph on `vertices` that connect
/// all of `vertices`, i.e. the number of distinct animals (in the general
/// vertex-and-edge sense) with exactly this vertex set.
pub fn count_connected_spanning_subgraphs(g: &Graph, vertices: &[usize]) -> Result<u64> {
    const MAX_EDGES: usize = 24;
    let sub = g.induced(vertices);
    if sub.vertices.is_empty() {
        return Ok(0);
    }
    if sub.vertices.len() == 1 {
        return Ok(1);
    }
    let m = sub.edges.len();
    if m > MAX_EDGES {
        return Err(Error::CapExceeded {
            what: "spanning-subgraph count",
            required: 1u128 << m,
            cap: 1u128 << MAX_EDGES,
        });
    }
    let local = sub.to_graph();
    let edges = local.edges();
    let n = sub.vertices.len();
    let mut count = 0u64;
    for mask in 0u64..(1u64 << m) {
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        let mut uf = UnionFind::new(n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                uf.union(u, v);
            }
        }
        if uf.components == 1 {
            count += 1;
        }
    }
    Ok(count)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    pub(crate) components: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(g: &Graph, lo: usize, hi: usize) -> Vec<Vec<usize>> {
        let host: Vec<usize> = (0..g.vertex_count()).collect();
        let mut out = Vec::new();
        enumerate_connected_sets(g, &host, lo, hi, &Caps::default(), |s| out.push(s.to_vec())).unwrap();
        out
    }

    #[test]
    fn p3_pairs() {
        let g = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(sets(&g, 2, 2), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn singletons() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(sets(&g, 1, 1).len(), 4);
    }

    #[test]
    fn triangle_whole() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = sets(&g, 3, 3);
        assert_eq!(s, vec![vec![0, 1, 2]]);
        let a = Animal::induced(&g, &s[0]);
        assert_eq!(a.edges.len(), 3);
        assert!(a.is_valid_in(&g));
    }

    #[test]
    fn zero_min_rejected() {
        let g = Graph::from_edges(&[(0, 1)]).unwrap();
        assert!(enumerate_connected_sets(&g, &[0, 1], 0, 1, &Caps::default(), |_| {}).is_err());
    }

    #[test]
    fn spanning_counts() {
        let tri = Graph::from_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        // Three spanning trees plus the triangle itself.
        assert_eq!(count_connected_spanning_subgraphs(&tri, &[0, 1, 2]).unwrap(), 4);
        let path = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(count_connected_spanning_subgraphs(&path, &[0, 2]).unwrap(), 0);
        assert_eq!(count_connected_spanning_subgraphs(&path, &[1]).unwrap(), 1);
    }
}
