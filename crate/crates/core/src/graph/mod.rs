//! Finite simple graphs, graph distance, balls, vertex boundaries, and the
//! enumeration engines for simple paths and animals.

mod animals;
mod paths;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use animals::UnionFind;
pub use animals::{animals, count_connected_spanning_subgraphs, enumerate_animals, enumerate_connected_sets, Animal};
pub use paths::{enumerate_simple_paths, simple_paths, walk_simple_paths, SimplePath};

/// Output of a capped enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Enumerated<T> {
    pub items: Vec<T>,
    pub completeness: crate::caps::Completeness,
}

/// A finite simple undirected graph on the dense vertex ids `0..n`.
///
/// Neighbor lists are strictly sorted, so there are no multi-edges, and no
/// vertex is its own neighbor. Every edge carries a stable id: its index in
/// the sorted list of `(u, v)` pairs with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    adjacent_edges: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    connected: bool,
}

impl Graph {
    /// Builds the canonical graph from a list of vertex pairs. The vertex
    /// count is one more than the largest id mentioned.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Graph> {
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Graph::with_vertices(n, edges)
    }

    /// Like [`Graph::from_edges`] but with an explicit vertex count, so that
    /// isolated vertices can exist.
    pub fn with_vertices(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut canonical = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Loop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, len: n });
                }
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        canonical.dedup();

        let mut adjacency = vec![Vec::new(); n];
        let mut adjacent_edges = vec![Vec::new(); n];
        for (id, &(u, v)) in canonical.iter().enumerate() {
            adjacency[u].push(v);
            adjacent_edges[u].push(id);
            adjacency[v].push(u);
            adjacent_edges[v].push(id);
        }
        // Sort neighbor lists, keeping edge ids aligned.
        for (nbrs, ids) in adjacency.iter_mut().zip(adjacent_edges.iter_mut()) {
            let mut pairs: Vec<(usize, usize)> = nbrs.iter().copied().zip(ids.iter().copied()).collect();
            pairs.sort_unstable();
            *nbrs = pairs.iter().map(|p| p.0).collect();
            *ids = pairs.iter().map(|p| p.1).collect();
        }

        let mut g = Graph {
            adjacency,
            adjacent_edges,
            edges: canonical,
            connected: false,
        };
        g.connected = g.compute_connected();
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, sorted, each pair with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    /// Edge ids aligned with [`Graph::neighbors`].
    pub fn incident_edges(&self, x: usize) -> &[usize] {
        &self.adjacent_edges[x]
    }

    /// n(x).
    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.vertex_count()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.edge_id(x, y).is_some()
    }

    pub fn edge_id(&self, x: usize, y: usize) -> Option<usize> {
        let nbrs = self.adjacency.get(x)?;
        nbrs.binary_search(&y).ok().map(|i| self.adjacent_edges[x][i])
    }

    pub(crate) fn check_vertex(&self, x: usize) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: x,
                len: self.vertex_count(),
            })
        }
    }

    fn compute_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        self.bfs(0).iter().all(Option::is_some)
    }

    /// Breadth-first distances from `x`; `None` for unreachable vertices.
    pub fn bfs(&self, x: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[x] = Some(0);
        queue.push_back(x);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Graph distance ρ(x, y).
    pub fn distance(&self, x: usize, y: usize) -> Result<usize> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        self.bfs(x)[y].ok_or(Error::Unreachable { from: x, to: y })
    }

    /// V_r(x), sorted.
    pub fn ball_vertices(&self, x: usize, r: usize) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        Ok(self
            .bfs(x)
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.filter(|&d| d <= r).map(|_| v))
            .collect())
    }

    /// G_r(x): all vertices within distance r and all host edges between them.
    pub fn ball(&self, x: usize, r: usize) -> Result<InducedSubgraph> {
        let vertices = self.ball_vertices(x, r)?;
        Ok(self.induced(&vertices))
    }

    /// Induced subgraph on a vertex set (host ids are kept).
    pub fn induced(&self, vertices: &[usize]) -> InducedSubgraph {
        let mut vertices = vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let mask = self.mask(&vertices);
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| mask[u] && mask[v])
            .collect();
        InducedSubgraph { vertices, edges }
    }

    /// Membership mask for a vertex set.
    pub fn mask(&self, vertices: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count()];
        for &v in vertices {
            if v < mask.len() {
                mask[v] = true;
            }
        }
        mask
    }

    /// Inner and outer vertex boundaries of a finite vertex set.
    pub fn boundaries(&self, delta: &[usize]) -> Result<Volume> {
        if delta.is_empty() {
            return Err(Error::InvalidArgument("volume must be nonempty".into()));
        }
        for &x in delta {
            self.check_vertex(x)?;
        }
        let mut delta = delta.to_vec();
        delta.sort_unstable();
        delta.dedup();
        let inside = self.mask(&delta);

        let mut inner = Vec::new();
        let mut outer_mask = vec![false; self.vertex_count()];
        for &x in &delta {
            let mut touches_outside = false;
            for &y in &self.adjacency[x] {
                if !inside[y] {
                    touches_outside = true;
                    outer_mask[y] = true;
                }
            }
            if touches_outside {
                inner.push(x);
            }
        }
        let outer: Vec<usize> = (0..self.vertex_count()).filter(|&y| outer_mask[y]).collect();
        let interior = delta
            .iter()
            .copied()
            .filter(|x| inner.binary_search(x).is_err())
            .collect();
        Ok(Volume {
            delta,
            inner,
            outer,
            interior,
        })
    }
}

/// An induced subgraph that keeps host vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedSubgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl InducedSubgraph {
    /// Relabels to a standalone [`Graph`] on `0..len`; local id `i` is host
    /// vertex `self.vertices[i]`.
    pub fn to_graph(&self) -> Graph {
        let local = |v: usize| self.vertices.binary_search(&v).expect("edge endpoint in subgraph");
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (local(u), local(v))).collect();
        Graph::with_vertices(self.vertices.len(), &edges).expect("induced subgraph is simple")
    }

    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty() && self.edges.len() + 1 == self.vertices.len() && self.to_graph().is_connected()
    }
}

/// A finite volume Δ with its vertex boundaries.
///
/// `inner` is ∂⁻Δ (vertices of Δ with a neighbor outside), `outer` is ∂⁺Δ
/// (vertices outside Δ with a neighbor inside), `interior` is Δ ∖ ∂⁻Δ.
/// All lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Volume {
    pub delta: Vec<usize>,
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    pub interior: Vec<usize>,
}

impl Volume {
    pub fn contains(&self, x: usize) -> bool {
        self.delta.binary_search(&x).is_ok()
    }

    pub fn is_interior(&self, x: usize) -> bool {
        self.interior.binary_search(&x).is_ok()
    }

    /// Δ is a union of components of the host: nothing couples it to the
    /// outside.
    pub fn is_closed(&self) -> bool {
        self.outer.is_empty()
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// Position of a vertex of Δ in `delta`.
    pub fn local_index(&self, x: usize) -> Option<usize> {
        self.delta.binary_search(&x).ok()
    }
}
