//! Path sums Q^β_Δ(z, x) over simple paths from z to the inner boundary.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::caps::{Caps, Completeness};
use crate::disorder::DisorderSample;
use crate::error::{Error, Result};
use crate::graph::{enumerate_simple_paths, Graph, Volume};

/// The simple paths inside Δ from an interior vertex z to ∂⁻Δ, stored as
/// edge-id lists so the same family can be weighted by many disorder draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathFamily {
    pub z: usize,
    pub inner: Vec<usize>,
    /// (terminus, edge ids along the path)
    pub paths: Vec<(usize, Vec<usize>)>,
    pub completeness: Completeness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QValues {
    /// Q(z, x) for every x ∈ ∂⁻Δ.
    pub per_target: BTreeMap<usize, f64>,
    pub total: f64,
    pub paths: usize,
    /// When truncated, every value is a lower bound.
    pub completeness: Completeness,
}

pub(crate) fn check_interior(vol: &Volume, z: usize) -> Result<()> {
    if vol.interior.is_empty() {
        return Err(Error::EmptyInterior);
    }
    if !vol.is_interior(z) {
        return Err(Error::NotInterior(z));
    }
    Ok(())
}

pub fn path_family(g: &Graph, vol: &Volume, z: usize, caps: &Caps) -> Result<PathFamily> {
    check_interior(vol, z)?;
    let mut paths = Vec::new();
    let completeness = enumerate_simple_paths(g, &vol.delta, z, &vol.inner, vol.len(), caps, |p| {
        let edges = p
            .windows(2)
            .map(|w| g.edge_id(w[0], w[1]).expect("path edge"))
            .collect();
        paths.push((*p.last().expect("nonempty"), edges));
    })?;
    Ok(PathFamily {
        z,
        inner: vol.inner.clone(),
        paths,
        completeness,
    })
}

impl PathFamily {
    /// Q values for per-edge weights κ (indexed by edge id).
    pub fn q(&self, kappas: &[f64]) -> QValues {
        let mut per_target: BTreeMap<usize, f64> = self.inner.iter().map(|&x| (x, 0.0)).collect();
        for (x, edges) in &self.paths {
            let w: f64 = edges.iter().map(|&e| kappas[e]).product();
            *per_target.get_mut(x).expect("terminus on inner boundary") += w;
        }
        QValues {
            total: per_target.values().sum(),
            per_target,
            paths: self.paths.len(),
            completeness: self.completeness,
        }
    }
}

/// Q^β_Δ(z, x) for all x ∈ ∂⁻Δ with κ_uv = e^{4β‖W_uv‖} − 1.
pub fn compute_q(g: &Graph, vol: &Volume, z: usize, beta: f64, w: &DisorderSample, caps: &Caps) -> Result<QValues> {
    if w.norms.len() != g.edge_count() {
        return Err(Error::InvalidArgument("disorder does not match the graph".into()));
    }
    Ok(path_family(g, vol, z, caps)?.q(&w.kappas(beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disorder::edge_kappa;

    #[test]
    fn p5_single_paths() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let vol = g.boundaries(&[1, 2, 3]).unwrap();
        let w = DisorderSample::from_norms(vec![0.1, 0.2, 0.3, 0.4]);
        let q = compute_q(&g, &vol, 2, 0.5, &w, &Caps::default()).unwrap();
        assert_eq!(q.per_target[&1], edge_kappa(0.2, 0.5));
        assert_eq!(q.per_target[&3], edge_kappa(0.3, 0.5));
        assert_eq!(q.paths, 2);
        let zero = compute_q(&g, &vol, 2, 0.0, &w, &Caps::default()).unwrap();
        assert_eq!(zero.total, 0.0);
    }

    #[test]
    fn triangle_paths() {
        // Triangle 0-1-2 inside Δ; 1 and 2 see the outside, 0 does not.
        let g = Graph::from_edges(&[(0, 1), (1, 2), (0, 2), (1, 3), (2, 4)]).unwrap();
        let vol = g.boundaries(&[0, 1, 2]).unwrap();
        let w = DisorderSample::from_norms(vec![0.25; 5]);
        let c = edge_kappa(0.25, 0.3);
        let q = compute_q(&g, &vol, 0, 0.3, &w, &Caps::default()).unwrap();
        for x in [1, 2] {
            assert!((q.per_target[&x] - (c + c * c)).abs() < 1e-15);
        }
    }

    #[test]
    fn requires_interior() {
        let g = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        let vol = g.boundaries(&[0, 1]).unwrap();
        assert_eq!(path_family(&g, &vol, 1, &Caps::default()), Err(Error::NotInterior(1)));
        let vol = g.boundaries(&[1]).unwrap();
        assert_eq!(path_family(&g, &vol, 1, &Caps::default()), Err(Error::EmptyInterior));
    }
}
