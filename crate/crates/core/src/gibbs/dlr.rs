//! Consistency of the local kernels π_Λ, π_Δ for Λ ⊆ Δ and their
//! properness, by exhaustive summation.
//!
//! The kernels use the untilted Hamiltonian. Events are the single-site
//! indicators {σ(v) = s} for every v ∈ Δ ∪ ∂⁺Δ and every spin s.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{BoundaryCondition, Instance, LocalSystem};
use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DlrReport {
    /// max over events A of |∫ π_Λ(A|η) π_Δ(dη|ξ) − π_Δ(A|ξ)|.
    pub max_defect: f64,
    /// max over events A depending only on sites outside Λ and over the
    /// η reached of |π_Λ(A|η) − 1_A(η)|.
    pub max_properness_defect: f64,
    pub events: usize,
    pub outer_configurations: usize,
}

/// `inst.volume` is Δ and `xi` its boundary condition; `lambda` ⊆ Δ.
pub fn dlr_consistency_check(
    inst: &Instance,
    lambda: &[usize],
    xi: &BoundaryCondition,
    caps: &Caps,
) -> Result<DlrReport> {
    let g = inst.graph;
    let delta = inst.volume;
    let q = inst.model.q();
    if let Some(&x) = lambda.iter().find(|&&x| !delta.contains(x)) {
        return Err(Error::InvalidArgument(format!("{x} is in Λ but not in Δ")));
    }
    let lam = g.boundaries(lambda)?;
    let xi_v = xi.aligned(delta, q)?;
    let sys_d = LocalSystem::new(inst, false, caps)?;
    let sys_l = LocalSystem::new(&Instance { volume: &lam, ..*inst }, false, caps)?;
    let (p_delta, _) = sys_d.probabilities(&xi_v);

    // Sites carrying events, and the spin of a full configuration there.
    let mut sites: Vec<usize> = delta.delta.iter().chain(&delta.outer).copied().collect();
    sites.sort_unstable();
    let spin_of = |c: usize, v: usize| -> usize {
        match delta.local_index(v) {
            Some(i) => sys_d.digit(c, i),
            None => xi_v[delta.outer.binary_search(&v).expect("outer site")],
        }
    };
    let events: Vec<(usize, usize)> = sites.iter().flat_map(|&v| (0..q).map(move |s| (v, s))).collect();

    // π_Δ(A|ξ).
    let mut rhs = vec![0.0; events.len()];
    for (c, &p) in p_delta.iter().enumerate() {
        for (k, &(v, s)) in events.iter().enumerate() {
            if spin_of(c, v) == s {
                rhs[k] += p;
            }
        }
    }

    // π_Λ(·|η) depends on η only through ∂⁺Λ ⊆ Δ ∪ ∂⁺Δ.
    let mut cache: HashMap<Vec<usize>, Vec<f64>> = HashMap::new();
    let mut lhs = vec![0.0; events.len()];
    let mut properness: f64 = 0.0;
    for (c, &p) in p_delta.iter().enumerate() {
        let eta_l: Vec<usize> = lam.outer.iter().map(|&y| spin_of(c, y)).collect();
        let p_lam = cache
            .entry(eta_l.clone())
            .or_insert_with(|| sys_l.probabilities(&eta_l).0);
        for (k, &(v, s)) in events.iter().enumerate() {
            // π_Λ(A|η) = Σ_{σ_Λ} π_Λ(σ_Λ|η) 1_A(σ_Λ ∨ η_{Λᶜ}).
            let val: f64 = match lam.local_index(v) {
                Some(i) => p_lam
                    .iter()
                    .enumerate()
                    .filter(|&(cl, _)| sys_l.digit(cl, i) == s)
                    .map(|(_, &pl)| pl)
                    .sum(),
                None => {
                    let ind = if spin_of(c, v) == s { 1.0 } else { 0.0 };
                    let val: f64 = p_lam.iter().map(|&pl| pl * ind).sum();
                    properness = properness.max((val - ind).abs());
                    val
                }
            };
            lhs[k] += p * val;
        }
    }
    let max_defect = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(DlrReport {
        max_defect,
        max_properness_defect: properness,
        events: events.len(),
        outer_configurations: cache.len(),
    })
}
