//! The uniqueness certificate κ(β)e^γ < 1, the geometric tail bound on the
//! expected boundary gap, and quenched decay experiments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::{Caps, Completeness};
use crate::disorder::{beta_star, mean_kappa, sample_disorder, DisorderSpec, NormDistribution};
use crate::error::{Error, Result};
use crate::gibbs::{boundary_gap, BoundaryStrategy, GapMode, Instance, SpinModel};
use crate::graph::{enumerate_simple_paths, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Certified,
    OutsideRegime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessCertificate {
    pub gamma: f64,
    pub distribution: NormDistribution,
    pub beta: f64,
    pub kappa: f64,
    /// κ(β)e^γ
    pub product: f64,
    /// None when κ never reaches e^{−γ} (degenerate zero law).
    pub beta_star: Option<f64>,
    /// (N_k, (κe^γ)^{N_k} / (1 − κe^γ)); empty outside the regime.
    pub tail_bounds: Vec<(usize, f64)>,
    pub verdict: Regime,
}

fn tail_bound(product: f64, n: usize) -> f64 {
    product.powi(n as i32) / (1.0 - product)
}

pub fn certificate(gamma: f64, d: &NormDistribution, beta: f64, radii: &[usize]) -> Result<UniquenessCertificate> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma = {gamma} must be finite and nonnegative"
        )));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    let kappa = mean_kappa(d, beta)?;
    let product = kappa * gamma.exp();
    let beta_star = match beta_star(d, gamma, 1e-12) {
        Ok(b) => Some(b.beta),
        Err(Error::TargetUnreachable { .. }) => None,
        Err(e) => return Err(e),
    };
    let verdict = if product < 1.0 {
        Regime::Certified
    } else {
        Regime::OutsideRegime
    };
    let tail_bounds = match verdict {
        Regime::Certified => radii.iter().map(|&n| (n, tail_bound(product, n))).collect(),
        Regime::OutsideRegime => Vec::new(),
    };
    Ok(UniquenessCertificate {
        gamma,
        distribution: *d,
        beta,
        kappa,
        product,
        beta_star,
        tail_bounds,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapBound {
    pub n_k: usize,
    /// Σ over simple paths z → ∂⁻V_{N_k}(z) of κ^{length}; None if the
    /// enumeration was truncated.
    pub bound_a: Option<f64>,
    /// (κe^γ)^{N_k} / (1 − κe^γ); None outside the regime.
    pub bound_b: Option<f64>,
    /// Number of those paths by length.
    pub paths_by_length: BTreeMap<usize, u64>,
    pub completeness: Completeness,
    /// Every length class has at most e^{γN} paths.
    pub counting_certified: bool,
    /// a ≤ b, checked when counting is certified and both bounds exist.
    pub a_within_b: Option<bool>,
}

/// Bounds on E[Y_k] for the ball of radius N_k around `x`.
pub fn expected_gap_bound(
    g: &Graph,
    x: usize,
    n_k: usize,
    gamma: f64,
    d: &NormDistribution,
    beta: f64,
    caps: &Caps,
) -> Result<GapBound> {
    let kappa = mean_kappa(d, beta)?;
    let product = kappa * gamma.exp();
    let ball = g.ball_vertices(x, n_k)?;
    let vol = g.boundaries(&ball)?;
    let mut by_length: BTreeMap<usize, u64> = BTreeMap::new();
    let completeness = if vol.is_interior(x) {
        enumerate_simple_paths(g, &ball, x, &vol.inner, ball.len(), caps, |p| {
            *by_length.entry(p.len() - 1).or_insert(0) += 1;
        })?
    } else {
        // Either x ∈ ∂⁻V (N_k = 0: the trivial path) or ∂⁻V is empty.
        if vol.inner.binary_search(&x).is_ok() {
            by_length.insert(0, 1);
        }
        Completeness::Complete
    };
    let bound_a = completeness
        .is_complete()
        .then(|| by_length.iter().map(|(&n, &c)| c as f64 * kappa.powi(n as i32)).sum());
    let bound_b = (product < 1.0).then(|| tail_bound(product, n_k));
    let counting_certified =
        completeness.is_complete() && by_length.iter().all(|(&n, &c)| c as f64 <= (gamma * n as f64).exp());
    let a_within_b = match (bound_a, bound_b, counting_certified) {
        (Some(a), Some(b), true) => Some(a <= b * (1.0 + 1e-12)),
        _ => None,
    };
    Ok(GapBound {
        n_k,
        bound_a,
        bound_b,
        paths_by_length: by_length,
        completeness,
        counting_certified,
        a_within_b,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n_k: usize,
    pub mean: f64,
    pub se: f64,
    pub bound_a: Option<f64>,
    pub bound_b: Option<f64>,
    pub mode: GapMode,
    pub samples: usize,
    pub seed: u64,
    /// mean ≤ bound_a + 3·se
    pub within_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub z: usize,
    pub beta: f64,
    pub disorder: DisorderSpec,
    pub rows: Vec<DecayRow>,
    /// Radii skipped because the exact sums exceed the caps.
    pub dropped: Vec<(usize, String)>,
}

impl DecayTable {
    /// Every row has a bound (a) and respects it.
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound == Some(true))
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].mean < w[0].mean)
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        let mut s = String::from("N_k,mean,se,bound_a,bound_b,mode,samples,seed\n");
        for r in &self.rows {
            let mode = match r.mode {
                GapMode::Exhaustive => "exhaustive",
                GapMode::LowerBound => "lower-bound",
            };
            writeln!(
                s,
                "{},{:e},{:e},{},{},{},{},{}",
                r.n_k,
                r.mean,
                r.se,
                opt(r.bound_a),
                opt(r.bound_b),
                mode,
                r.samples,
                r.seed
            )
            .expect("writing to a String");
        }
        s
    }
}

/// Seeds of the individual disorder draws of an experiment.
pub fn sample_seeds(seed: u64, samples: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| rng.random::<u64>()).collect()
}

#[allow(clippy::too_many_arguments)]
pub fn decay_experiment(
    g: &Graph,
    z: usize,
    radii: &[usize],
    model: &SpinModel,
    disorder: &DisorderSpec,
    beta: f64,
    gamma: f64,
    samples: usize,
    strategy: BoundaryStrategy,
    caps: &Caps,
) -> Result<DecayTable> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    let mut volumes = Vec::new();
    let mut dropped = Vec::new();
    for &r in radii {
        let ball = g.ball_vertices(z, r)?;
        let required = (model.q() as u128).checked_pow(ball.len() as u32).unwrap_or(u128::MAX);
        if required > u128::from(caps.max_items) {
            dropped.push((
                r,
                format!("{required} configurations exceed the cap {}", caps.max_items),
            ));
            continue;
        }
        volumes.push((r, g.boundaries(&ball)?));
    }

    let seeds = sample_seeds(disorder.seed, samples);
    // gaps[s][k]: sample s, k-th kept radius.
    let gaps: Vec<Vec<(f64, GapMode)>> = seeds
        .par_iter()
        .map(|&s| {
            let w = sample_disorder(g, &DisorderSpec { seed: s, ..*disorder });
            volumes
                .iter()
                .map(|(_, vol)| {
                    let inst = Instance {
                        graph: g,
                        volume: vol,
                        model,
                        disorder: &w,
                        beta,
                    };
                    boundary_gap(&inst, z, strategy, caps).map(|r| (r.gap, r.mode))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (k, (r, _)) in volumes.iter().enumerate() {
        let ys: Vec<f64> = gaps.iter().map(|row| row[k].0).collect();
        let mode = if gaps.iter().all(|row| row[k].1 == GapMode::Exhaustive) {
            GapMode::Exhaustive
        } else {
            GapMode::LowerBound
        };
        let n = ys.len() as f64;
        let mean = ys.iter().sum::<f64>() / n;
        let se = if ys.len() > 1 {
            (ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() / n.sqrt()
        } else {
            0.0
        };
        let bound = expected_gap_bound(g, z, *r, gamma, &disorder.distribution, beta, caps)?;
        rows.push(DecayRow {
            n_k: *r,
            mean,
            se,
            bound_a: bound.bound_a,
            bound_b: bound.bound_b,
            mode,
            samples,
            seed: disorder.seed,
            within_bound: bound.bound_a.map(|a| mean <= a + 3.0 * se + 1e-15),
        });
    }
    Ok(DecayTable {
        z,
        beta,
        disorder: *disorder,
        rows,
        dropped,
    })
}
