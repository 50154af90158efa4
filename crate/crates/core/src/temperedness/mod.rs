//! Animal averages of g(n(x)) and windowed temperedness checks.
//!
//! A graph is tempered when, around every root and for a strictly
//! increasing sequence of radii N_k, every animal inside the ball
//! G_{N_k}(x) with at least N_k + 1 vertices has average g(degree) bounded by
//! one constant γ. On a finite graph only a finite window of roots and radii
//! can be checked, so the positive verdict is "certified on window".

mod counting;
mod repulsive;
mod tree_dp;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::caps::{Caps, Completeness};
use crate::error::{Error, Result};
use crate::graph::{enumerate_connected_sets, Animal, Graph};

pub use counting::{
    count_animals_by_size, count_paths_by_length, path_family_log_majorant, randic_index, verify_counting_bounds,
    verify_separation_bound, CountFamily, CountRow, CountingReport, CountingVerdict, SeparationCheck, SizeCounts,
};
pub use repulsive::{
    check_repulsive, check_summability, select_nk, DegreeMode, NkSelection, PhiFunction, RepulsiveReport,
    RepulsiveViolation, RepulsivenessSpec, SummabilityDiagnostic, SummabilityReport,
};

/// A nonnegative nondecreasing function on [1, ∞) applied to vertex degrees.
#[derive(Clone)]
pub enum GrowthFunction {
    /// g₁(t) = log t
    Log,
    /// g₂(t) = t log t
    TLogT,
    Custom {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl GrowthFunction {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        GrowthFunction::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// Evaluates at `max(t, 1)`; the functions live on [1, ∞), and only an
    /// isolated vertex has degree 0.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(1.0);
        match self {
            GrowthFunction::Log => t.ln(),
            GrowthFunction::TLogT => t * t.ln(),
            GrowthFunction::Custom { f, .. } => f(t),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            GrowthFunction::Log => "log",
            GrowthFunction::TLogT => "t-log-t",
            GrowthFunction::Custom { name, .. } => name,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "log" | "g1" => Ok(GrowthFunction::Log),
            "t-log-t" | "tlogt" | "g2" => Ok(GrowthFunction::TLogT),
            other => Err(Error::InvalidArgument(format!(
                "unknown growth function '{other}' (expected log or t-log-t)"
            ))),
        }
    }
}

impl fmt::Debug for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrowthFunction({})", self.name())
    }
}

/// G(A; g): the mean of g(n(x)) over the vertices of `a`, with degrees taken
/// in the host graph.
pub fn animal_average(a: &Animal, g: &GrowthFunction, host: &Graph) -> f64 {
    vertex_set_average(host, &a.vertices, g)
}

pub(crate) fn vertex_set_average(host: &Graph, vertices: &[usize], g: &GrowthFunction) -> f64 {
    if vertices.is_empty() {
        return 0.0;
    }
    let total: f64 = vertices.iter().map(|&v| g.eval(host.degree(v) as f64)).sum();
    total / vertices.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    /// Knapsack over subtrees; exact when the ball is a tree.
    TreeDp,
    /// Every connected vertex set of the ball was examined.
    Exhaustive,
    /// Enumeration hit its caps; the maximum is a lower bound, improved by
    /// greedy hub growing.
    PartialWithGreedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusMax {
    pub radius: usize,
    pub ball_size: usize,
    /// `None` when the ball has fewer than `radius + 1` vertices.
    pub max_average: Option<f64>,
    pub witness: Option<Vec<usize>>,
    pub method: SearchMethod,
    pub completeness: Completeness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemperednessVerdict {
    CertifiedOnWindow,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperednessReport {
    pub root: usize,
    pub growth: String,
    pub radii: Vec<usize>,
    pub per_radius_max: Vec<Option<f64>>,
    pub per_radius: Vec<RadiusMax>,
    /// Largest per-radius maximum found (0 when every ball was too small).
    pub gamma: f64,
    pub gamma_target: Option<f64>,
    pub verdict: TemperednessVerdict,
    /// Animal with G(A; g) > gamma_target when the verdict is `Failed`.
    pub witness: Option<Animal>,
    pub witness_average: Option<f64>,
}

/// Largest G(A; g) over animals A ⊆ G_r(x) with |V(A)| ≥ r + 1.
///
/// Because G(A; g) depends on V(A) only, it suffices to range over connected
/// vertex sets. Trees are solved exactly by dynamic programming; other balls
/// by exhaustive enumeration under `caps`.
pub fn max_animal_average(g: &Graph, gf: &GrowthFunction, x: usize, r: usize, caps: &Caps) -> Result<RadiusMax> {
    let ball = g.ball(x, r)?;
    let min_size = r + 1;
    let n = ball.vertices.len();
    if n < min_size {
        return Ok(RadiusMax {
            radius: r,
            ball_size: n,
            max_average: None,
            witness: None,
            method: SearchMethod::Exhaustive,
            completeness: Completeness::Complete,
        });
    }
    if ball.is_tree() {
        let local = ball.to_graph();
        let weights: Vec<f64> = ball.vertices.iter().map(|&v| gf.eval(g.degree(v) as f64)).collect();
        let best = tree_dp::best_subtree_average(&local, &weights, min_size);
        let witness: Vec<usize> = {
            let mut w: Vec<usize> = best.vertices.iter().map(|&i| ball.vertices[i]).collect();
            w.sort_unstable();
            w
        };
        return Ok(RadiusMax {
            radius: r,
            ball_size: n,
            max_average: Some(best.average),
            witness: Some(witness),
            method: SearchMethod::TreeDp,
            completeness: Completeness::Complete,
        });
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    let completeness = enumerate_connected_sets(g, &ball.vertices, min_size, n, caps, |vs| {
        let avg = vertex_set_average(g, vs, gf);
        if best.as_ref().is_none_or(|(b, _)| avg > *b) {
            best = Some((avg, vs.to_vec()));
        }
    })?;
    let method = if completeness.is_complete() {
        SearchMethod::Exhaustive
    } else {
        if let Some((avg, vs)) = greedy_hub_growth(g, gf, &ball.vertices, min_size) {
            if best.as_ref().is_none_or(|(b, _)| avg > *b) {
                best = Some((avg, vs));
            }
        }
        SearchMethod::PartialWithGreedy
    };
    Ok(RadiusMax {
        radius: r,
        ball_size: n,
        max_average: best.as_ref().map(|b| b.0),
        witness: best.map(|b| b.1),
        method,
        completeness,
    })
}

/// Lower bound on the maximal average: from every start vertex, repeatedly
/// absorb the frontier vertex of largest weight, recording the best average
/// seen at sizes ≥ `min_size`.
pub fn greedy_hub_growth(g: &Graph, gf: &GrowthFunction, host: &[usize], min_size: usize) -> Option<(f64, Vec<usize>)> {
    let in_host = g.mask(host);
    let weight = |v: usize| gf.eval(g.degree(v) as f64);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for &start in host {
        let mut in_set = vec![false; g.vertex_count()];
        let mut set = vec![start];
        in_set[start] = true;
        let mut total = weight(start);
        loop {
            if set.len() >= min_size {
                let avg = total / set.len() as f64;
                if best.as_ref().is_none_or(|(b, _)| avg > *b) {
                    let mut s = set.clone();
                    s.sort_unstable();
                    best = Some((avg, s));
                }
            }
            let next = set
                .iter()
                .flat_map(|&u| g.neighbors(u).iter().copied())
                .filter(|&v| in_host[v] && !in_set[v])
                .max_by(|&a, &b| weight(a).total_cmp(&weight(b)).then(b.cmp(&a)));
            match next {
                Some(v) => {
                    in_set[v] = true;
                    set.push(v);
                    total += weight(v);
                }
                None => break,
            }
        }
    }
    best
}

/// Windowed temperedness check around `x` for the given strictly increasing
/// radii. With a target, the verdict compares γ to it; a lower bound that
/// already exceeds the target is a definitive failure.
pub fn check_tempered(
    g: &Graph,
    gf: &GrowthFunction,
    x: usize,
    radii: &[usize],
    gamma_target: Option<f64>,
    caps: &Caps,
) -> Result<TemperednessReport> {
    g.check_vertex(x)?;
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    let per_radius = radii
        .iter()
        .map(|&r| max_animal_average(g, gf, x, r, caps))
        .collect::<Result<Vec<_>>>()?;

    let mut gamma = 0.0f64;
    let mut arg: Option<&RadiusMax> = None;
    for rm in &per_radius {
        if let Some(m) = rm.max_average {
            if arg.is_none() || m > gamma {
                gamma = m;
                arg = Some(rm);
            }
        }
    }
    let complete = per_radius.iter().all(|rm| rm.completeness.is_complete());

    let (verdict, witness) = match gamma_target {
        Some(target) if gamma > target => {
            let vs = arg.and_then(|rm| rm.witness.clone()).unwrap_or_default();
            (TemperednessVerdict::Failed, Some(Animal::induced(g, &vs)))
        }
        _ if !complete => (TemperednessVerdict::Inconclusive, None),
        _ => (TemperednessVerdict::CertifiedOnWindow, None),
    };
    let witness_average = witness.as_ref().map(|a| animal_average(a, gf, g));
    Ok(TemperednessReport {
        root: x,
        growth: gf.name().to_string(),
        radii: radii.to_vec(),
        per_radius_max: per_radius.iter().map(|rm| rm.max_average).collect(),
        per_radius,
        gamma,
        gamma_target,
        verdict,
        witness,
        witness_average,
    })
}
