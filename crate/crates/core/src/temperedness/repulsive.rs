//! Repulsive graphs: hubs of degree at least n* must be at distance at
//! least φ(m) from each other, where m is the smaller (or larger) of the two
//! degrees.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::GrowthFunction;
use crate::error::{Error, Result};
use crate::graph::Graph;

const INVERSE_TOL: f64 = 1e-12;

/// A strictly increasing function on [1, ∞), unbounded.
#[derive(Clone)]
pub enum PhiFunction {
    /// scale · t
    Linear { scale: f64 },
    /// scale · t^exponent
    Power { scale: f64, exponent: f64 },
    Custom {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhiFunction({})", self.name())
    }
}

impl PhiFunction {
    pub fn identity() -> Self {
        PhiFunction::Linear { scale: 1.0 }
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        PhiFunction::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            PhiFunction::Linear { scale } => scale * t,
            PhiFunction::Power { scale, exponent } => scale * t.powf(*exponent),
            PhiFunction::Custom { f, .. } => f(t),
        }
    }

    pub fn name(&self) -> String {
        match self {
            PhiFunction::Linear { scale } => format!("linear:{scale}"),
            PhiFunction::Power { scale, exponent } => format!("power:{exponent}:{scale}"),
            PhiFunction::Custom { name, .. } => name.clone(),
        }
    }

    /// `linear[:scale]` or `power:exponent[:scale]`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize, default: f64| -> Result<f64> {
            parts
                .get(i)
                .map(|p| {
                    p.parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad number '{p}' in phi '{s}'")))
                })
                .unwrap_or(Ok(default))
        };
        let phi = match parts[0] {
            "linear" => PhiFunction::Linear { scale: num(1, 1.0)? },
            "power" => PhiFunction::Power {
                exponent: num(1, 1.0)?,
                scale: num(2, 1.0)?,
            },
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown phi '{other}' (expected linear or power)"
                )))
            }
        };
        match &phi {
            PhiFunction::Linear { scale } | PhiFunction::Power { scale, .. } if *scale <= 0.0 => {
                Err(Error::InvalidArgument("phi scale must be positive".into()))
            }
            PhiFunction::Power { exponent, .. } if *exponent <= 0.0 => {
                Err(Error::InvalidArgument("phi exponent must be positive".into()))
            }
            _ => Ok(phi),
        }
    }

    /// φ⁻¹(v) on [1, ∞); `None` when v < φ(1). Closed forms for the
    /// built-ins, bisection to 1e-12 otherwise.
    pub fn inverse(&self, v: f64) -> Option<f64> {
        if v < self.eval(1.0) {
            return None;
        }
        match self {
            PhiFunction::Linear { scale } => Some(v / scale),
            PhiFunction::Power { scale, exponent } => Some((v / scale).powf(1.0 / exponent)),
            PhiFunction::Custom { .. } => {
                let (mut lo, mut hi) = (1.0f64, 2.0f64);
                while self.eval(hi) < v {
                    lo = hi;
                    hi *= 2.0;
                    if !hi.is_finite() {
                        return None;
                    }
                }
                while hi - lo > INVERSE_TOL * hi.max(1.0) {
                    let mid = 0.5 * (lo + hi);
                    if self.eval(mid) < v {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Some(0.5 * (lo + hi))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeMode {
    /// m₋(x, y) = min{n(x), n(y)}
    Min,
    /// m₊(x, y) = max{n(x), n(y)}
    Max,
}

#[derive(Debug, Clone)]
pub struct RepulsivenessSpec {
    pub phi: PhiFunction,
    pub n_star: usize,
    pub mode: DegreeMode,
}

impl RepulsivenessSpec {
    pub fn new(phi: PhiFunction, n_star: usize, mode: DegreeMode) -> Result<Self> {
        if n_star < 1 {
            return Err(Error::InvalidArgument("n* must be at least 1".into()));
        }
        Ok(RepulsivenessSpec { phi, n_star, mode })
    }

    fn m(&self, a: usize, b: usize) -> usize {
        match self.mode {
            DegreeMode::Min => a.min(b),
            DegreeMode::Max => a.max(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepulsiveViolation {
    pub x: usize,
    pub y: usize,
    pub distance: usize,
    pub m: usize,
    pub required: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepulsiveReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub witnesses: Vec<RepulsiveViolation>,
}

/// Checks ρ(x, y) ≥ φ(m(x, y)) for every pair with m(x, y) ≥ n*. Pairs in
/// different components are infinitely far apart and never violate.
pub fn check_repulsive(g: &Graph, spec: &RepulsivenessSpec) -> RepulsiveReport {
    let n = g.vertex_count();
    let mut witnesses = Vec::new();
    let mut pairs_checked = 0;
    // Every relevant pair has at least one endpoint of degree ≥ n*.
    for x in (0..n).filter(|&x| g.degree(x) >= spec.n_star) {
        let dist = g.bfs(x);
        for (y, &dy) in dist.iter().enumerate() {
            if y == x || (g.degree(y) >= spec.n_star && y < x) {
                continue;
            }
            let m = spec.m(g.degree(x), g.degree(y));
            if m < spec.n_star {
                continue;
            }
            pairs_checked += 1;
            let Some(d) = dy else { continue };
            let required = spec.phi.eval(m as f64);
            if (d as f64) < required {
                let (a, b) = (x.min(y), x.max(y));
                witnesses.push(RepulsiveViolation {
                    x: a,
                    y: b,
                    distance: d,
                    m,
                    required,
                });
            }
        }
    }
    witnesses.sort_by_key(|w| (w.x, w.y));
    RepulsiveReport {
        holds: witnesses.is_empty(),
        pairs_checked,
        witnesses,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NkSelection {
    pub root: usize,
    pub radii: Vec<usize>,
    /// Set when no radius up to `r_max` qualifies.
    pub empty: bool,
}

/// All radii 1 ≤ r ≤ `r_max` with max_{y ∈ V_r(x)} n(y) ≤ φ⁻¹(2r + 1).
pub fn select_nk(g: &Graph, x: usize, spec: &RepulsivenessSpec, r_max: usize) -> Result<NkSelection> {
    g.check_vertex(x)?;
    let dist = g.bfs(x);
    let mut radii = Vec::new();
    for r in 1..=r_max {
        let max_deg = (0..g.vertex_count())
            .filter(|&y| dist[y].is_some_and(|d| d <= r))
            .map(|y| g.degree(y))
            .max()
            .unwrap_or(0);
        let ok = spec
            .phi
            .inverse((2 * r + 1) as f64)
            .is_some_and(|inv| (max_deg as f64) <= inv + 1e-9);
        if ok {
            radii.push(r);
        }
    }
    Ok(NkSelection {
        root: x,
        empty: radii.is_empty(),
        radii,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummabilityDiagnostic {
    Converging,
    Diverging,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummabilityReport {
    pub terms: usize,
    pub partial_sum: f64,
    /// 2 · partial sum: the temperedness constant a repulsive graph gets.
    pub implied_gamma: f64,
    /// Sum of the second half of the terms.
    pub tail: f64,
    pub diagnostic: SummabilityDiagnostic,
}

/// Σ_{k=1..terms} g(t_{k+1}) / φ(t_k). The partial sums count as Cauchy when
/// the second half of the terms adds at most `tolerance · max(1, |sum|)`.
pub fn check_summability(
    gf: &GrowthFunction,
    phi: &PhiFunction,
    t_seq: &[f64],
    terms: usize,
    tolerance: f64,
) -> Result<SummabilityReport> {
    if terms == 0 {
        return Err(Error::InvalidArgument("need at least one term".into()));
    }
    if t_seq.len() < terms + 1 {
        return Err(Error::InvalidArgument(format!(
            "sequence has {} entries, need {}",
            t_seq.len(),
            terms + 1
        )));
    }
    if t_seq[0] < 1.0 || t_seq.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "t sequence must be strictly increasing with t_1 >= 1".into(),
        ));
    }
    let mut values = Vec::with_capacity(terms);
    for k in 0..terms {
        let denom = phi.eval(t_seq[k]);
        if denom <= 0.0 {
            return Err(Error::NonPositivePhi {
                index: k + 1,
                value: denom,
            });
        }
        values.push(gf.eval(t_seq[k + 1]) / denom);
    }
    let partial_sum: f64 = values.iter().sum();
    let tail: f64 = values[terms / 2..].iter().sum();
    let diagnostic = if tail <= tolerance * partial_sum.abs().max(1.0) {
        SummabilityDiagnostic::Converging
    } else {
        SummabilityDiagnostic::Diverging
    };
    Ok(SummabilityReport {
        terms,
        partial_sum,
        implied_gamma: 2.0 * partial_sum,
        tail,
        diagnostic,
    })
}
