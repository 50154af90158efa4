//! Laws of the interaction norms ‖W_xy‖, their exponential moments, the edge
//! weights κ_xy(β) = e^{4β‖W_xy‖} − 1, and the critical inverse temperature.

use std::f64::consts::PI;
use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum NormDistribution {
    Exponential { rate: f64 },
    Uniform { upper: f64 },
    HalfNormal { scale: f64 },
    Constant { value: f64 },
}

impl fmt::Display for NormDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { rate } => write!(f, "exponential:{rate}"),
            Self::Uniform { upper } => write!(f, "uniform:{upper}"),
            Self::HalfNormal { scale } => write!(f, "half-normal:{scale}"),
            Self::Constant { value } => write!(f, "constant:{value}"),
        }
    }
}

impl NormDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        Self::Exponential { rate }.validated()
    }

    pub fn uniform(upper: f64) -> Result<Self> {
        Self::Uniform { upper }.validated()
    }

    pub fn half_normal(scale: f64) -> Result<Self> {
        Self::HalfNormal { scale }.validated()
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::Constant { value }.validated()
    }

    /// Checks the parameter; useful after deserialization.
    pub fn validated(self) -> Result<Self> {
        let (name, p, zero_ok) = match self {
            Self::Exponential { rate } => ("rate", rate, false),
            Self::Uniform { upper } => ("upper", upper, false),
            Self::HalfNormal { scale } => ("scale", scale, false),
            Self::Constant { value } => ("value", value, true),
        };
        if !p.is_finite() || p < 0.0 || (p == 0.0 && !zero_ok) {
            return Err(Error::InvalidArgument(format!("{name} = {p} is not admissible")));
        }
        Ok(self)
    }

    /// Parses `exponential:8`, `uniform:1`, `half-normal:0.5`, `constant:1`.
    pub fn parse(s: &str) -> Result<Self> {
        let (family, param) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("expected family:parameter, got {s:?}")))?;
        let p: f64 = param
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad parameter {param:?}")))?;
        match family.trim() {
            "exponential" | "exp" => Self::exponential(p),
            "uniform" => Self::uniform(p),
            "half-normal" => Self::half_normal(p),
            "constant" => Self::constant(p),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Uniform { upper } => upper / 2.0,
            Self::HalfNormal { scale } => scale * (2.0 / PI).sqrt(),
            Self::Constant { value } => value,
        }
    }

    /// Supremum of t with E[e^{t‖W‖}] < ∞.
    pub fn mgf_domain(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => rate,
            _ => f64::INFINITY,
        }
    }

    /// E[e^{t‖W‖}] − 1, computed without cancellation at small t.
    pub fn mgf_minus_one(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("t = {t} must be nonnegative")));
        }
        Ok(match *self {
            Self::Exponential { rate } => {
                if t >= rate {
                    return Err(Error::MomentExplosion { t, rate });
                }
                t / (rate - t)
            }
            Self::Uniform { upper } => {
                let x = t * upper;
                if x < 1e-4 {
                    x / 2.0 + x * x / 6.0 + x * x * x / 24.0
                } else {
                    (x.exp_m1() - x) / x
                }
            }
            Self::Constant { value } => (t * value).exp_m1(),
            Self::HalfNormal { scale } => half_normal_mgf_minus_one(scale, t),
        })
    }

    pub fn mgf(&self, t: f64) -> Result<f64> {
        Ok(1.0 + self.mgf_minus_one(t)?)
    }

    /// Distribution function P(‖W‖ ≤ x).
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            Self::Exponential { rate } => -(-rate * x).exp_m1(),
            Self::Uniform { upper } => (x / upper).min(1.0),
            Self::HalfNormal { scale } => erf(x / (scale * std::f64::consts::SQRT_2)),
            Self::Constant { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Self::Exponential { rate } => Exp::new(rate).expect("validated rate").sample(rng),
            Self::Uniform { upper } => upper * rng.random::<f64>(),
            Self::HalfNormal { scale } => Normal::new(0.0, scale).expect("validated scale").sample(rng).abs(),
            Self::Constant { value } => value,
        }
    }
}

// ∫_0^∞ (e^{tx} − 1) (2/(s√(2π))) e^{−x²/(2s²)} dx.
fn half_normal_mgf_minus_one(s: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let norm = 2.0 / (s * (2.0 * PI).sqrt());
    let f = |x: f64| (t * x).exp_m1() * norm * (-x * x / (2.0 * s * s)).exp();
    // The integrand peaks near s²t; 40 standard deviations past it the
    // remaining mass is below e^{-800} relative to the peak.
    let peak = s * s * t;
    let end = peak + 40.0 * s;
    let mut total = 0.0;
    let mut a = 0.0;
    for b in [peak, end] {
        if b > a {
            total += quad::integrate(f, a, b, 1e-13, 0.0, 10_000).value;
            a = b;
        }
    }
    total
}

/// κ_xy(β) = e^{4β‖W_xy‖} − 1.
pub fn edge_kappa(norm: f64, beta: f64) -> f64 {
    (4.0 * beta * norm).exp_m1()
}

/// κ(β) = E[κ_xy(β)] = E[e^{4β‖W‖}] − 1.
pub fn mean_kappa(d: &NormDistribution, beta: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be nonnegative")));
    }
    d.mgf_minus_one(4.0 * beta)
}

/// κ(β)·e^γ: below 1 exactly when β is in the certified regime.
pub fn safety_margin(d: &NormDistribution, beta: f64, gamma: f64) -> Result<f64> {
    Ok(mean_kappa(d, beta)? * gamma.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaStar {
    pub beta: f64,
    /// e^{−γ}
    pub target: f64,
    /// κ at the returned β.
    pub kappa: f64,
    pub iterations: usize,
}

/// Solves κ(β) = e^{−γ} by bisection until the bracket is narrower than `tol`.
pub fn beta_star(d: &NormDistribution, gamma: f64, tol: f64) -> Result<BetaStar> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    if !(gamma >= 0.0) || gamma.is_infinite() {
        return Err(Error::InvalidArgument(format!(
            "gamma = {gamma} must be finite and nonnegative"
        )));
    }
    let target = (-gamma).exp();
    if let NormDistribution::Constant { value } = *d {
        if value == 0.0 {
            return Err(Error::TargetUnreachable { target, supremum: 0.0 });
        }
    }
    let kappa = |b: f64| mean_kappa(d, b);
    let (mut lo, mut hi) = (
        0.0,
        match *d {
            // κ blows up as 4β → λ.
            NormDistribution::Exponential { rate } => rate / 4.0,
            _ => {
                let mut hi = 1.0;
                while kappa(hi)? < target {
                    hi *= 2.0;
                    if !hi.is_finite() {
                        return Err(Error::TargetUnreachable {
                            target,
                            supremum: f64::INFINITY,
                        });
                    }
                }
                hi
            }
        },
    );
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if kappa(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    Ok(BetaStar {
        beta,
        target,
        kappa: kappa(beta)?,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    #[default]
    AllPositive,
    Rademacher,
}

impl SignMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "all-positive" | "positive" => Ok(Self::AllPositive),
            "rademacher" => Ok(Self::Rademacher),
            _ => Err(Error::InvalidArgument(format!("unknown sign mode {s:?}"))),
        }
    }
}

/// The full description of a disorder draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    #[serde(flatten)]
    pub distribution: NormDistribution,
    #[serde(default)]
    pub sign_mode: SignMode,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderSample {
    pub spec: DisorderSpec,
    /// Indexed by edge id.
    pub norms: Vec<f64>,
    pub signs: Vec<i8>,
}

impl DisorderSample {
    /// A deterministic sample with the given norms and positive signs.
    pub fn from_norms(norms: Vec<f64>) -> Self {
        let signs = vec![1; norms.len()];
        let value = norms.first().copied().unwrap_or(0.0);
        Self {
            spec: DisorderSpec {
                distribution: NormDistribution::Constant { value },
                sign_mode: SignMode::AllPositive,
                seed: 0,
            },
            norms,
            signs,
        }
    }

    pub fn kappas(&self, beta: f64) -> Vec<f64> {
        self.norms.iter().map(|&w| edge_kappa(w, beta)).collect()
    }
}

/// Draws one norm (and sign) per edge. Edge e uses the ChaCha8 stream e of
/// the seed, so the draw on an edge does not depend on the other edges.
pub fn sample_disorder(g: &Graph, spec: &DisorderSpec) -> DisorderSample {
    sample_edges(g.edge_count(), spec)
}

pub fn sample_edges(edge_count: usize, spec: &DisorderSpec) -> DisorderSample {
    let (norms, signs) = (0..edge_count)
        .into_par_iter()
        .map(|e| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(e as u64);
            let w = spec.distribution.sample(&mut rng);
            let s = match spec.sign_mode {
                SignMode::AllPositive => 1,
                SignMode::Rademacher => {
                    if rng.random_bool(0.5) {
                        1
                    } else {
                        -1
                    }
                }
            };
            (w, s)
        })
        .unzip();
    DisorderSample {
        spec: *spec,
        norms,
        signs,
    }
}
