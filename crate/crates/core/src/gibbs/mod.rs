//! Exact finite-volume Gibbs computations for finite spin spaces.
//!
//! Configurations of a volume Δ are indexed in mixed radix: local site `i`
//! (the i-th vertex of `Volume::delta`) is digit `i` in base |S|. Every sum
//! over configurations is carried out in the log domain with a max shift.

mod dlr;
mod expansion;
mod lemma;
mod q;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::disorder::DisorderSample;
use crate::error::{Error, Result};
use crate::graph::{Graph, Volume};

pub use dlr::{dlr_consistency_check, DlrReport};
pub use expansion::{verify_expansion_identity, ExpansionReport};
pub use lemma::{
    boundary_gap, verify_lemma27, verify_lemma27_all, BoundaryStrategy, GapMode, GapReport, LemmaReport, LemmaVerdict,
    EXHAUSTIVE_BOUNDARY_LIMIT,
};
pub use q::{compute_q, path_family, PathFamily, QValues};

/// A finite single-site spin space with its a priori weights χ, the
/// interaction template K and the observable h.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinModel {
    pub name: String,
    /// Spin labels, for display and for the templates below.
    pub spins: Vec<f64>,
    /// K(s, s′): symmetric, |K| ≤ 1, with |K| = 1 attained.
    pub kernel: Vec<Vec<f64>>,
    /// χ(s), shared by all sites unless overridden.
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub site_weights: BTreeMap<usize, Vec<f64>>,
    /// h(s) ∈ [0, 1].
    pub observable: Vec<f64>,
}

impl SpinModel {
    fn product_template(name: &str, spins: Vec<f64>, observable: Vec<f64>) -> Self {
        let scale = spins.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let kernel = spins
            .iter()
            .map(|a| spins.iter().map(|b| a * b / (scale * scale)).collect())
            .collect();
        SpinModel {
            name: name.to_string(),
            weights: vec![1.0; spins.len()],
            site_weights: BTreeMap::new(),
            spins,
            kernel,
            observable,
        }
    }

    /// S = {−1, +1}, K(s, s′) = ss′, h = 1_{+1}.
    pub fn ising() -> Self {
        Self::product_template("ising", vec![-1.0, 1.0], vec![0.0, 1.0])
    }

    /// S = {−1, 0, +1}, K(s, s′) = ss′, h = 1_{+1}.
    pub fn three_point() -> Self {
        Self::product_template("three-point", vec![-1.0, 0.0, 1.0], vec![0.0, 0.0, 1.0])
    }

    /// S = {0, …, q−1}, K(s, s′) = 1_{s = s′}, h = 1_{0}.
    pub fn potts(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument("potts needs q >= 2".into()));
        }
        let kernel = (0..q)
            .map(|a| (0..q).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
            .collect();
        let mut observable = vec![0.0; q];
        observable[0] = 1.0;
        Ok(SpinModel {
            name: format!("potts:{q}"),
            spins: (0..q).map(|s| s as f64).collect(),
            kernel,
            weights: vec![1.0; q],
            site_weights: BTreeMap::new(),
            observable,
        })
    }

    /// n evenly spaced spins on [−1, 1] with K(s, s′) = ss′ and
    /// h(s) = (1 + s)/2.
    pub fn interval_grid(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("interval grid needs n >= 2".into()));
        }
        let spins: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let observable = spins.iter().map(|s| (1.0 + s) / 2.0).collect();
        let mut m = Self::product_template("", spins, observable);
        m.name = format!("interval:{n}");
        Ok(m)
    }

    /// `ising`, `three-point`, `potts:Q`, `interval:N`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::InvalidArgument(format!("{name} needs a size")))?
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad size in {s:?}")))
        };
        match name {
            "ising" => Ok(Self::ising()),
            "three-point" => Ok(Self::three_point()),
            "potts" => Self::potts(num(arg)?),
            "interval" => Self::interval_grid(num(arg)?),
            _ => Err(Error::InvalidArgument(format!("unknown spin model {s:?}"))),
        }
    }

    pub fn with_observable(mut self, h: Vec<f64>) -> Result<Self> {
        self.observable = h;
        self.validate()?;
        Ok(self)
    }

    pub fn with_weights(mut self, chi: Vec<f64>) -> Result<Self> {
        self.weights = chi;
        self.validate()?;
        Ok(self)
    }

    pub fn with_site_weights(mut self, x: usize, chi: Vec<f64>) -> Result<Self> {
        self.site_weights.insert(x, chi);
        self.validate()?;
        Ok(self)
    }

    pub fn q(&self) -> usize {
        self.spins.len()
    }

    pub fn chi(&self, x: usize) -> &[f64] {
        self.site_weights.get(&x).unwrap_or(&self.weights)
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.q();
        let bad = |m: &str| Err(Error::InvalidArgument(format!("spin model {}: {m}", self.name)));
        if q == 0 {
            return bad("empty spin space");
        }
        if self.kernel.len() != q || self.kernel.iter().any(|r| r.len() != q) {
            return bad("kernel must be |S| x |S|");
        }
        let mut attained = false;
        for a in 0..q {
            for b in 0..q {
                let k = self.kernel[a][b];
                if k != self.kernel[b][a] {
                    return bad("kernel is not symmetric");
                }
                if !(k.abs() <= 1.0) {
                    return bad("kernel exceeds 1 in absolute value");
                }
                attained |= k.abs() == 1.0;
            }
        }
        if !attained {
            return bad("max |K| = 1 is not attained");
        }
        for chi in std::iter::once(&self.weights).chain(self.site_weights.values()) {
            if chi.len() != q || chi.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
                return bad("weights must be positive, one per spin");
            }
        }
        if self.observable.len() != q || self.observable.iter().any(|h| !(0.0..=1.0).contains(h)) {
            return bad("observable must take values in [0, 1], one per spin");
        }
        Ok(())
    }
}

/// Boundary spins (as indices into the spin list) on exactly ∂⁺Δ.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub spins: BTreeMap<usize, usize>,
}

impl BoundaryCondition {
    /// `spins[i]` is the spin at `vol.outer[i]`.
    pub fn from_outer(vol: &Volume, spins: &[usize]) -> Result<Self> {
        if spins.len() != vol.outer.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} boundary spins, got {}",
                vol.outer.len(),
                spins.len()
            )));
        }
        Ok(BoundaryCondition {
            spins: vol.outer.iter().copied().zip(spins.iter().copied()).collect(),
        })
    }

    pub fn uniform(vol: &Volume, s: usize) -> Self {
        BoundaryCondition {
            spins: vol.outer.iter().map(|&y| (y, s)).collect(),
        }
    }

    /// Spins aligned with `vol.outer`; the domain must be exactly ∂⁺Δ.
    pub fn aligned(&self, vol: &Volume, q: usize) -> Result<Vec<usize>> {
        if let Some(&y) = self.spins.keys().find(|y| vol.outer.binary_search(y).is_err()) {
            return Err(Error::InvalidArgument(format!(
                "vertex {y} is not on the outer boundary"
            )));
        }
        vol.outer
            .iter()
            .map(|&y| {
                let s = *self.spins.get(&y).ok_or(Error::MissingAssignment(y))?;
                if s >= q {
                    return Err(Error::InvalidArgument(format!("spin index {s} at {y} out of range")));
                }
                Ok(s)
            })
            .collect()
    }
}

/// The data shared by all finite-volume computations.
#[derive(Debug, Clone, Copy)]
pub struct Instance<'a> {
    pub graph: &'a Graph,
    pub volume: &'a Volume,
    pub model: &'a SpinModel,
    pub disorder: &'a DisorderSample,
    pub beta: f64,
}

impl Instance<'_> {
    fn check(&self) -> Result<()> {
        self.model.validate()?;
        if self.disorder.norms.len() != self.graph.edge_count() || self.disorder.signs.len() != self.graph.edge_count()
        {
            return Err(Error::InvalidArgument(format!(
                "disorder has {} norms for {} edges",
                self.disorder.norms.len(),
                self.graph.edge_count()
            )));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "beta = {} must be finite and nonnegative",
                self.beta
            )));
        }
        Ok(())
    }

    /// W_e(a, b) = sign_e ‖W_e‖ K(a, b) as a row-major |S| x |S| table.
    fn coupling(&self, e: usize) -> Vec<f64> {
        let w = self.disorder.norms[e] * f64::from(self.disorder.signs[e]);
        self.model.kernel.iter().flatten().map(|k| w * k).collect()
    }
}

/// H_Δ(σ|ξ), or H̃_Δ(σ|ξ) when `tilted`, straight from the definition.
/// `config` must assign every vertex of Δ.
pub fn hamiltonian(
    inst: &Instance,
    config: &BTreeMap<usize, usize>,
    bc: &BoundaryCondition,
    tilted: bool,
) -> Result<f64> {
    inst.check()?;
    let q = inst.model.q();
    let vol = inst.volume;
    for &x in &vol.delta {
        match config.get(&x) {
            None => return Err(Error::MissingAssignment(x)),
            Some(&s) if s >= q => return Err(Error::InvalidArgument(format!("spin index {s} at {x} out of range"))),
            _ => {}
        }
    }
    let xi = bc.aligned(vol, q)?;
    let outer_spin = |y: usize| xi[vol.outer.binary_search(&y).expect("outer vertex")];
    let mut h = 0.0;
    for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
        let norm = inst.disorder.norms[e];
        let w = |a: usize, b: usize| f64::from(inst.disorder.signs[e]) * norm * inst.model.kernel[a][b];
        match (vol.contains(u), vol.contains(v)) {
            (true, true) => {
                h -= w(config[&u], config[&v]) + if tilted { norm } else { 0.0 };
            }
            (true, false) => h -= w(config[&u], outer_spin(v)),
            (false, true) => h -= w(outer_spin(u), config[&v]),
            (false, false) => {}
        }
    }
    Ok(h)
}

struct BoundaryEdge {
    site: usize,
    outer: usize,
    coupling: Vec<f64>,
}

/// Precomputed configuration weights of one volume at one β: everything but
/// the boundary field, which is added per boundary condition.
pub(crate) struct LocalSystem {
    q: usize,
    n: usize,
    /// q^i for each local site i.
    radix: Vec<usize>,
    beta: f64,
    outer_len: usize,
    /// Local indices of ∂⁻Δ.
    inner: Vec<usize>,
    boundary: Vec<BoundaryEdge>,
    /// log χ_Δ(σ) + β Σ_{E_Δ} (W + tilt) for every configuration.
    base: Vec<f64>,
    observable: Vec<f64>,
}

fn config_count(q: usize, n: usize, caps: &Caps, what: &'static str) -> Result<usize> {
    let required = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > u128::from(caps.max_items) {
        return Err(Error::CapExceeded {
            what,
            required,
            cap: u128::from(caps.max_items),
        });
    }
    Ok(required as usize)
}

impl LocalSystem {
    pub(crate) fn new(inst: &Instance, tilted: bool, caps: &Caps) -> Result<Self> {
        inst.check()?;
        let q = inst.model.q();
        let vol = inst.volume;
        let n = vol.len();
        let count = config_count(q, n, caps, "configuration sum")?;

        let mut interior_edges = Vec::new();
        let mut boundary = Vec::new();
        for &x in &vol.delta {
            let i = vol.local_index(x).expect("in volume");
            for (&y, &e) in inst.graph.neighbors(x).iter().zip(inst.graph.incident_edges(x)) {
                if let Some(j) = vol.local_index(y) {
                    if i < j {
                        let shift = if tilted { inst.disorder.norms[e] } else { 0.0 };
                        interior_edges.push((i, j, inst.coupling(e), shift));
                    }
                } else {
                    let o = vol.outer.binary_search(&y).expect("outer neighbor");
                    boundary.push(BoundaryEdge {
                        site: i,
                        outer: o,
                        coupling: inst.coupling(e),
                    });
                }
            }
        }
        let log_chi: Vec<Vec<f64>> = vol
            .delta
            .iter()
            .map(|&x| inst.model.chi(x).iter().map(|c| c.ln()).collect())
            .collect();
        let beta = inst.beta;

        let mut base = Vec::with_capacity(count);
        let mut digits = vec![0usize; n];
        for _ in 0..count {
            let mut lw = 0.0;
            for (i, &d) in digits.iter().enumerate() {
                lw += log_chi[i][d];
            }
            for (i, j, c, shift) in &interior_edges {
                lw += beta * (c[digits[*i] * q + digits[*j]] + shift);
            }
            base.push(lw);
            for d in digits.iter_mut() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        let inner = vol
            .inner
            .iter()
            .map(|&x| vol.local_index(x).expect("inner vertex in volume"))
            .collect();
        Ok(LocalSystem {
            q,
            n,
            radix: (0..n).map(|i| q.pow(i as u32)).collect(),
            beta,
            outer_len: vol.outer.len(),
            inner,
            boundary,
            base,
            observable: inst.model.observable.clone(),
        })
    }

    pub(crate) fn configurations(&self) -> usize {
        self.base.len()
    }

    fn digit(&self, c: usize, site: usize) -> usize {
        (c / self.radix[site]) % self.q
    }

    /// β Σ_{y ∈ ∂⁺Δ, y ∼ x} W_xy(s, ξ(y)) for each local site x and spin s.
    fn field(&self, xi: &[usize]) -> Vec<Vec<f64>> {
        debug_assert_eq!(xi.len(), self.outer_len);
        let mut f = vec![vec![0.0; self.q]; self.n];
        for b in &self.boundary {
            for (s, fs) in f[b.site].iter_mut().enumerate() {
                *fs += self.beta * b.coupling[s * self.q + xi[b.outer]];
            }
        }
        f
    }

    /// Log-weights of all configurations under ξ (unnormalized).
    pub(crate) fn log_weights(&self, xi: &[usize]) -> Vec<f64> {
        let f = self.field(xi);
        self.base
            .iter()
            .enumerate()
            .map(|(c, &b)| b + self.inner.iter().map(|&i| f[i][self.digit(c, i)]).sum::<f64>())
            .collect()
    }

    /// Normalized probabilities of all configurations and log Z.
    pub(crate) fn probabilities(&self, xi: &[usize]) -> (Vec<f64>, f64) {
        let lw = self.log_weights(xi);
        let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut p: Vec<f64> = lw.iter().map(|l| (l - m).exp()).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= s);
        (p, m + s.ln())
    }

    /// The sums over configurations grouped by the spins on ∂⁻Δ and at z.
    pub(crate) fn view(&self, z_local: usize) -> SiteView<'_> {
        let m = self.inner.len();
        let size = self.q.pow(m as u32 + 1);
        let key = |c: usize| {
            let mut k = 0;
            for &i in self.inner.iter().rev() {
                k = k * self.q + self.digit(c, i);
            }
            k + self.digit(c, z_local) * self.q.pow(m as u32)
        };
        let mut max = vec![f64::NEG_INFINITY; size];
        for (c, &b) in self.base.iter().enumerate() {
            let k = key(c);
            max[k] = max[k].max(b);
        }
        let mut sum = vec![0.0; size];
        for (c, &b) in self.base.iter().enumerate() {
            let k = key(c);
            sum[k] += (b - max[k]).exp();
        }
        let table = max
            .iter()
            .zip(&sum)
            .map(|(&mx, &s)| if s > 0.0 { mx + s.ln() } else { f64::NEG_INFINITY })
            .collect();
        SiteView { system: self, table }
    }
}

pub(crate) struct SiteView<'a> {
    system: &'a LocalSystem,
    /// Index Σ_k s(inner_k) q^k + s(z) q^m.
    table: Vec<f64>,
}

impl SiteView<'_> {
    /// (log Z(ξ), M_z(h|ξ)).
    pub(crate) fn evaluate(&self, xi: &[usize]) -> (f64, f64) {
        let sys = self.system;
        let q = sys.q;
        let m = sys.inner.len();
        let f = sys.field(xi);
        let block = q.pow(m as u32);
        let mut vals = Vec::with_capacity(self.table.len());
        let mut vmax = f64::NEG_INFINITY;
        for (k, &t) in self.table.iter().enumerate() {
            let mut v = t;
            if v > f64::NEG_INFINITY {
                let mut r = k % block;
                for &i in &sys.inner {
                    v += f[i][r % q];
                    r /= q;
                }
            }
            vmax = vmax.max(v);
            vals.push(v);
        }
        let mut z = 0.0;
        let mut hz = 0.0;
        for (k, v) in vals.into_iter().enumerate() {
            let e = (v - vmax).exp();
            z += e;
            hz += e * sys.observable[k / block];
        }
        (vmax + z.ln(), hz / z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEvaluation {
    /// log Z̃^β_Δ(ξ)
    pub log_partition: f64,
    /// M^β_{Δ,z}(h|ξ)
    pub magnetization: f64,
    pub configurations: u64,
}

fn local_site(vol: &Volume, z: usize) -> Result<usize> {
    vol.local_index(z)
        .ok_or_else(|| Error::InvalidArgument(format!("vertex {z} is not in the volume")))
}

/// log Z̃^β_Δ(ξ) and M^β_{Δ,z}(h|ξ) by full summation with the tilted
/// Hamiltonian.
pub fn evaluate(inst: &Instance, z: usize, bc: &BoundaryCondition, caps: &Caps) -> Result<KernelEvaluation> {
    evaluate_with(inst, z, bc, true, caps)
}

/// As [`evaluate`], choosing between H (`tilted = false`) and H̃.
pub fn evaluate_with(
    inst: &Instance,
    z: usize,
    bc: &BoundaryCondition,
    tilted: bool,
    caps: &Caps,
) -> Result<KernelEvaluation> {
    let zl = local_site(inst.volume, z)?;
    let sys = LocalSystem::new(inst, tilted, caps)?;
    let xi = bc.aligned(inst.volume, sys.q)?;
    let (log_partition, magnetization) = sys.view(zl).evaluate(&xi);
    Ok(KernelEvaluation {
        log_partition,
        magnetization,
        configurations: sys.configurations() as u64,
    })
}

/// log Z̃^β_Δ(ξ).
pub fn partition(inst: &Instance, bc: &BoundaryCondition, caps: &Caps) -> Result<f64> {
    let sys = LocalSystem::new(inst, true, caps)?;
    let xi = bc.aligned(inst.volume, sys.q)?;
    Ok(sys.probabilities(&xi).1)
}

/// M^β_{Δ,z}(h|ξ).
pub fn magnetization(inst: &Instance, z: usize, bc: &BoundaryCondition, caps: &Caps) -> Result<f64> {
    Ok(evaluate(inst, z, bc, caps)?.magnetization)
}
