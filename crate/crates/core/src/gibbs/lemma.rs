//! Boundary sensitivity of M_z and its path-sum bound.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::q::{check_interior, path_family, QValues};
use super::{local_site, BoundaryCondition, Instance, LocalSystem, SiteView};
use crate::caps::Caps;
use crate::error::Result;
use crate::graph::Volume;

/// Boundary spaces up to this size are searched exhaustively by `Auto`.
pub const EXHAUSTIVE_BOUNDARY_LIMIT: u128 = 4096;

/// Slack added to the right-hand side of inequality checks.
pub const INEQUALITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryStrategy {
    /// Exhaustive when |S|^{|∂⁺Δ|} ≤ 4096, random restarts otherwise.
    #[default]
    Auto,
    Exhaustive,
    RandomAscent {
        restarts: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapMode {
    /// The sup over boundary conditions is exact.
    Exhaustive,
    /// Local search: the reported gap is a lower bound on the sup.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub z: usize,
    /// sup over (ξ, η) of |M(h|ξ) − M(h|η)|.
    pub gap: f64,
    pub max_magnetization: f64,
    pub min_magnetization: f64,
    /// ξ attaining the maximum of M.
    pub argmax: BoundaryCondition,
    /// η attaining the minimum of M.
    pub argmin: BoundaryCondition,
    pub mode: GapMode,
    pub evaluated: u64,
}

fn boundary_space(q: usize, vol: &Volume) -> u128 {
    (q as u128).checked_pow(vol.outer.len() as u32).unwrap_or(u128::MAX)
}

fn gap_on_view(view: &SiteView, vol: &Volume, q: usize, z: usize, strategy: BoundaryStrategy) -> GapReport {
    let space = boundary_space(q, vol);
    let strategy = match strategy {
        BoundaryStrategy::Auto if space <= EXHAUSTIVE_BOUNDARY_LIMIT => BoundaryStrategy::Exhaustive,
        BoundaryStrategy::Auto => BoundaryStrategy::RandomAscent { restarts: 16, seed: 0 },
        s => s,
    };
    let m = |xi: &[usize]| view.evaluate(xi).1;
    let mut best_hi = (f64::NEG_INFINITY, vec![0; vol.outer.len()]);
    let mut best_lo = (f64::INFINITY, vec![0; vol.outer.len()]);
    let mut evaluated = 0u64;
    let mode = match strategy {
        BoundaryStrategy::Exhaustive | BoundaryStrategy::Auto => {
            let mut xi = vec![0usize; vol.outer.len()];
            for _ in 0..space {
                let v = m(&xi);
                evaluated += 1;
                if v > best_hi.0 {
                    best_hi = (v, xi.clone());
                }
                if v < best_lo.0 {
                    best_lo = (v, xi.clone());
                }
                for d in xi.iter_mut() {
                    *d += 1;
                    if *d < q {
                        break;
                    }
                    *d = 0;
                }
            }
            GapMode::Exhaustive
        }
        BoundaryStrategy::RandomAscent { restarts, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for direction in [1.0, -1.0] {
                for _ in 0..restarts.max(1) {
                    let mut xi: Vec<usize> = (0..vol.outer.len()).map(|_| rng.random_range(0..q)).collect();
                    let mut cur = direction * m(&xi);
                    evaluated += 1;
                    let mut improved = true;
                    while improved {
                        improved = false;
                        for i in 0..xi.len() {
                            let keep = xi[i];
                            let mut best = (cur, keep);
                            for s in (0..q).filter(|&s| s != keep) {
                                xi[i] = s;
                                let v = direction * m(&xi);
                                evaluated += 1;
                                if v > best.0 {
                                    best = (v, s);
                                }
                            }
                            xi[i] = best.1;
                            if best.1 != keep {
                                cur = best.0;
                                improved = true;
                            }
                        }
                    }
                    if direction > 0.0 && cur > best_hi.0 {
                        best_hi = (cur, xi);
                    } else if direction < 0.0 && -cur < best_lo.0 {
                        best_lo = (-cur, xi);
                    }
                }
            }
            GapMode::LowerBound
        }
    };
    let bc = |xi: &[usize]| BoundaryCondition::from_outer(vol, xi).expect("aligned");
    GapReport {
        z,
        gap: (best_hi.0 - best_lo.0).max(0.0),
        max_magnetization: best_hi.0,
        min_magnetization: best_lo.0,
        argmax: bc(&best_hi.1),
        argmin: bc(&best_lo.1),
        mode,
        evaluated,
    }
}

/// sup over boundary pairs of |M^β_{Δ,z}(h|ξ) − M^β_{Δ,z}(h|η)|. Only the
/// spins on ∂⁺Δ enter, so the sup runs over S^{∂⁺Δ}.
pub fn boundary_gap(inst: &Instance, z: usize, strategy: BoundaryStrategy, caps: &Caps) -> Result<GapReport> {
    let zl = local_site(inst.volume, z)?;
    let sys = LocalSystem::new(inst, true, caps)?;
    Ok(gap_on_view(&sys.view(zl), inst.volume, inst.model.q(), z, strategy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaVerdict {
    /// Exhaustive left side within the bound: the inequality is proved for
    /// this instance.
    Holds,
    /// Heuristic (lower-bound) left side within the bound.
    Consistent,
    Violated,
    /// Path enumeration was truncated and the left side exceeds the
    /// partial sum.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub z: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub q: QValues,
    pub gap: GapReport,
    pub verdict: LemmaVerdict,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, LemmaVerdict::Holds | LemmaVerdict::Consistent)
    }
}

fn verdict(gap: &GapReport, q: &QValues) -> LemmaVerdict {
    let within = gap.gap <= q.total + INEQUALITY_SLACK;
    match (within, gap.mode, q.completeness.is_complete()) {
        // A truncated Q is a lower bound on the true right side.
        (true, GapMode::Exhaustive, _) => LemmaVerdict::Holds,
        (true, GapMode::LowerBound, _) => LemmaVerdict::Consistent,
        (false, _, true) => LemmaVerdict::Violated,
        (false, _, false) => LemmaVerdict::Inconclusive,
    }
}

/// Compares sup |M(h|ξ) − M(h|η)| with Σ_{x ∈ ∂⁻Δ} Q^β_Δ(z, x).
pub fn verify_lemma27(inst: &Instance, z: usize, strategy: BoundaryStrategy, caps: &Caps) -> Result<LemmaReport> {
    check_interior(inst.volume, z)?;
    let gap = boundary_gap(inst, z, strategy, caps)?;
    let q = path_family(inst.graph, inst.volume, z, caps)?.q(&inst.disorder.kappas(inst.beta));
    Ok(LemmaReport {
        z,
        lhs: gap.gap,
        rhs: q.total,
        verdict: verdict(&gap, &q),
        q,
        gap,
    })
}

/// [`verify_lemma27`] for every interior vertex, sharing the configuration
/// sums.
pub fn verify_lemma27_all(inst: &Instance, strategy: BoundaryStrategy, caps: &Caps) -> Result<Vec<LemmaReport>> {
    let vol = inst.volume;
    if let Some(&z) = vol.interior.first() {
        check_interior(vol, z)?;
    } else {
        return Err(crate::error::Error::EmptyInterior);
    }
    let sys = LocalSystem::new(inst, true, caps)?;
    let kappas = inst.disorder.kappas(inst.beta);
    vol.interior
        .iter()
        .map(|&z| {
            let zl = local_site(vol, z)?;
            let gap = gap_on_view(&sys.view(zl), vol, inst.model.q(), z, strategy);
            let q = path_family(inst.graph, vol, z, caps)?.q(&kappas);
            Ok(LemmaReport {
                z,
                lhs: gap.gap,
                rhs: q.total,
                verdict: verdict(&gap, &q),
                q,
                gap,
            })
        })
        .collect()
}
