//! Brute-force check of the edge-subset expansion of M(h|ξ) − M(h|η).
//!
//! With σ, σ̃ two copies of the configuration on Δ and pair states
//! p = (s, s̃), the product Z̃(ξ) Z̃(η) (M(ξ) − M(η)) is
//!
//!   Σ_{E′ ⊆ E_Δ} Σ_{σ,σ̃} (h(σ(z)) − h(σ̃(z))) Γ(E′) Ψ_Δ(ξ, η) χ_Δ(σ) χ_Δ(σ̃),
//!
//! Γ(E′) = Π_{E′} Γ_xy, Γ_xy = exp(β[W_xy(σ) + ‖W_xy‖] + β[W_xy(σ̃) + ‖W_xy‖]) − 1.
//!
//! For a fixed E′ the double sum factorizes over the connected components of
//! (Δ, E′); each component is summed by variable elimination on the pair
//! states and memoized by its edge set.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::q::path_family;
use super::{local_site, BoundaryCondition, Instance, LocalSystem};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::graph::UnionFind;

/// Absolute tolerance for the identity and the vanishing terms.
pub const EQUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub z: usize,
    /// M(h|ξ) − M(h|η)
    pub direct: f64,
    /// Σ_{E′} T(E′) / (Z̃(ξ) Z̃(η))
    pub expansion: f64,
    pub defect: f64,
    pub subsets: u64,
    pub components_evaluated: usize,
    /// min over edges and pair states of Γ_xy; must be ≥ 0.
    pub gamma_min: f64,
    /// max over edges of (max Γ_xy − κ_xy); must be ≤ 0 up to rounding.
    pub gamma_excess: f64,
    /// max over simple paths z → ∂⁻Δ of (max Γ(E_ϑ) − Π κ).
    pub path_excess: f64,
    pub paths_checked: usize,
    /// Largest |T(E′)| / (Z̃(ξ) Z̃(η)) over E′ whose component of z misses
    /// ∂⁻Δ; these terms vanish by antisymmetry.
    pub max_vanishing_term: f64,
}

impl ExpansionReport {
    pub fn holds(&self) -> bool {
        self.defect <= EQUALITY_TOL
            && self.gamma_min >= 0.0
            && self.gamma_excess <= 1e-12
            && self.path_excess <= 1e-12
            && self.max_vanishing_term <= EQUALITY_TOL
    }
}

struct Factor {
    /// Sorted; table index is Σ_i state(vars[i]) d^i.
    vars: Vec<usize>,
    table: Vec<f64>,
}

/// Sums the product of all factors over all states, eliminating the
/// variable with the smallest resulting scope first.
fn contract(mut factors: Vec<Factor>, nvars: usize, d: usize) -> f64 {
    let mut remaining: Vec<usize> = (0..nvars).collect();
    while !remaining.is_empty() {
        let (pos, v, full) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &v)| {
                let mut scope: Vec<usize> = factors
                    .iter()
                    .filter(|f| f.vars.contains(&v))
                    .flat_map(|f| f.vars.iter().copied())
                    .chain(std::iter::once(v))
                    .collect();
                scope.sort_unstable();
                scope.dedup();
                (pos, v, scope)
            })
            .min_by_key(|t| t.2.len())
            .expect("remaining is nonempty");
        remaining.swap_remove(pos);
        let (touch, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = rest;

        // Odometer over the scope with v as the fastest digit, so each
        // output cell is one inner sum over v.
        let mut order: Vec<usize> = full.iter().copied().filter(|&u| u != v).collect();
        order.insert(0, v);
        let stride_in = |f: &Factor, u: usize| f.vars.iter().position(|&w| w == u).map_or(0, |p| d.pow(p as u32));
        let strides: Vec<Vec<usize>> = order
            .iter()
            .map(|&u| touch.iter().map(|f| stride_in(f, u)).collect())
            .collect();
        let out_vars: Vec<usize> = full.iter().copied().filter(|&u| u != v).collect();
        let out_stride: Vec<usize> = order[1..]
            .iter()
            .map(|u| d.pow(out_vars.iter().position(|w| w == u).expect("in scope") as u32))
            .collect();
        let mut out = vec![0.0; d.pow(out_vars.len() as u32)];
        let mut idx = vec![0usize; touch.len()];
        let mut digits = vec![0usize; order.len()];
        let mut oi = 0usize;
        let cells = out.len();
        for _ in 0..cells {
            let mut acc = 0.0;
            for _ in 0..d {
                let mut prod = 1.0;
                for (f, &i) in touch.iter().zip(&idx) {
                    prod *= f.table[i];
                }
                acc += prod;
                for (i, st) in idx.iter_mut().zip(&strides[0]) {
                    *i += st;
                }
            }
            for (i, st) in idx.iter_mut().zip(&strides[0]) {
                *i -= d * st;
            }
            out[oi] = acc;
            for k in 1..order.len() {
                digits[k] += 1;
                if digits[k] < d {
                    for (i, st) in idx.iter_mut().zip(&strides[k]) {
                        *i += st;
                    }
                    oi += out_stride[k - 1];
                    break;
                }
                digits[k] = 0;
                for (i, st) in idx.iter_mut().zip(&strides[k]) {
                    *i -= (d - 1) * st;
                }
                oi -= (d - 1) * out_stride[k - 1];
            }
        }
        factors.push(Factor {
            vars: out_vars,
            table: out,
        });
    }
    factors.iter().map(|f| f.table[0]).product()
}

/// Σ over pair states of Π unary Π edge factors on a small graph. Sites of
/// degree one are folded into their neighbor and sites of degree two into
/// an edge between their neighbors (parallel edges multiply); whatever core
/// remains goes to variable elimination.
///
/// Edge tables are row-major in the first endpoint: `t[pa * d + pb]`.
fn reduce_and_contract(mut unary: Vec<Vec<f64>>, pairs: Vec<(usize, usize, Vec<f64>)>, d: usize) -> f64 {
    let n = unary.len();
    let mut alive = vec![true; n];
    // Keyed by (lo, hi), table indexed [p_lo * d + p_hi].
    let mut edges: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    let orient = |a: usize, b: usize, t: Vec<f64>| -> ((usize, usize), Vec<f64>) {
        if a < b {
            ((a, b), t)
        } else {
            ((b, a), (0..d * d).map(|i| t[(i % d) * d + i / d]).collect())
        }
    };
    let insert = |edges: &mut BTreeMap<(usize, usize), Vec<f64>>, a: usize, b: usize, t: Vec<f64>| {
        let (key, t) = orient(a, b, t);
        match edges.get_mut(&key) {
            Some(old) => old.iter_mut().zip(&t).for_each(|(x, y)| *x *= y),
            None => {
                edges.insert(key, t);
            }
        }
    };
    for (a, b, t) in pairs {
        insert(&mut edges, a, b, t);
    }
    // Table of edge (v, u) read from v's side: t[pv * d + pu].
    let from = |edges: &BTreeMap<(usize, usize), Vec<f64>>, v: usize, u: usize| -> Vec<f64> {
        if v < u {
            edges[&(v, u)].clone()
        } else {
            let t = &edges[&(u, v)];
            (0..d * d).map(|i| t[(i % d) * d + i / d]).collect()
        }
    };
    let mut scalar = 1.0;
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let nbrs: Vec<usize> = edges
                .keys()
                .filter_map(|&(a, b)| {
                    if a == v {
                        Some(b)
                    } else if b == v {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect();
            match nbrs.as_slice() {
                [] => {
                    scalar *= unary[v].iter().sum::<f64>();
                }
                [u] => {
                    let t = from(&edges, *u, v);
                    edges.remove(&(v.min(*u), v.max(*u)));
                    for pu in 0..d {
                        let s: f64 = (0..d).map(|pv| t[pu * d + pv] * unary[v][pv]).sum();
                        unary[*u][pu] *= s;
                    }
                }
                [a, b] => {
                    let ta = from(&edges, *a, v);
                    let tb = from(&edges, v, *b);
                    edges.remove(&(v.min(*a), v.max(*a)));
                    edges.remove(&(v.min(*b), v.max(*b)));
                    let mut t = vec![0.0; d * d];
                    for pa in 0..d {
                        for pv in 0..d {
                            let w = ta[pa * d + pv] * unary[v][pv];
                            if w != 0.0 {
                                for pb in 0..d {
                                    t[pa * d + pb] += w * tb[pv * d + pb];
                                }
                            }
                        }
                    }
                    insert(&mut edges, *a, *b, t);
                }
                _ => continue,
            }
            alive[v] = false;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if core.is_empty() {
        return scalar;
    }
    let pos = |v: usize| core.binary_search(&v).expect("core site");
    let mut factors: Vec<Factor> = core
        .iter()
        .enumerate()
        .map(|(k, &v)| Factor {
            vars: vec![k],
            table: std::mem::take(&mut unary[v]),
        })
        .collect();
    for ((a, b), t) in edges {
        // Factor tables put the first variable in the low digit.
        let table = (0..d * d).map(|i| t[(i % d) * d + i / d]).collect();
        factors.push(Factor {
            vars: vec![pos(a), pos(b)],
            table,
        });
    }
    scalar * contract(factors, core.len(), d)
}

/// Checks the expansion identity for one boundary pair (ξ, η), together
/// with Γ_xy ≥ 0, Γ_xy ≤ κ_xy and Γ(E_ϑ) ≤ Π κ on every path.
pub fn verify_expansion_identity(
    inst: &Instance,
    z: usize,
    xi: &BoundaryCondition,
    eta: &BoundaryCondition,
    caps: &Caps,
) -> Result<ExpansionReport> {
    let vol = inst.volume;
    let zl = local_site(vol, z)?;
    let sys = LocalSystem::new(inst, true, caps)?;
    let q = sys.q;
    let n = sys.n;
    let d = q * q;
    let xi_v = xi.aligned(vol, q)?;
    let eta_v = eta.aligned(vol, q)?;

    let view = sys.view(zl);
    let (lz_xi, m_xi) = view.evaluate(&xi_v);
    let (lz_eta, m_eta) = view.evaluate(&eta_v);
    let direct = m_xi - m_eta;

    // Interior edges as (local a, local b, edge id).
    let mut edges = Vec::new();
    for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
        if let (Some(a), Some(b)) = (vol.local_index(u), vol.local_index(v)) {
            edges.push((a, b, e));
        }
    }
    let m = edges.len();
    let subsets = 1u128 << m.min(127);
    if m >= 64 || subsets > u128::from(caps.max_items) {
        return Err(Error::CapExceeded {
            what: "edge-subset expansion",
            required: subsets,
            cap: u128::from(caps.max_items),
        });
    }

    let beta = inst.beta;
    let h = &inst.model.observable;
    let f_xi = sys.field(&xi_v);
    let f_eta = sys.field(&eta_v);
    let mut log_scale = 0.0;
    let unary: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let chi = inst.model.chi(vol.delta[i]);
            let lu: Vec<f64> = (0..d)
                .map(|p| {
                    let (s, t) = (p / q, p % q);
                    chi[s].ln() + chi[t].ln() + f_xi[i][s] + f_eta[i][t]
                })
                .collect();
            let mx = lu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            log_scale += mx;
            lu.iter().map(|l| (l - mx).exp()).collect()
        })
        .collect();
    let diff: Vec<f64> = (0..d).map(|p| h[p / q] - h[p % q]).collect();

    let kappas = inst.disorder.kappas(beta);
    let mut gamma_min = f64::INFINITY;
    let mut gamma_excess = f64::NEG_INFINITY;
    let gammas: Vec<Vec<f64>> = edges
        .iter()
        .map(|&(_, _, e)| {
            let j = inst.coupling(e);
            let w = inst.disorder.norms[e];
            let mut g = vec![0.0; d * d];
            for pa in 0..d {
                for pb in 0..d {
                    let (sa, ta, sb, tb) = (pa / q, pa % q, pb / q, pb % q);
                    g[pa * d + pb] = (beta * (j[sa * q + sb] + w) + beta * (j[ta * q + tb] + w)).exp_m1();
                }
            }
            let (lo, hi) = g.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
            gamma_min = gamma_min.min(lo);
            gamma_excess = gamma_excess.max(hi - kappas[e]);
            g
        })
        .collect();
    if m == 0 {
        gamma_min = 0.0;
        gamma_excess = 0.0;
    }
    let gamma_by_edge: HashMap<usize, usize> = edges.iter().enumerate().map(|(k, &(_, _, e))| (e, k)).collect();

    // Path products: max over pair states of Π Γ along the path.
    let mut path_excess = f64::NEG_INFINITY;
    let mut paths_checked = 0;
    if vol.is_interior(z) {
        let family = path_family(inst.graph, vol, z, caps)?;
        for (_, path) in &family.paths {
            let mut best = vec![1.0; d];
            for &e in path {
                let g = &gammas[gamma_by_edge[&e]];
                best = (0..d)
                    .map(|pb| (0..d).map(|pa| best[pa] * g[pa * d + pb]).fold(0.0, f64::max))
                    .collect();
            }
            let top = best.iter().copied().fold(0.0, f64::max);
            let bound: f64 = path.iter().map(|&e| kappas[e]).product();
            path_excess = path_excess.max((top - bound) / bound.max(1.0));
            paths_checked += 1;
        }
    }
    if paths_checked == 0 {
        path_excess = 0.0;
    }

    let isolated: Vec<f64> = (0..n)
        .map(|i| (0..d).map(|p| unary[i][p] * if i == zl { diff[p] } else { 1.0 }).sum())
        .collect();
    let mut memo: HashMap<u64, f64> = HashMap::new();
    let mut component = |mask: u64| -> f64 {
        *memo.entry(mask).or_insert_with(|| {
            let mut sites: Vec<usize> = (0..m)
                .filter(|k| mask >> k & 1 == 1)
                .flat_map(|k| [edges[k].0, edges[k].1])
                .collect();
            sites.sort_unstable();
            sites.dedup();
            let var = |i: usize| sites.binary_search(&i).expect("site of component");
            let units: Vec<Vec<f64>> = sites
                .iter()
                .map(|&i| {
                    (0..d)
                        .map(|p| unary[i][p] * if i == zl { diff[p] } else { 1.0 })
                        .collect()
                })
                .collect();
            let pairs: Vec<(usize, usize, Vec<f64>)> = (0..m)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| (var(edges[k].0), var(edges[k].1), gammas[k].clone()))
                .collect();
            reduce_and_contract(units, pairs, d)
        })
    };

    let inner_local: Vec<usize> = vol
        .inner
        .iter()
        .map(|&x| vol.local_index(x).expect("inner in volume"))
        .collect();
    let norm = (log_scale - lz_xi - lz_eta).exp();
    let mut total = 0.0;
    let mut max_vanishing_term: f64 = 0.0;
    let mut comp_edges = vec![0u64; n];
    for mask in 0..(1u64 << m) {
        let mut uf = UnionFind::new(n);
        for k in (0..m).filter(|k| mask >> k & 1 == 1) {
            uf.union(edges[k].0, edges[k].1);
        }
        comp_edges.iter_mut().for_each(|c| *c = 0);
        for k in (0..m).filter(|k| mask >> k & 1 == 1) {
            let r = uf.find(edges[k].0);
            comp_edges[r] |= 1 << k;
        }
        let mut term = 1.0;
        for v in 0..n {
            if uf.find(v) == v {
                term *= if comp_edges[v] == 0 {
                    isolated[v]
                } else {
                    component(comp_edges[v])
                };
            }
        }
        total += term;
        let zroot = uf.find(zl);
        if !inner_local.iter().any(|&x| uf.find(x) == zroot) {
            max_vanishing_term = max_vanishing_term.max((term * norm).abs());
        }
    }
    let expansion = total * norm;

    Ok(ExpansionReport {
        z,
        direct,
        expansion,
        defect: (direct - expansion).abs(),
        subsets: 1u64 << m,
        components_evaluated: memo.len(),
        gamma_min,
        gamma_excess,
        path_excess,
        paths_checked,
        max_vanishing_term,
    })
}
