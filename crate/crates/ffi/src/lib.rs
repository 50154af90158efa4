//! C ABI over the tempgibbs library.
//!
//! Every fallible function returns a [`TgStatus`] and writes its result
//! through an out pointer. On failure a message is kept per thread and can
//! be read with [`tg_last_error`]. Graphs are opaque handles created by the
//! `tg_graph_*` constructors and released with [`tg_graph_free`].
//!
//! Enumerated parameters (`family`, `growth`, `model`) are passed as plain
//! integers holding a value of the matching enum and are range checked.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::{ptr, slice};

use tempgibbs::caps::Caps;
use tempgibbs::disorder::{self, sample_disorder, DisorderSpec, NormDistribution, SignMode};
use tempgibbs::gibbs::{verify_lemma27, BoundaryStrategy, Instance, SpinModel};
use tempgibbs::temperedness::{check_tempered, GrowthFunction, TemperednessVerdict};
use tempgibbs::uniqueness::{certificate, Regime};
use tempgibbs::{generators, io, Error, Graph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    VertexOutOfRange = 3,
    Unreachable = 4,
    CapExceeded = 5,
    TargetUnreachable = 6,
    MomentExplosion = 7,
    NotInterior = 8,
    Parse = 9,
    Io = 10,
    /// A Rust panic was caught at the boundary.
    Internal = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgFamily {
    Exponential = 0,
    Uniform = 1,
    HalfNormal = 2,
    Constant = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgGrowth {
    Log = 0,
    TLogT = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgModel {
    Ising = 0,
    ThreePoint = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgVerdict {
    Certified = 0,
    Failed = 1,
    Inconclusive = 2,
}

/// Opaque graph handle.
pub struct TgGraph {
    inner: Graph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TgTemperedness {
    pub gamma: f64,
    pub verdict: TgVerdict,
    /// Vertices in the failing animal, 0 if there is none.
    pub witness_size: usize,
    /// Average of the failing animal, NaN if there is none.
    pub witness_average: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TgCertificate {
    pub kappa: f64,
    /// kappa * exp(gamma)
    pub product: f64,
    /// NaN when the law never reaches exp(-gamma).
    pub beta_star: f64,
    pub certified: bool,
    /// product^n_k / (1 - product); NaN outside the regime.
    pub tail_bound: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TgLemma {
    pub lhs: f64,
    pub rhs: f64,
    pub paths: usize,
    pub holds: bool,
}

struct Fail {
    status: TgStatus,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::VertexOutOfRange { .. } => TgStatus::VertexOutOfRange,
            Error::Unreachable { .. } => TgStatus::Unreachable,
            Error::CapExceeded { .. } => TgStatus::CapExceeded,
            Error::TargetUnreachable { .. } => TgStatus::TargetUnreachable,
            Error::MomentExplosion { .. } => TgStatus::MomentExplosion,
            Error::NotInterior(_) | Error::EmptyInterior => TgStatus::NotInterior,
            Error::Parse { .. } => TgStatus::Parse,
            Error::Io(_) => TgStatus::Io,
            _ => TgStatus::InvalidArgument,
        };
        Fail {
            status,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Fail {
    Fail {
        status: TgStatus::InvalidArgument,
        message: message.into(),
    }
}

fn null(what: &str) -> Fail {
    Fail {
        status: TgStatus::NullPointer,
        message: format!("{what} is null"),
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure, and turns panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TgStatus::Ok,
        Ok(Err(fail)) => {
            set_error(fail.message);
            fail.status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            TgStatus::Internal
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn graph_ref<'a>(g: *const TgGraph) -> Result<&'a Graph, Fail> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| null("graph"))
}

unsafe fn array<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

fn distribution(family: i32, param: f64) -> Result<NormDistribution, Fail> {
    let d = match family {
        0 => NormDistribution::exponential(param),
        1 => NormDistribution::uniform(param),
        2 => NormDistribution::half_normal(param),
        3 => NormDistribution::constant(param),
        _ => return Err(invalid(format!("unknown distribution family {family}"))),
    };
    Ok(d?)
}

fn emit_graph(g: Graph, out: *mut *mut TgGraph) -> Result<(), Fail> {
    let slot = unsafe { out_ref(out, "out")? };
    *slot = Box::into_raw(Box::new(TgGraph { inner: g }));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next `tg_*` call on the same thread.
#[no_mangle]
pub extern "C" fn tg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn tg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Graph on vertices 0..n with `edge_count` edges given as consecutive
/// pairs in `edges` (2 * edge_count entries).
#[no_mangle]
pub unsafe extern "C" fn tg_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut TgGraph,
) -> TgStatus {
    guard(|| {
        let flat = array(
            edges,
            edge_count.checked_mul(2).ok_or_else(|| invalid("too many edges"))?,
            "edges",
        )?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        emit_graph(Graph::with_vertices(n, &pairs)?, out)
    })
}

/// Parses a text edge list. Vertex names are mapped to ids in sorted order
/// (numerically when every name is an integer).
#[no_mangle]
pub unsafe extern "C" fn tg_graph_parse_edge_list(text: *const c_char, out: *mut *mut TgGraph) -> TgStatus {
    guard(|| {
        let named = io::parse_edge_list(string(text, "text")?)?;
        emit_graph(named.graph, out)
    })
}

/// Generated family: `chain:N`, `cycle:N`, `grid:AxB`, `star:K`,
/// `growing-tree:D` or `repulsive-tree:SPINE:D1/D2/...:NSTAR:PHI`.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_generate(kind: *const c_char, out: *mut *mut TgGraph) -> TgStatus {
    guard(|| emit_graph(generators::generate(string(kind, "kind")?)?, out))
}

/// Releases a graph. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_free(g: *mut TgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_vertex_count(g: *const TgGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.vertex_count())
}

/// 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_edge_count(g: *const TgGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.edge_count())
}

#[no_mangle]
pub unsafe extern "C" fn tg_graph_degree(g: *const TgGraph, v: usize, out: *mut usize) -> TgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if v >= g.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                len: g.vertex_count(),
            }
            .into());
        }
        *out_ref(out, "out")? = g.degree(v);
        Ok(())
    })
}

/// Graph distance; `Unreachable` when x and y lie in different components.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_distance(g: *const TgGraph, x: usize, y: usize, out: *mut usize) -> TgStatus {
    guard(|| {
        let d = graph_ref(g)?.distance(x, y)?;
        *out_ref(out, "out")? = d;
        Ok(())
    })
}

/// Largest animal average of g(degree) over the balls around `root` with
/// the given strictly increasing radii. `gamma_target` NaN means none;
/// `max_animals` 0 means the default cap.
#[no_mangle]
pub unsafe extern "C" fn tg_check_tempered(
    g: *const TgGraph,
    growth: i32,
    root: usize,
    radii: *const usize,
    radii_len: usize,
    gamma_target: f64,
    max_animals: u64,
    out: *mut TgTemperedness,
) -> TgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let gf = match growth {
            0 => GrowthFunction::Log,
            1 => GrowthFunction::TLogT,
            _ => return Err(invalid(format!("unknown growth function {growth}"))),
        };
        let radii = array(radii, radii_len, "radii")?;
        let caps = if max_animals == 0 {
            Caps::default()
        } else {
            Caps::items(max_animals)
        };
        let target = (!gamma_target.is_nan()).then_some(gamma_target);
        let rep = check_tempered(g, &gf, root, radii, target, &caps)?;
        *out_ref(out, "out")? = TgTemperedness {
            gamma: rep.gamma,
            verdict: match rep.verdict {
                TemperednessVerdict::CertifiedOnWindow => TgVerdict::Certified,
                TemperednessVerdict::Failed => TgVerdict::Failed,
                TemperednessVerdict::Inconclusive => TgVerdict::Inconclusive,
            },
            witness_size: rep.witness.as_ref().map_or(0, |w| w.vertices.len()),
            witness_average: rep.witness_average.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// E[exp(4 beta |W|)] - 1 for the given norm law.
#[no_mangle]
pub unsafe extern "C" fn tg_mean_kappa(family: i32, param: f64, beta: f64, out: *mut f64) -> TgStatus {
    guard(|| {
        let k = disorder::mean_kappa(&distribution(family, param)?, beta)?;
        *out_ref(out, "out")? = k;
        Ok(())
    })
}

/// The beta solving mean kappa = exp(-gamma), to within `tol`.
#[no_mangle]
pub unsafe extern "C" fn tg_beta_star(family: i32, param: f64, gamma: f64, tol: f64, out: *mut f64) -> TgStatus {
    guard(|| {
        let b = disorder::beta_star(&distribution(family, param)?, gamma, tol)?;
        *out_ref(out, "out")? = b.beta;
        Ok(())
    })
}

/// Uniqueness certificate at `beta` with the tail bound for radius `n_k`.
#[no_mangle]
pub unsafe extern "C" fn tg_certificate(
    gamma: f64,
    family: i32,
    param: f64,
    beta: f64,
    n_k: usize,
    out: *mut TgCertificate,
) -> TgStatus {
    guard(|| {
        let c = certificate(gamma, &distribution(family, param)?, beta, &[n_k])?;
        *out_ref(out, "out")? = TgCertificate {
            kappa: c.kappa,
            product: c.product,
            beta_star: c.beta_star.unwrap_or(f64::NAN),
            certified: c.verdict == Regime::Certified,
            tail_bound: c.tail_bounds.first().map_or(f64::NAN, |t| t.1),
        };
        Ok(())
    })
}

/// Exhaustive boundary gap at `z` against the path sum, for the volume
/// given by its vertex list and one disorder draw.
#[no_mangle]
pub unsafe extern "C" fn tg_verify_lemma27(
    g: *const TgGraph,
    volume: *const usize,
    volume_len: usize,
    z: usize,
    model: i32,
    family: i32,
    param: f64,
    rademacher: bool,
    seed: u64,
    beta: f64,
    out: *mut TgLemma,
) -> TgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let vol = g.boundaries(array(volume, volume_len, "volume")?)?;
        let model = match model {
            0 => SpinModel::ising(),
            1 => SpinModel::three_point(),
            _ => return Err(invalid(format!("unknown spin model {model}"))),
        };
        let spec = DisorderSpec {
            distribution: distribution(family, param)?,
            sign_mode: if rademacher {
                SignMode::Rademacher
            } else {
                SignMode::AllPositive
            },
            seed,
        };
        let w = sample_disorder(g, &spec);
        let inst = Instance {
            graph: g,
            volume: &vol,
            model: &model,
            disorder: &w,
            beta,
        };
        let rep = verify_lemma27(&inst, z, BoundaryStrategy::Exhaustive, &Caps::default())?;
        *out_ref(out, "out")? = TgLemma {
            lhs: rep.lhs,
            rhs: rep.rhs,
            paths: rep.q.paths,
            holds: rep.holds(),
        };
        Ok(())
    })
}
