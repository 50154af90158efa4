//! Deterministic graph families.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::temperedness::{check_repulsive, DegreeMode, PhiFunction, RepulsivenessSpec};

/// The path P_n on 0..n.
pub fn chain(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("chain needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::with_vertices(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument("cycle needs n >= 3".into()));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::with_vertices(n, &edges)
}

/// a rows by b columns; vertex r·b + c.
pub fn grid(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("grid sides must be positive".into()));
    }
    let mut edges = Vec::new();
    for r in 0..a {
        for c in 0..b {
            let v = r * b + c;
            if c + 1 < b {
                edges.push((v, v + 1));
            }
            if r + 1 < a {
                edges.push((v, v + b));
            }
        }
    }
    Graph::with_vertices(a * b, &edges)
}

/// K_{1,k}: center 0, leaves 1..=k.
pub fn star(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidArgument("star needs k >= 1".into()));
    }
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Graph::with_vertices(k + 1, &edges)
}

/// Rooted tree where the root has 2 children and every vertex at depth
/// d ≥ 1 has d + 2 children, down to `depth`. Vertices are numbered in
/// breadth-first order; layer d has (d + 1)! vertices.
pub fn growing_tree(depth: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut layer = vec![0usize];
    let mut next_id = 1;
    for d in 0..depth {
        let children = d + 2;
        let mut next = Vec::with_capacity(layer.len() * children);
        for &v in &layer {
            for _ in 0..children {
                edges.push((v, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        layer = next;
    }
    Graph::with_vertices(next_id, &edges)
}

/// A spine with hubs placed greedily so that ρ(x, y) ≥ φ(min degree) for
/// every pair of hubs whose smaller degree is at least n*.
#[derive(Debug, Clone, PartialEq)]
pub struct RepulsiveTree {
    pub graph: Graph,
    /// (spine position, degree) per hub.
    pub hubs: Vec<(usize, usize)>,
}

/// Hubs are placed left to right at the first spine position (after the
/// previous hub) far enough from every earlier hub; each hub gets pendant
/// leaves up to its degree. Spine vertex i has id i; leaves follow.
pub fn repulsive_tree(spine: usize, degrees: &[usize], phi: &PhiFunction, n_star: usize) -> Result<RepulsiveTree> {
    if spine < 2 {
        return Err(Error::InvalidArgument("spine needs at least 2 vertices".into()));
    }
    if n_star <= 2 {
        // Every spine vertex would count as a hub.
        return Err(Error::InvalidArgument("n* must exceed the spine degree 2".into()));
    }
    let mut hubs: Vec<(usize, usize)> = Vec::new();
    let mut pos = 1;
    for (i, &d) in degrees.iter().enumerate() {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("hub {i} has degree {d} < 2")));
        }
        let fits = |p: usize| {
            hubs.iter().all(|&(q, dq)| {
                let m = d.min(dq);
                m < n_star || (p - q) as f64 >= phi.eval(m as f64)
            })
        };
        while pos + 1 < spine && !fits(pos) {
            pos += 1;
        }
        if pos + 1 >= spine {
            return Err(Error::InvalidArgument(format!(
                "infeasible repulsive spec: hub {i} (degree {d}) cannot be placed on a spine of {spine}"
            )));
        }
        hubs.push((pos, d));
        pos += 1;
    }
    let mut edges: Vec<(usize, usize)> = (1..spine).map(|i| (i - 1, i)).collect();
    let mut next = spine;
    for &(p, d) in &hubs {
        for _ in 2..d {
            edges.push((p, next));
            next += 1;
        }
    }
    let graph = Graph::with_vertices(next, &edges)?;
    let spec = RepulsivenessSpec::new(phi.clone(), n_star, DegreeMode::Min)?;
    let report = check_repulsive(&graph, &spec);
    if !report.holds {
        return Err(Error::InvalidArgument(format!(
            "generated tree is not repulsive: {:?}",
            report.witnesses.first()
        )));
    }
    Ok(RepulsiveTree { graph, hubs })
}

/// Parses `chain:N`, `cycle:N`, `grid:AxB`, `star:K`, `growing-tree:D` and
/// `repulsive-tree:SPINE:D1/D2/...:NSTAR:PHI` (PHI as in
/// [`PhiFunction::parse`]).
pub fn generate(kind: &str) -> Result<Graph> {
    let bad = || Error::InvalidArgument(format!("unrecognized generator {kind:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (name, rest) = kind.split_once(':').ok_or_else(bad)?;
    match name {
        "chain" => chain(num(rest)?),
        "cycle" => cycle(num(rest)?),
        "grid" => {
            let (a, b) = rest.split_once('x').ok_or_else(bad)?;
            grid(num(a)?, num(b)?)
        }
        "star" => star(num(rest)?),
        "growing-tree" => growing_tree(num(rest)?),
        "repulsive-tree" => {
            let mut parts = rest.splitn(4, ':');
            let spine = num(parts.next().ok_or_else(bad)?)?;
            let degrees = parts
                .next()
                .ok_or_else(bad)?
                .split('/')
                .map(num)
                .collect::<Result<Vec<_>>>()?;
            let n_star = num(parts.next().ok_or_else(bad)?)?;
            let phi = PhiFunction::parse(parts.next().ok_or_else(bad)?)?;
            Ok(repulsive_tree(spine, &degrees, &phi, n_star)?.graph)
        }
        _ => Err(bad()),
    }
}
