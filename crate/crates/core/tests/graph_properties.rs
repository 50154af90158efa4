use std::collections::BTreeMap;

use itertools::Itertools;
use proptest::prelude::*;

use tempgibbs::caps::Caps;
use tempgibbs::generators::{cycle, grid, repulsive_tree};
use tempgibbs::graph::{enumerate_connected_sets, simple_paths, Animal, Graph, SimplePath};
use tempgibbs::temperedness::{
    animal_average, check_repulsive, check_summability, check_tempered, count_paths_by_length,
    path_family_log_majorant, select_nk, verify_counting_bounds, CountFamily, CountingVerdict, DegreeMode,
    GrowthFunction, PhiFunction, RepulsivenessSpec, TemperednessVerdict,
};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
            let edges: Vec<_> = pairs
                .into_iter()
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(e, _)| e)
                .collect();
            Graph::with_vertices(n, &edges).unwrap()
        })
    })
}

fn arb_connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    // A random spanning tree plus random extra edges.
    (2..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(0..1000usize, n - 1),
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
        )
            .prop_map(move |(parents, extra)| {
                let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (parents[v - 1] % v, v)).collect();
                let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
                edges.extend(pairs.into_iter().zip(extra).filter(|(_, b)| *b).map(|(e, _)| e));
                Graph::with_vertices(n, &edges).unwrap()
            })
    })
}

/// Simple paths from x inside the ball of radius r, by length, via
/// permutations of the other ball vertices.
fn brute_path_counts(g: &Graph, x: usize, r: usize) -> BTreeMap<usize, u64> {
    let ball = g.ball_vertices(x, r).unwrap();
    let others: Vec<usize> = ball.iter().copied().filter(|&v| v != x).collect();
    let mut counts = BTreeMap::new();
    for len in 1..=others.len() {
        for perm in others.iter().copied().permutations(len) {
            let mut prev = x;
            if perm.iter().all(|&v| {
                let ok = g.has_edge(prev, v);
                prev = v;
                ok
            }) {
                *counts.entry(len).or_insert(0) += 1;
            }
        }
    }
    counts
}

fn is_connected_set(g: &Graph, set: &[usize]) -> bool {
    g.induced(set).to_graph().is_connected()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric(g in arb_connected_graph(9)) {
        let n = g.vertex_count();
        for x in 0..n {
            prop_assert_eq!(g.distance(x, x).unwrap(), 0);
            for y in 0..n {
                let dxy = g.distance(x, y).unwrap();
                prop_assert_eq!(dxy, g.distance(y, x).unwrap());
                prop_assert_eq!(dxy == 0, x == y);
                for z in 0..n {
                    prop_assert!(g.distance(x, z).unwrap() <= dxy + g.distance(y, z).unwrap());
                }
            }
        }
    }

    #[test]
    fn balls_are_nested(g in arb_graph(9), r in 0usize..5) {
        for x in 0..g.vertex_count() {
            let small = g.ball_vertices(x, r).unwrap();
            let big = g.ball_vertices(x, r + 1).unwrap();
            prop_assert!(small.iter().all(|v| big.contains(v)));
        }
    }

    #[test]
    fn boundaries_cover_leaving_edges(g in arb_graph(9), mask in any::<u16>()) {
        let delta: Vec<usize> = (0..g.vertex_count()).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!delta.is_empty());
        let vol = g.boundaries(&delta).unwrap();
        for &(u, v) in g.edges() {
            if vol.contains(u) != vol.contains(v) {
                let (inside, outside) = if vol.contains(u) { (u, v) } else { (v, u) };
                prop_assert!(vol.inner.contains(&inside));
                prop_assert!(vol.outer.contains(&outside));
            }
        }
    }

    #[test]
    fn path_counts_match_permutation_oracle(g in arb_graph(8), r in 1usize..4) {
        for x in 0..g.vertex_count() {
            let (counts, c) = count_paths_by_length(&g, x, r, &Caps::default()).unwrap();
            prop_assert!(c.is_complete());
            prop_assert_eq!(counts, brute_path_counts(&g, x, r));
        }
    }

    #[test]
    fn emitted_paths_are_simple_and_valid(g in arb_graph(8)) {
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        let e = simple_paths(&g, &all, 0, &all, g.vertex_count(), &Caps::default()).unwrap();
        for p in &e.items {
            prop_assert!(p.is_valid_in(&g));
            prop_assert!(p.vertices.iter().all_unique());
            let a = Animal::induced(&g, &p.vertices);
            prop_assert!(a.is_valid_in(&g));
        }
        // Lexicographic order of vertex sequences.
        prop_assert!(e.items.windows(2).all(|w| w[0].vertices < w[1].vertices));
    }

    #[test]
    fn connected_sets_match_subset_oracle(g in arb_graph(8)) {
        let n = g.vertex_count();
        let all: Vec<usize> = (0..n).collect();
        let mut got = Vec::new();
        enumerate_connected_sets(&g, &all, 1, n, &Caps::default(), |s| got.push(s.to_vec())).unwrap();
        got.sort();
        let mut want: Vec<Vec<usize>> = (1u32..1 << n)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| is_connected_set(&g, s))
            .collect();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn animal_average_is_at_most_g_of_max_degree(g in arb_graph(8)) {
        let n = g.vertex_count();
        let all: Vec<usize> = (0..n).collect();
        let top = g.max_degree().max(1) as f64;
        for gf in [GrowthFunction::Log, GrowthFunction::TLogT] {
            let cap = gf.eval(top);
            enumerate_connected_sets(&g, &all, 1, n, &Caps::default(), |s| {
                let avg = animal_average(&Animal::induced(&g, s), &gf, &g);
                assert!(avg <= cap + 1e-12, "{avg} > {cap}");
            })
            .unwrap();
        }
    }

    #[test]
    fn failed_verdict_carries_a_checkable_witness(g in arb_connected_graph(8), target in 0.0f64..0.8) {
        let rep = check_tempered(&g, &GrowthFunction::Log, 0, &[1, 2], Some(target), &Caps::default()).unwrap();
        if rep.verdict == TemperednessVerdict::Failed {
            let w = rep.witness.as_ref().expect("witness");
            prop_assert!(w.is_valid_in(&g));
            prop_assert!(animal_average(w, &GrowthFunction::Log, &g) > target);
        } else {
            prop_assert!(rep.gamma <= target);
        }
    }

    #[test]
    fn majorant_dominates_path_families(g in arb_connected_graph(8), len in 1usize..5) {
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        let paths = simple_paths(&g, &all, 0, &all, len, &Caps::default()).unwrap().items;
        let family: Vec<SimplePath> = paths.into_iter().filter(|p| p.len() == len).collect();
        if !family.is_empty() {
            let log_majorant = path_family_log_majorant(&g, &family);
            prop_assert!((family.len() as f64).ln() <= log_majorant + 1e-12);
        }
    }

    #[test]
    fn counting_bounds_follow_certified_windows(g in arb_connected_graph(7)) {
        // The path bound is checked in the e^{γ(N+1)} form the degree
        // product gives for every root and radius.
        let caps = Caps::default();
        for x in 0..g.vertex_count() {
            for nk in 1..=2 {
                let gp = check_tempered(&g, &GrowthFunction::Log, x, &[nk], None, &caps).unwrap();
                prop_assert_eq!(gp.verdict, TemperednessVerdict::CertifiedOnWindow);
                let rep = verify_counting_bounds(&g, x, nk, gp.gamma, CountFamily::Paths, &caps).unwrap();
                prop_assert_eq!(rep.shifted_verdict, CountingVerdict::Pass);
            }
        }
    }
}

#[test]
fn cycle_paths_respect_log_two() {
    // Every vertex of C20 has degree 2: two paths of each length from x.
    let c = cycle(20).unwrap();
    let rep = verify_counting_bounds(&c, 0, 5, 2f64.ln(), CountFamily::Paths, &Caps::default()).unwrap();
    assert_eq!(rep.verdict, CountingVerdict::Pass);
    assert!(rep.rows.iter().all(|r| r.count == 2));
}

#[test]
fn grid_center_animals_at_radius_two() {
    let g = grid(3, 3).unwrap();
    let caps = Caps::default();
    let gamma = check_tempered(&g, &GrowthFunction::TLogT, 4, &[2], None, &caps)
        .unwrap()
        .gamma;
    let rep = verify_counting_bounds(&g, 4, 2, gamma, CountFamily::Animals, &caps).unwrap();
    assert_eq!(rep.verdict, CountingVerdict::Pass);
    // Connected 9-vertex sets: just the grid; its spanning connected edge
    // subsets outnumber its spanning trees (192).
    let full = rep.rows.iter().find(|r| r.n == 9).unwrap();
    assert_eq!(full.induced_count, Some(1));
    assert!(full.count > 192);
}

#[test]
fn repulsive_pipeline_bounds_gamma() {
    // φ(t) = t, n* = 4, t_k = 2^{k-1}: a repulsive tree is tempered on the
    // selected radii with γ at most twice the summability partial sum.
    let phi = PhiFunction::identity();
    let tree = repulsive_tree(40, &[5, 6, 5, 4], &phi, 4).unwrap();
    let spec = RepulsivenessSpec::new(phi.clone(), 4, DegreeMode::Min).unwrap();
    assert!(check_repulsive(&tree.graph, &spec).holds);
    let t_seq: Vec<f64> = (0..31).map(|k| 2f64.powi(k)).collect();
    let sum = check_summability(&GrowthFunction::Log, &phi, &t_seq, 30, 1e-6).unwrap();
    for &(x, _) in &tree.hubs {
        let sel = select_nk(&tree.graph, x, &spec, 6).unwrap();
        assert!(!sel.radii.is_empty());
        let rep = check_tempered(&tree.graph, &GrowthFunction::Log, x, &sel.radii, None, &Caps::default()).unwrap();
        assert_eq!(rep.verdict, TemperednessVerdict::CertifiedOnWindow);
        assert!(rep.gamma <= sum.implied_gamma, "{} > {}", rep.gamma, sum.implied_gamma);
    }
}
