//! Acceptance suite. Runs as a plain binary so that every criterion prints
//! exactly one PASS/FAIL line; the process fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use tempgibbs::caps::Caps;
use tempgibbs::disorder::{beta_star, sample_disorder, DisorderSample, DisorderSpec, NormDistribution, SignMode};
use tempgibbs::generators::{chain, cycle, grid, growing_tree};
use tempgibbs::gibbs::{
    boundary_gap, compute_q, dlr_consistency_check, evaluate, evaluate_with, hamiltonian, verify_expansion_identity,
    verify_lemma27_all, BoundaryCondition, BoundaryStrategy, GapMode, Instance, LemmaVerdict, SpinModel,
};
use tempgibbs::graph::{enumerate_connected_sets, Animal, Graph, Volume};
use tempgibbs::temperedness::{
    animal_average, check_tempered, verify_counting_bounds, verify_separation_bound, CountFamily, CountingVerdict,
    GrowthFunction,
};
use tempgibbs::uniqueness::decay_experiment;

const BETAS: [f64; 3] = [0.1, 0.3, 0.7];
const SAMPLES: u64 = 50;
const SLACK: f64 = 1e-9;
const EQ_TOL: f64 = 1e-10;
const DEGENERACY_TOL: f64 = 1e-12;

struct Verdict {
    pass: bool,
    detail: String,
}

struct Case {
    name: &'static str,
    graph: Graph,
    volumes: Vec<Volume>,
}

/// K₁,₅ centered at 3 inside the chain 0..=6, with leaves 7, 8, 9.
fn star_in_chain() -> Graph {
    let mut e: Vec<(usize, usize)> = (0..6).map(|i| (i, i + 1)).collect();
    e.extend([(3, 7), (3, 8), (3, 9)]);
    Graph::from_edges(&e).unwrap()
}

/// Balls of radius 1 and 2 around every vertex with nonempty interior.
fn ball_volumes(g: &Graph) -> Vec<Volume> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in 0..g.vertex_count() {
        for r in 1..=2 {
            let ball = g.ball_vertices(x, r).unwrap();
            if seen.insert(ball.clone()) {
                let vol = g.boundaries(&ball).unwrap();
                if !vol.interior.is_empty() {
                    out.push(vol);
                }
            }
        }
    }
    out
}

fn suite() -> Vec<Case> {
    [
        ("P5", chain(5).unwrap()),
        ("C6", cycle(6).unwrap()),
        ("grid3x3", grid(3, 3).unwrap()),
        ("star-in-chain", star_in_chain()),
    ]
    .into_iter()
    .map(|(name, graph)| Case {
        name,
        volumes: ball_volumes(&graph),
        graph,
    })
    .collect()
}

fn models() -> Vec<SpinModel> {
    vec![SpinModel::ising(), SpinModel::three_point()]
}

/// 50 Rademacher-signed draws from constant(1) and from exponential(8).
fn disorder_samples(g: &Graph) -> Vec<DisorderSample> {
    let laws = [
        NormDistribution::constant(1.0).unwrap(),
        NormDistribution::exponential(8.0).unwrap(),
    ];
    let mut out = Vec::new();
    for (i, law) in laws.into_iter().enumerate() {
        for s in 0..SAMPLES {
            let spec = DisorderSpec {
                distribution: law,
                sign_mode: SignMode::Rademacher,
                seed: 1000 * i as u64 + s,
            };
            out.push(sample_disorder(g, &spec));
        }
    }
    out
}

/// Calls `f` on every (case, volume, model, beta, disorder) of the suite.
fn for_each_instance(betas: &[f64], mut f: impl FnMut(&str, &Instance)) {
    for case in suite() {
        let samples = disorder_samples(&case.graph);
        for vol in &case.volumes {
            for model in &models() {
                for &beta in betas {
                    for w in &samples {
                        let inst = Instance {
                            graph: &case.graph,
                            volume: vol,
                            model,
                            disorder: w,
                            beta,
                        };
                        f(case.name, &inst);
                    }
                }
            }
        }
    }
}

fn criterion_1() -> Verdict {
    let caps = Caps::default();
    let mut checked = 0usize;
    let mut pairs = 0u64;
    let mut failures = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for_each_instance(&BETAS, |name, inst| {
        for r in verify_lemma27_all(inst, BoundaryStrategy::Exhaustive, &caps).unwrap() {
            checked += 1;
            pairs += r.gap.evaluated * r.gap.evaluated;
            worst = worst.max(r.lhs - r.rhs);
            let exhaustive = r.gap.mode == GapMode::Exhaustive && r.q.completeness.is_complete();
            if !(exhaustive && r.verdict == LemmaVerdict::Holds && r.lhs <= r.rhs + SLACK) && failures.len() < 5 {
                failures.push(format!(
                    "{name} Δ={:?} z={} lhs={} rhs={}",
                    inst.volume.delta, r.z, r.lhs, r.rhs
                ));
            }
        }
    });
    Verdict {
        pass: failures.is_empty(),
        detail: format!(
            "{checked} (instance, z) checks over {pairs} boundary pairs, max lhs - rhs = {worst:.3e}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    }
}

fn criterion_2() -> Verdict {
    let caps = Caps::default();
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for_each_instance(&BETAS, |name, inst| {
        let vol = inst.volume;
        let interior_edges = inst
            .graph
            .edges()
            .iter()
            .filter(|&&(u, v)| vol.contains(u) && vol.contains(v))
            .count();
        if interior_edges > 12 {
            return;
        }
        for &z in &vol.interior {
            let gap = boundary_gap(inst, z, BoundaryStrategy::Exhaustive, &caps).unwrap();
            let r = verify_expansion_identity(inst, z, &gap.argmax, &gap.argmin, &caps).unwrap();
            checked += 1;
            worst = worst.max(r.defect);
            if !(r.defect <= EQ_TOL && r.holds()) && failures.len() < 5 {
                failures.push(format!("{name} Δ={:?} z={z} defect={:e}", vol.delta, r.defect));
            }
        }
    });
    Verdict {
        pass: failures.is_empty(),
        detail: format!(
            "{checked} identities at the extremal boundary pair, max defect = {worst:.3e}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    }
}

/// Every nonempty subset of `delta`.
fn subsets(delta: &[usize]) -> Vec<Vec<usize>> {
    (1u32..1 << delta.len())
        .map(|mask| {
            delta
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

fn criterion_3() -> Verdict {
    let caps = Caps::default();
    let cases: Vec<(&str, Graph, Vec<Vec<usize>>)> = vec![
        (
            "P5",
            chain(5).unwrap(),
            vec![vec![1, 2, 3], vec![0, 1, 2, 3], vec![0, 1, 2, 3, 4]],
        ),
        (
            "grid3x3",
            grid(3, 3).unwrap(),
            vec![vec![1, 3, 4, 5, 7], vec![0, 1, 3, 4], vec![0, 1, 2, 3, 4, 5]],
        ),
    ];
    let mut checks = 0usize;
    let mut worst: f64 = 0.0;
    let mut worst_proper: f64 = 0.0;
    for (_, g, deltas) in &cases {
        let samples: Vec<DisorderSample> = (0..3)
            .map(|seed| {
                let spec = DisorderSpec {
                    distribution: NormDistribution::exponential(8.0).unwrap(),
                    sign_mode: SignMode::Rademacher,
                    seed,
                };
                sample_disorder(g, &spec)
            })
            .chain([DisorderSample::from_norms(vec![1.0; g.edge_count()])])
            .collect();
        for delta in deltas {
            let vol = g.boundaries(delta).unwrap();
            for model in &models() {
                let q = model.q();
                let boundaries: Vec<BoundaryCondition> = vec![
                    BoundaryCondition::uniform(&vol, 0),
                    BoundaryCondition::uniform(&vol, q - 1),
                    BoundaryCondition::from_outer(&vol, &(0..vol.outer.len()).map(|i| i % q).collect::<Vec<_>>())
                        .unwrap(),
                ];
                for beta in [0.0, 0.5] {
                    for w in &samples {
                        let inst = Instance {
                            graph: g,
                            volume: &vol,
                            model,
                            disorder: w,
                            beta,
                        };
                        for xi in &boundaries {
                            for lambda in subsets(delta) {
                                let r = dlr_consistency_check(&inst, &lambda, xi, &caps).unwrap();
                                checks += 1;
                                worst = worst.max(r.max_defect);
                                worst_proper = worst_proper.max(r.max_properness_defect);
                            }
                        }
                    }
                }
            }
        }
    }
    Verdict {
        pass: worst <= EQ_TOL && worst_proper <= EQ_TOL,
        detail: format!(
            "{checks} nested pairs Λ ⊆ Δ, max DLR defect = {worst:.3e}, max properness defect = {worst_proper:.3e}"
        ),
    }
}

fn criterion_4() -> Verdict {
    // κ(β) = 4β/(λ − 4β) = e^{−γ} solves to β = λe^{−γ} / (4(1 + e^{−γ})).
    let lambda = 8.0;
    let gamma = 2f64.ln();
    let t = (-gamma).exp();
    let oracle_exp = lambda * t / (4.0 * (1.0 + t));
    let got_exp = beta_star(&NormDistribution::exponential(lambda).unwrap(), gamma, 1e-9)
        .unwrap()
        .beta;
    // e^{4β} − 1 = 1.
    let oracle_const = 2f64.ln() / 4.0;
    let got_const = beta_star(&NormDistribution::constant(1.0).unwrap(), 0.0, 1e-9)
        .unwrap()
        .beta;
    let e1 = (got_exp - oracle_exp).abs();
    let e2 = (got_const - oracle_const).abs();
    Verdict {
        pass: e1 <= 1e-8 && e2 <= 1e-8 && (oracle_exp - 2.0 / 3.0).abs() < 1e-15,
        detail: format!(
            "exponential(8), γ = log 2: {got_exp:.12} (error {e1:.1e}); constant(1), γ = 0: {got_const:.12} (error {e2:.1e})"
        ),
    }
}

type WindowCase<'a> = (&'a str, &'a Graph, Vec<usize>, Vec<usize>, Vec<usize>);

fn criterion_5() -> Verdict {
    let caps = Caps::default();
    let c20 = cycle(20).unwrap();
    let g3 = grid(3, 3).unwrap();
    // (graph, window of radii for γ, radii N_k checked, roots)
    let cases: Vec<WindowCase> = vec![
        ("C20", &c20, (1..=10).collect(), (1..=10).collect(), (0..20).collect()),
        ("grid3x3", &g3, vec![1, 2], vec![2], (0..9).collect()),
    ];
    let mut rows = 0usize;
    let mut failures = Vec::new();
    let mut tightest = f64::INFINITY;
    for (name, g, window, nks, roots) in &cases {
        for &x in roots {
            for (family, gf) in [
                (CountFamily::Paths, GrowthFunction::Log),
                (CountFamily::Animals, GrowthFunction::TLogT),
            ] {
                let gamma = check_tempered(g, &gf, x, window, None, &caps).unwrap().gamma;
                for &nk in nks {
                    let rep = verify_counting_bounds(g, x, nk, gamma, family, &caps).unwrap();
                    rows += rep.rows.len();
                    for r in &rep.rows {
                        tightest = tightest.min(r.bound / r.count.max(1) as f64);
                    }
                    if rep.verdict != CountingVerdict::Pass && failures.len() < 5 {
                        let bad: Vec<_> = rep
                            .rows
                            .iter()
                            .filter(|r| !r.within_bound)
                            .map(|r| (r.n, r.count, r.bound))
                            .collect();
                        failures.push(format!("{name} x={x} N_k={nk} {family:?}: {bad:?}"));
                    }
                }
            }
        }
    }
    Verdict {
        pass: failures.is_empty(),
        detail: format!(
            "{rows} (x, N_k, N) counts, min bound/count = {tightest:.3}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    }
}

fn criterion_6() -> Verdict {
    let g = grid(3, 3).unwrap();
    let dist: Vec<Vec<usize>> = (0..9)
        .map(|x| (0..9).map(|y| g.distance(x, y).unwrap()).collect())
        .collect();
    let mut animals: Vec<Vec<usize>> = Vec::new();
    let all: Vec<usize> = (0..9).collect();
    let done = enumerate_connected_sets(&g, &all, 1, 7, &Caps::default(), |s| animals.push(s.to_vec())).unwrap();
    assert!(done.is_complete());
    let mut checks = 0u64;
    let mut violations = 0u64;
    for lambda in [2usize, 3] {
        for a in &animals {
            let animal = Animal::induced(&g, a);
            for b in subsets(a) {
                let separated = b
                    .iter()
                    .enumerate()
                    .all(|(i, &x)| b[i + 1..].iter().all(|&y| dist[x][y] >= lambda));
                if !separated {
                    continue;
                }
                checks += 1;
                // The bound itself, independently of the library.
                let bound = 1f64.max((2 * a.len() - 1) as f64 / lambda as f64);
                let lib = verify_separation_bound(&g, &animal, lambda as f64, &b).unwrap();
                if !lib.holds || b.len() as f64 > bound || (lib.bound - bound).abs() > 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    Verdict {
        pass: violations == 0 && checks > 0,
        detail: format!(
            "{} animals, {checks} separated subsets, {violations} violations",
            animals.len()
        ),
    }
}

fn criterion_7() -> Verdict {
    let g = chain(41).unwrap();
    let spec = DisorderSpec {
        distribution: NormDistribution::constant(1.0).unwrap(),
        sign_mode: SignMode::AllPositive,
        seed: 7,
    };
    let radii: Vec<usize> = (1..=6).collect();
    let table = decay_experiment(
        &g,
        20,
        &radii,
        &SpinModel::ising(),
        &spec,
        0.05,
        2f64.ln(),
        200,
        BoundaryStrategy::Auto,
        &Caps::default(),
    )
    .unwrap();
    let means: Vec<String> = table.rows.iter().map(|r| format!("{:.3e}", r.mean)).collect();
    let within = table.rows.len() == radii.len()
        && table.rows.iter().all(|r| r.mode == GapMode::Exhaustive)
        && table
            .rows
            .iter()
            .all(|r| r.bound_a.is_some_and(|a| r.mean <= a + 3.0 * r.se + 1e-15));
    Verdict {
        pass: within && table.strictly_decreasing(),
        detail: format!(
            "means {means:?}, strictly decreasing = {}, within bound (a) + 3 SE = {within}",
            table.strictly_decreasing()
        ),
    }
}

fn criterion_8() -> Verdict {
    let g = growing_tree(5).unwrap();
    let radii = [1, 2, 3, 4];
    let rep = check_tempered(&g, &GrowthFunction::Log, 0, &radii, None, &Caps::default()).unwrap();
    let maxima: Vec<f64> = rep
        .per_radius
        .iter()
        .map(|r| r.max_average.unwrap_or(f64::NAN))
        .collect();
    let increasing = maxima.windows(2).all(|w| w[0] < w[1]);
    let mut witnesses_ok = true;
    for rm in &rep.per_radius {
        let Some(w) = &rm.witness else {
            witnesses_ok = false;
            continue;
        };
        let ball: BTreeSet<usize> = g.ball_vertices(0, rm.radius).unwrap().into_iter().collect();
        let animal = Animal::induced(&g, w);
        let avg = animal_average(&animal, &GrowthFunction::Log, &g);
        // Recomputed directly from the degrees.
        let direct = w.iter().map(|&v| (g.degree(v) as f64).ln()).sum::<f64>() / w.len() as f64;
        let connected = g.induced(w).to_graph().is_connected();
        witnesses_ok &= rm.completeness.is_complete()
            && w.len() > rm.radius
            && w.iter().all(|v| ball.contains(v))
            && connected
            && (avg - direct).abs() < 1e-12
            && (direct - rm.max_average.unwrap_or(f64::NAN)).abs() < 1e-12;
    }
    let sizes: Vec<usize> = rep
        .per_radius
        .iter()
        .map(|r| r.witness.as_ref().map_or(0, Vec::len))
        .collect();
    Verdict {
        pass: increasing && witnesses_ok,
        detail: format!("per-radius max {maxima:.4?}, witness sizes {sizes:?}"),
    }
}

/// log Σ_σ χ(σ) exp(−β H̃(σ|ξ)) by direct enumeration.
fn direct_log_partition(inst: &Instance, xi: &BoundaryCondition) -> f64 {
    let q = inst.model.q();
    let delta = &inst.volume.delta;
    let total = q.pow(delta.len() as u32);
    let mut terms = Vec::with_capacity(total);
    for c in 0..total {
        let mut config = BTreeMap::new();
        let mut rest = c;
        let mut log_chi = 0.0;
        for &x in delta {
            let s = rest % q;
            rest /= q;
            config.insert(x, s);
            log_chi += inst.model.chi(x)[s].ln();
        }
        terms.push(log_chi - inst.beta * hamiltonian(inst, &config, xi, true).unwrap());
    }
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

fn criterion_9() -> Verdict {
    let caps = Caps::default();
    let mut tilt: f64 = 0.0;
    let mut norm: f64 = 0.0;
    let mut degenerate: f64 = 0.0;
    let mut instances = 0usize;
    let mut normalized = 0usize;
    let mut last_key = String::new();
    for_each_instance(&BETAS, |name, inst| {
        instances += 1;
        let vol = inst.volume;
        let boundaries = [
            BoundaryCondition::uniform(vol, 0),
            BoundaryCondition::uniform(vol, inst.model.q() - 1),
        ];
        for xi in &boundaries {
            for &z in &vol.interior {
                let a = evaluate_with(inst, z, xi, true, &caps).unwrap().magnetization;
                let b = evaluate_with(inst, z, xi, false, &caps).unwrap().magnetization;
                tilt = tilt.max((a - b).abs());
            }
        }
        // Normalization against direct summation, once per (case, Δ, model, β, law).
        let key = format!(
            "{name}{:?}{}{}{:?}",
            vol.delta, inst.model.name, inst.beta, inst.disorder.spec.distribution
        );
        if key != last_key {
            last_key = key;
            normalized += 1;
            let z = vol.interior[0];
            let xi = &boundaries[1];
            let lz = evaluate(inst, z, xi, &caps).unwrap().log_partition;
            let direct = direct_log_partition(inst, xi);
            // Σ_σ ν(σ) = exp(direct − lz).
            norm = norm.max((direct - lz).exp_m1().abs());
        }
        // β = 0 on the same instance.
        let zero = Instance { beta: 0.0, ..*inst };
        let q = inst.model.q() as f64;
        for &z in &vol.interior {
            let m = evaluate(&zero, z, &boundaries[0], &caps).unwrap().magnetization;
            let y = boundary_gap(&zero, z, BoundaryStrategy::Exhaustive, &caps).unwrap().gap;
            let qz = compute_q(zero.graph, vol, z, 0.0, zero.disorder, &caps).unwrap().total;
            degenerate = degenerate.max((m - 1.0 / q).abs()).max(y.abs()).max(qz.abs());
        }
    });
    Verdict {
        pass: tilt <= DEGENERACY_TOL && norm <= DEGENERACY_TOL && degenerate <= DEGENERACY_TOL,
        detail: format!(
            "{instances} instances: tilt {tilt:.1e}, normalization {norm:.1e} ({normalized} direct sums), β = 0 {degenerate:.1e}"
        ),
    }
}

/// (id, name, time limit in seconds, check)
type Criterion = (u8, &'static str, f64, fn() -> Verdict);

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    // Positional arguments select criteria by number.
    let only: Vec<u8> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let criteria: [Criterion; 9] = [
        (1, "boundary gap vs path sum, exhaustive", 300.0, criterion_1),
        (2, "expansion identity", f64::INFINITY, criterion_2),
        (3, "DLR consistency and properness", f64::INFINITY, criterion_3),
        (4, "beta* closed forms", f64::INFINITY, criterion_4),
        (5, "counting bounds", 120.0, criterion_5),
        (6, "separation bound", f64::INFINITY, criterion_6),
        (7, "decay experiment", 180.0, criterion_7),
        (8, "non-temperedness witness", f64::INFINITY, criterion_8),
        (
            9,
            "tilt invariance, normalization, beta = 0",
            f64::INFINITY,
            criterion_9,
        ),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs < budget;
        let pass = v.pass && in_time;
        if !pass {
            failed += 1;
        }
        let limit = if budget.is_finite() {
            format!(", limit {budget:.0}s")
        } else {
            String::new()
        };
        println!(
            "criterion {id} [{name}]: {} ({}; {secs:.1}s{limit})",
            if pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
