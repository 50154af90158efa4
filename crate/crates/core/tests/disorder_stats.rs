use std::f64::consts::LN_2;

use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use tempgibbs::disorder::{
    beta_star, edge_kappa, mean_kappa, safety_margin, sample_edges, DisorderSpec, NormDistribution, SignMode,
};

fn families() -> Vec<NormDistribution> {
    vec![
        NormDistribution::exponential(8.0).unwrap(),
        NormDistribution::uniform(1.0).unwrap(),
        NormDistribution::half_normal(0.5).unwrap(),
        NormDistribution::constant(1.0).unwrap(),
    ]
}

fn spec(d: NormDistribution, seed: u64) -> DisorderSpec {
    DisorderSpec {
        distribution: d,
        sign_mode: SignMode::AllPositive,
        seed,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn mgf_matches_closed_forms() {
    for t in [0.1, 0.5, 1.0, 2.0, 3.5] {
        let e = NormDistribution::exponential(4.0).unwrap();
        assert!(rel(e.mgf(t).unwrap(), 4.0 / (4.0 - t)) < 1e-12, "exp t={t}");

        let u = NormDistribution::uniform(1.5).unwrap();
        assert!(
            rel(u.mgf(t).unwrap(), (t * 1.5).exp_m1() / (t * 1.5)) < 1e-12,
            "unif t={t}"
        );

        // |N(0, s²)|: 2 e^{s²t²/2} Φ(st)
        let s = 0.7;
        let h = NormDistribution::half_normal(s).unwrap();
        let phi = Normal::standard().cdf(s * t);
        let want = 2.0 * (s * s * t * t / 2.0).exp() * phi;
        assert!(rel(h.mgf(t).unwrap(), want) < 1e-10, "half-normal t={t}");

        let c = NormDistribution::constant(0.3).unwrap();
        assert!(rel(c.mgf(t).unwrap(), (0.3 * t).exp()) < 1e-14);
    }
    // Outside the domain the exponential moment is infinite.
    assert!(NormDistribution::exponential(4.0).unwrap().mgf(4.0).is_err());
}

#[test]
fn beta_star_closed_forms() {
    // κ_exp(β) = 4β/(λ − 4β) ⇒ β* = λe^{−γ}/(4(1 + e^{−γ})).
    for (lambda, gamma) in [(8.0, LN_2), (1.0, 0.3), (20.0, 2.0)] {
        let d = NormDistribution::exponential(lambda).unwrap();
        let t: f64 = (-gamma).exp();
        let want = lambda * t / (4.0 * (1.0 + t));
        let got = beta_star(&d, gamma, 1e-13).unwrap().beta;
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
    // Constant c: e^{4βc} − 1 = e^{−γ} ⇒ β* = ln(1 + e^{−γ})/(4c).
    let c = NormDistribution::constant(1.0).unwrap();
    let got = beta_star(&c, LN_2, 1e-13).unwrap().beta;
    assert!((got - 1.5f64.ln() / 4.0).abs() < 1e-10);
    // γ = 0 on the unit constant law: ln 2 / 4.
    assert!((beta_star(&c, 0.0, 1e-13).unwrap().beta - LN_2 / 4.0).abs() < 1e-10);
}

#[test]
fn monte_carlo_mean_kappa_at_half_beta_star() {
    let n = 1_000_000;
    for (i, d) in families().into_iter().enumerate() {
        let b = beta_star(&d, LN_2, 1e-12).unwrap().beta / 2.0;
        let ks = sample_edges(n, &spec(d, 90 + i as u64)).kappas(b);
        let mean = ks.iter().sum::<f64>() / n as f64;
        let var = ks.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let exact = mean_kappa(&d, b).unwrap();
        assert!(
            (mean - exact).abs() <= 4.0 * se + 1e-9 * exact,
            "{d}: MC {mean} ± {se} vs {exact}"
        );
    }
}

#[test]
fn samples_pass_kolmogorov_smirnov() {
    // 1% critical value of √n·D, asymptotic.
    let n = 100_000;
    for (i, d) in families().into_iter().take(3).enumerate() {
        let mut xs = sample_edges(n, &spec(d, 7 + i as u64)).norms;
        xs.sort_by(f64::total_cmp);
        let dn = xs
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let f = d.cdf(x);
                (f - k as f64 / n as f64).max((k + 1) as f64 / n as f64 - f)
            })
            .fold(0.0, f64::max);
        let stat = dn * (n as f64).sqrt();
        assert!(stat < 1.9495, "{d}: √n·D = {stat}");
    }
}

#[test]
fn edge_streams_are_independent_of_edge_count() {
    let s = spec(NormDistribution::half_normal(1.0).unwrap(), 3);
    let short = sample_edges(10, &s);
    let long = sample_edges(50, &s);
    assert_eq!(short.norms[..], long.norms[..10]);
    let r = DisorderSpec {
        sign_mode: SignMode::Rademacher,
        ..s
    };
    let signed = sample_edges(2000, &r);
    assert!(signed.signs.iter().all(|&x| x == 1 || x == -1));
    let plus = signed.signs.iter().filter(|&&x| x == 1).count();
    assert!((900..1100).contains(&plus));
}

proptest! {
    #[test]
    fn mean_kappa_is_monotone(i in 0usize..4, b1 in 0.0f64..0.4, db in 0.0f64..0.4) {
        let d = families()[i];
        let lo = mean_kappa(&d, b1).unwrap();
        let hi = mean_kappa(&d, b1 + db).unwrap();
        prop_assert!(lo >= 0.0);
        prop_assert!(lo <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn below_beta_star_is_certified(i in 0usize..4, gamma in 0.0f64..3.0, frac in 0.0f64..0.999) {
        let d = families()[i];
        let b = beta_star(&d, gamma, 1e-13).unwrap();
        prop_assert!(safety_margin(&d, frac * b.beta, gamma).unwrap() < 1.0);
        prop_assert!((b.kappa - b.target).abs() <= 1e-8 * b.target.max(1.0));
    }

    #[test]
    fn edge_kappa_vanishes_only_at_zero(w in 0.0f64..5.0, beta in 0.0f64..2.0) {
        let k = edge_kappa(w, beta);
        prop_assert!(k >= 0.0);
        prop_assert_eq!(k == 0.0, w * beta == 0.0);
    }
}
