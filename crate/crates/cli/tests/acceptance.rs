//! Acceptance gate: one PASS/FAIL line per criterion, at the stated
//! tolerance and runtime limit. Run with
//! `cargo test -p rateratio-cli --test acceptance -- --nocapture`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use rateratio::distributions::{
    beta_prime_pdf, gamma_pdf, gamma_ratio_pdf, skellam_pmf, uniform_ratio_pdf, GammaParams,
};
use rateratio::inference::elicit_gamma;
use rateratio::mcmc::{
    build_model, run_chain, summarize_chain, Data, Efficiencies, Efficiency, ModelSpec,
};
use rateratio::montecarlo::{histogram_check, simulate_gamma_ratio, simulate_uniform_ratio};
use rateratio::ratio::*;
use rateratio::{CountObservation, RatioPosterior, RatioPosteriorSpec};

struct Gate {
    results: Vec<(u32, bool)>,
}

impl Gate {
    fn record(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        println!(
            "{} [{id:>2}] {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        self.results.push((id, pass));
    }
}

fn obs(x: u64, t: f64) -> CountObservation {
    CountObservation::new(x, t).unwrap()
}

fn within(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn skellam_exactness(g: &mut Gate) {
    let start = Instant::now();
    let p = skellam_pmf(0, 1.0, 1.0).unwrap();
    let elapsed = start.elapsed();
    let oracle = skellam_brute(0, 1.0, 1.0);
    let pass =
        within(p, 0.308508, 5e-4) && within(p, oracle, 5e-4) && elapsed < Duration::from_millis(1);
    g.record(
        1,
        "Skellam P(D=0|1,1)",
        pass,
        format!("{p:.6} (oracle {oracle:.6}, {elapsed:?})"),
    );
}

fn golden_model_a(g: &mut Gate) {
    let post = RatioPosterior::new(RatioPosteriorSpec::new(
        rateratio::RatioModel::A,
        obs(3, 3.0),
        obs(6, 6.0),
    ))
    .unwrap();
    let (r1, r2) = post.rate_posteriors().unwrap();
    let s = &post.summaries;
    let got = [
        r1.mean(),
        r1.sd(),
        r2.mean(),
        r2.sd(),
        s.mean.expect_defined(),
        s.sd.expect_defined(),
    ];
    let want = [1.333, 0.667, 1.167, 0.441, 1.333, 0.943];
    let pass = got.iter().zip(want).all(|(a, b)| within(*a, b, 1e-3));
    g.record(
        2,
        "Model A golden numbers",
        pass,
        format!("{got:.4?} vs {want:?}"),
    );
}

fn golden_model_b(g: &mut Gate) {
    let post = RatioPosterior::new(RatioPosteriorSpec::new(
        rateratio::RatioModel::B,
        obs(3, 3.0),
        obs(6, 6.0),
    ))
    .unwrap();
    let (r1, r2) = post.rate_posteriors().unwrap();
    let s = &post.summaries;
    let got = [
        s.mean.expect_defined(),
        s.sd.expect_defined(),
        r2.mean(),
        r2.sd(),
        r1.mean(),
        r1.sd(),
    ];
    let want = [1.600, 1.200, 1.000, 0.408, 1.333, 0.667];
    let pass = got.iter().zip(want).all(|(a, b)| within(*a, b, 1e-3));
    g.record(
        3,
        "Model B golden numbers",
        pass,
        format!("{got:.4?} vs {want:?}"),
    );
}

fn sigma_series(g: &mut Gate) {
    let want = [
        (2u64, 1.936),
        (3, 1.247),
        (10, 0.507),
        (30, 0.269),
        (100, 0.143),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (x, sd) in want {
        let closed = lambda_ratio_summaries(x, x).sd.expect_defined();
        let (_, quad) = moments(|r| lambda_ratio_pdf(r, x, x).unwrap(), HEAVY_TAIL_Q);
        pass &= within(closed, sd, 5e-4) && within(quad, sd, 5e-4);
        detail.push(format!("x={x}: {closed:.4}/{quad:.4}"));
    }
    g.record(
        4,
        "sigma(rho_lambda) series (formula/quadrature)",
        pass,
        detail.join(", "),
    );
}

fn one_one_mode_mean(g: &mut Gate) {
    let s = lambda_ratio_summaries(1, 1);
    let (mode, mean) = (s.mode.expect_defined(), s.mean.expect_defined());
    let pass = mode == 1.0 / 3.0 && mean == 2.0;
    g.record(
        5,
        "x1=x2=1 mode and mean",
        pass,
        format!("mode {mode:?}, mean {mean:?}"),
    );
}

fn elicitation(g: &mut Gate) {
    let p = elicit_gamma(5.0, 2.0).unwrap();
    let pass = p.alpha() == 6.25 && p.beta() == 1.25;
    g.record(
        6,
        "elicit_gamma(5, 2)",
        pass,
        format!("({}, {})", p.alpha(), p.beta()),
    );
}

fn uniform_ratio_law(g: &mut Gate) {
    let start = Instant::now();
    let exact = integrate_between(|x| uniform_ratio_pdf(x).unwrap(), 0.1, 10.0);
    let n = 10_000_000;
    // Bins of width 0.1 on [0, 10): bins 1.. cover [0.1, 10).
    let r = simulate_uniform_ratio(1.0, n, 10.0, 100, 77).unwrap();
    let mc = r.histogram.counts[1..].iter().sum::<u64>() as f64 / n as f64;
    let sigma = (0.9 * 0.1 / n as f64).sqrt();
    let elapsed = start.elapsed();
    let pass = within(exact, 0.9, 1e-12)
        && (mc - exact).abs() <= 3.0 * sigma
        && elapsed < Duration::from_secs(10);
    g.record(
        7,
        "P(0.1 <= rho <= 10) uniform ratio",
        pass,
        format!(
            "exact {exact:.12}, MC {mc:.6} ({:.2} sigma), {elapsed:.2?}",
            (mc - exact) / sigma
        ),
    );
}

fn normalization_suite(g: &mut Gate) {
    let start = Instant::now();
    let gp = |a, b| GammaParams::new(a, b).unwrap();
    let mut cases: Vec<(String, Density, f64)> = Vec::new();
    // Gamma: Q = 80 α/β, far into the exponential tail.
    for (a, b) in [(1.0, 1.0), (4.0, 3.0), (6.25, 1.25), (0.5, 2.0)] {
        let p = gp(a, b);
        cases.push((
            format!("gamma({a},{b})"),
            Box::new(move |x| gamma_pdf(x, &p).unwrap()),
            80.0 * a.max(1.0) / b,
        ));
    }
    // Ratio densities on Q = 1e10. The heaviest tail below is beta-prime(5, 0.8),
    // ∝ ρ^{−1.8}, whose mass beyond Q is under 1e−7.
    for (a1, b1, a2, b2) in [
        (2.0, 1.0, 3.0, 2.0),
        (1.0, 1.0, 1.0, 1.0),
        (4.0, 3.0, 7.0, 6.0),
        (0.7, 2.0, 5.5, 0.3),
    ] {
        let (p1, p2) = (gp(a1, b1), gp(a2, b2));
        cases.push((
            format!("gamma-ratio({a1},{b1};{a2},{b2})"),
            Box::new(move |x| gamma_ratio_pdf(x, &p1, &p2).unwrap()),
            HEAVY_TAIL_Q,
        ));
    }
    for (a, b) in [(2.0, 2.0), (1.0, 1.0), (5.0, 0.8)] {
        cases.push((
            format!("beta-prime({a},{b})"),
            Box::new(move |x| beta_prime_pdf(x, a, b).unwrap()),
            HEAVY_TAIL_Q,
        ));
    }
    for (x1, t1, x2, t2) in [
        (0u64, 1.0, 0u64, 1.0),
        (1, 1.0, 2, 2.0),
        (3, 3.0, 6, 6.0),
        (10, 2.0, 10, 5.0),
    ] {
        let (d1, d2) = (obs(x1, t1), obs(x2, t2));
        cases.push((
            format!("model-A({x1},{t1},{x2},{t2})"),
            Box::new(move |r| model_a_pdf(r, &d1, &d2).unwrap()),
            HEAVY_TAIL_Q,
        ));
    }
    for (x1, t1, x2, t2, a0, b0) in [
        (3u64, 3.0, 6u64, 6.0, 1.0, 0.0),
        (1, 1.0, 2, 2.0, 1.0, 0.0),
        (3, 3.0, 6, 6.0, 2.0, 1.0),
        (0, 1.0, 1, 1.0, 1.0, 0.0),
    ] {
        let (d1, d2, p) = (
            obs(x1, t1),
            obs(x2, t2),
            GammaParams::new_prior(a0, b0).unwrap(),
        );
        cases.push((
            format!("model-B({x1},{t1},{x2},{t2}; prior {a0},{b0})"),
            Box::new(move |r| model_b_pdf(r, &d1, &d2, &p).unwrap()),
            HEAVY_TAIL_Q,
        ));
    }
    // Uniform ratio: tail 1/(2ρ), so the mass beyond Q = 1e10 is 5e−11.
    cases.push((
        "uniform-ratio".into(),
        Box::new(|x| uniform_ratio_pdf(x).unwrap()),
        HEAVY_TAIL_Q,
    ));
    for (rm, r2m) in [(1.0, 10.0), (3.0, 0.5)] {
        cases.push((
            format!("implied-r1({rm},{r2m})"),
            Box::new(move |r| implied_r1_pdf(r, rm, r2m).unwrap()),
            rm * r2m,
        ));
    }
    let mut worst = (String::new(), 0.0f64);
    for (name, f, q) in &cases {
        let err = (integrate_to(&**f, *q) - 1.0).abs();
        if err > worst.1 {
            worst = (name.clone(), err);
        }
    }
    let elapsed = start.elapsed();
    let pass = worst.1 <= 1e-6 && elapsed < Duration::from_secs(5);
    g.record(
        8,
        "normalization suite",
        pass,
        format!(
            "{} densities, worst |1 - integral| = {:.2e} ({}), {elapsed:.2?}",
            cases.len(),
            worst.1,
            worst.0
        ),
    );
}

fn oracle_equivalence(g: &mut Gate) {
    let mut rng = rateratio::rng::seeded(2024);
    let mut pass = true;
    let mut fractions = Vec::new();
    for i in 0..10 {
        let (x1, x2) = (rng.random_range(0..=20u64), rng.random_range(0..=20u64));
        let (t1, t2) = (rng.random_range(0.5..10.0), rng.random_range(0.5..10.0));
        let (d1, d2) = (obs(x1, t1), obs(x2, t2));
        let post =
            RatioPosterior::new(RatioPosteriorSpec::new(rateratio::RatioModel::A, d1, d2)).unwrap();
        let cutoff = post.quantile(0.995).unwrap();
        let p1 = GammaParams::new(x1 as f64 + 1.0, t1).unwrap();
        let p2 = GammaParams::new(x2 as f64 + 1.0, t2).unwrap();
        let report = simulate_gamma_ratio(&p1, &p2, 1_000_000, cutoff, 50, 100 + i).unwrap();
        let check = histogram_check(&report, 3.0, |lo, hi| {
            integrate_between(|r| model_a_pdf(r, &d1, &d2).unwrap(), lo, hi)
        });
        pass &= check.pass_fraction() >= 0.95;
        fractions.push(format!(
            "({x1},{t1:.2},{x2},{t2:.2}) {:.0}%",
            100.0 * check.pass_fraction()
        ));
    }
    g.record(
        9,
        "Model A pdf vs Gamma-ratio sampling",
        pass,
        fractions.join("; "),
    );
}

fn mcmc_agreement(g: &mut Gate) {
    let data = Data {
        x1: 3,
        t1: 3.0,
        x2: 6,
        t2: 6.0,
    };
    let unit = Efficiencies {
        eps1: Efficiency::Fixed(1.0),
        eps2: Efficiency::Fixed(1.0),
    };
    let a = [("r1", 4.0 / 3.0), ("r2", 7.0 / 6.0), ("rho", 4.0 / 3.0)];
    let b = [("r1", 4.0 / 3.0), ("r2", 1.0), ("rho", 1.6)];
    let mut pass = true;
    let mut detail = Vec::new();
    for (label, spec, targets, seed) in [
        ("A", ModelSpec::model_a(data), a, 11),
        ("B", ModelSpec::model_b(data), b, 12),
        ("B_EFF eps=1", ModelSpec::model_b_eff(data, unit), b, 13),
    ] {
        let start = Instant::now();
        let model = build_model(spec).unwrap();
        let n = 100_000;
        let chain = run_chain(&model, n, rateratio::mcmc::default_burn_in(n), seed).unwrap();
        let elapsed = start.elapsed();
        let s = summarize_chain(&chain).unwrap();
        let zs: Vec<f64> = targets
            .iter()
            .map(|(name, t)| {
                let v = &s.variables[*name];
                (v.mean - t).abs() / v.time_series_se
            })
            .collect();
        pass &= zs.iter().all(|&z| z < 4.0) && elapsed < Duration::from_secs(60);
        detail.push(format!(
            "{label}: max {:.2} SE in {elapsed:.2?}",
            zs.iter().cloned().fold(0.0, f64::max)
        ));
    }
    g.record(10, "MCMC agreement (n_iter = 1e5)", pass, detail.join("; "));
}

fn structural_identity(g: &mut Gate) {
    let mut worst: f64 = 0.0;
    for (x1, x2) in [(1u64, 2u64), (3, 6), (10, 10)] {
        let (d1, d2, shifted) = (obs(x1, 1.3), obs(x2, 2.1), obs(x2 - 1, 2.1));
        for i in 1..=100 {
            let rho = i as f64 * 0.06;
            let b = model_b_pdf(rho, &d1, &d2, &GammaParams::flat()).unwrap();
            let a = model_a_pdf(rho, &d1, &shifted).unwrap();
            worst = worst.max((a - b).abs() / a);
        }
    }
    g.record(
        11,
        "Model B(x2) = Model A(x2 - 1)",
        worst <= 1e-10,
        format!("max relative deviation {worst:.2e}"),
    );
}

fn full_scale_simulations(g: &mut Gate) {
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, Vec<&str>); 4] = [
        (
            "count-ratio",
            vec!["predict", "ratio", "--l1", "1", "--l2", "1"],
        ),
        (
            "rho-lambda",
            vec![
                "mc", "model-a", "--x1", "1", "--T1", "1", "--x2", "1", "--T2", "1",
            ],
        ),
        (
            "uniform-ratio",
            vec!["mc", "uniform-ratio", "--r-max", "10"],
        ),
        (
            "implied-r1",
            vec!["mc", "implied-r1", "--rho-max", "1", "--r2-max", "10"],
        ),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    let start_all = Instant::now();
    for (name, args) in runs {
        let path = dir.path().join(format!("{name}.csv"));
        let start = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_rateratio"))
            .args([
                "--seed",
                "1",
                "--format",
                "csv",
                "--out",
                path.to_str().unwrap(),
            ])
            .args(&args)
            .args(["--n", "10000000"])
            .status()
            .unwrap();
        let elapsed = start.elapsed();
        let rows = std::fs::read_to_string(&path)
            .map(|s| s.lines().count())
            .unwrap_or(0);
        pass &= status.success() && rows > 1;
        detail.push(format!("{name} {elapsed:.1?}"));
    }
    pass &= start_all.elapsed() < Duration::from_secs(180);
    g.record(12, "1e7-sample histograms via CLI", pass, detail.join(", "));
}

#[test]
fn acceptance_criteria() {
    let mut g = Gate {
        results: Vec::new(),
    };
    skellam_exactness(&mut g);
    golden_model_a(&mut g);
    golden_model_b(&mut g);
    sigma_series(&mut g);
    one_one_mode_mean(&mut g);
    elicitation(&mut g);
    uniform_ratio_law(&mut g);
    normalization_suite(&mut g);
    oracle_equivalence(&mut g);
    mcmc_agreement(&mut g);
    structural_identity(&mut g);
    full_scale_simulations(&mut g);
    let failed: Vec<u32> = g.results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    println!(
        "{} of {} criteria passed",
        g.results.len() - failed.len(),
        g.results.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
