//! Forward simulation of counts, differences and ratios.
//!
//! Simulations are split into fixed chunks ([`crate::rng::CHUNK_SIZE`]), each
//! drawing from its own stream derived from the master seed. Chunks run in
//! parallel and are merged in index order, so a report depends only on
//! `(seed, n, parameters)`.

use std::io::{self, Write};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{gamma::sampler, GammaParams};
use crate::error::{ensure_positive, Error, Result};
use crate::rng::{chunk_stream, chunks, StreamRng};

/// Bin count of the fine histogram used to locate the mode.
pub const MODE_BINS: usize = 1000;
/// Histogram range used by default for small-count ratio plots.
pub const DEFAULT_CUTOFF: f64 = 8.0;
pub const DEFAULT_BINS: usize = 150;

/// Equal-width histogram on `[0, cutoff)`. Densities are normalized to the
/// full sample, so they integrate to the in-range fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub cutoff: f64,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn width(&self) -> f64 {
        self.cutoff / self.counts.len() as f64
    }

    pub fn edges(&self, bin: usize) -> (f64, f64) {
        let w = self.width();
        (bin as f64 * w, (bin + 1) as f64 * w)
    }

    /// `bin_left,bin_right,density` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "bin_left,bin_right,density")?;
        for (i, d) in self.density.iter().enumerate() {
            let (lo, hi) = self.edges(i);
            writeln!(out, "{lo},{hi},{d}")?;
        }
        Ok(())
    }
}

/// Outcome of a ratio simulation.
///
/// `frac_nan` counts `0/0`, `frac_inf` counts `k/0` with `k > 0`;
/// `frac_overflow` is the finite mass at or beyond the cutoff. Mean and
/// standard deviation run over all finite draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSampleReport {
    pub histogram: Histogram,
    pub mean: f64,
    pub sd: f64,
    pub mode_estimate: f64,
    pub frac_nan: f64,
    pub frac_inf: f64,
    pub frac_overflow: f64,
    pub n: u64,
    pub seed: u64,
}

impl RatioSampleReport {
    pub fn in_histogram_mass(&self) -> f64 {
        self.histogram.counts.iter().sum::<u64>() as f64 / self.n as f64
    }
}

#[derive(Clone)]
struct Accumulator {
    counts: Vec<u64>,
    fine: Vec<u64>,
    nan: u64,
    inf: u64,
    overflow: u64,
    finite: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    fn new(bins: usize) -> Self {
        Self {
            counts: vec![0; bins],
            fine: vec![0; MODE_BINS],
            nan: 0,
            inf: 0,
            overflow: 0,
            finite: 0,
            mean: 0.0,
            m2: 0.0,
        }
    }

    fn push(&mut self, v: f64, cutoff: f64) {
        if v.is_nan() {
            self.nan += 1;
            return;
        }
        if v.is_infinite() {
            self.inf += 1;
            return;
        }
        self.finite += 1;
        let delta = v - self.mean;
        self.mean += delta / self.finite as f64;
        self.m2 += delta * (v - self.mean);
        if v >= cutoff || v < 0.0 {
            self.overflow += 1;
            return;
        }
        let frac = v / cutoff;
        let bin = ((frac * self.counts.len() as f64) as usize).min(self.counts.len() - 1);
        self.counts[bin] += 1;
        let fine = ((frac * MODE_BINS as f64) as usize).min(MODE_BINS - 1);
        self.fine[fine] += 1;
    }

    /// Chan et al. pairwise merge of running moments.
    fn merge(mut self, other: Accumulator) -> Self {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.fine.iter_mut().zip(&other.fine) {
            *a += b;
        }
        self.nan += other.nan;
        self.inf += other.inf;
        self.overflow += other.overflow;
        let n = self.finite + other.finite;
        if n > 0 {
            let delta = other.mean - self.mean;
            let (na, nb) = (self.finite as f64, other.finite as f64);
            self.mean += delta * nb / n as f64;
            self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        }
        self.finite = n;
        self
    }
}

fn validate_run(n: usize, cutoff: f64, bins: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptySample("simulation requires n >= 1"));
    }
    if bins == 0 {
        return Err(Error::domain("histogram bins", 0.0));
    }
    ensure_positive("histogram cutoff", cutoff)
}

/// Runs `n` draws of `draw` and bins them into a report.
pub fn simulate_ratio<F>(
    n: usize,
    cutoff: f64,
    bins: usize,
    seed: u64,
    draw: F,
) -> Result<RatioSampleReport>
where
    F: Fn(&mut StreamRng) -> f64 + Sync,
{
    validate_run(n, cutoff, bins)?;
    let parts: Vec<Accumulator> = chunks(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(index, len)| {
            let mut rng = chunk_stream(seed, index);
            let mut acc = Accumulator::new(bins);
            for _ in 0..len {
                acc.push(draw(&mut rng), cutoff);
            }
            acc
        })
        .collect();
    let acc = parts
        .into_iter()
        .reduce(Accumulator::merge)
        .expect("n >= 1 gives at least one chunk");

    let nf = n as f64;
    let width = cutoff / bins as f64;
    let density = acc
        .counts
        .iter()
        .map(|&c| c as f64 / (nf * width))
        .collect();
    let mode_bin = acc
        .fine
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let sd = if acc.finite > 1 {
        (acc.m2 / (acc.finite - 1) as f64).sqrt()
    } else {
        f64::NAN
    };
    Ok(RatioSampleReport {
        histogram: Histogram {
            cutoff,
            counts: acc.counts,
            density,
        },
        mean: if acc.finite > 0 { acc.mean } else { f64::NAN },
        sd,
        mode_estimate: (mode_bin as f64 + 0.5) * cutoff / MODE_BINS as f64,
        frac_nan: acc.nan as f64 / nf,
        frac_inf: acc.inf as f64 / nf,
        frac_overflow: acc.overflow as f64 / nf,
        n: n as u64,
        seed,
    })
}

/// `X1/X2` for `Xi ~ Poisson(λi)`.
pub fn simulate_count_ratio(
    lambda1: f64,
    lambda2: f64,
    n: usize,
    cutoff: f64,
    bins: usize,
    seed: u64,
) -> Result<RatioSampleReport> {
    ensure_positive("poisson mean lambda1", lambda1)?;
    ensure_positive("poisson mean lambda2", lambda2)?;
    let p1 = Poisson::new(lambda1).map_err(|e| Error::Numeric(e.to_string()))?;
    let p2 = Poisson::new(lambda2).map_err(|e| Error::Numeric(e.to_string()))?;
    simulate_ratio(n, cutoff, bins, seed, |rng| {
        let x1: f64 = p1.sample(rng);
        let x2: f64 = p2.sample(rng);
        x1 / x2
    })
}

/// `Z1/Z2` for `Zi ~ Gamma(αi, βi)`.
pub fn simulate_gamma_ratio(
    p1: &GammaParams,
    p2: &GammaParams,
    n: usize,
    cutoff: f64,
    bins: usize,
    seed: u64,
) -> Result<RatioSampleReport> {
    let (g1, g2) = (sampler(p1.proper()?), sampler(p2.proper()?));
    simulate_ratio(n, cutoff, bins, seed, |rng| g1.sample(rng) / g2.sample(rng))
}

/// `U1/U2` for independent uniforms on `[0, r_max)`.
pub fn simulate_uniform_ratio(
    r_max: f64,
    n: usize,
    cutoff: f64,
    bins: usize,
    seed: u64,
) -> Result<RatioSampleReport> {
    ensure_positive("uniform upper bound r_max", r_max)?;
    simulate_ratio(n, cutoff, bins, seed, |rng| {
        let u1 = rng.random::<f64>() * r_max;
        let u2 = rng.random::<f64>() * r_max;
        u1 / u2
    })
}

/// `ρ·r2` with `ρ ~ U[0, ρM)`, `r2 ~ U[0, r2M)`: the rate `r1` implied by
/// flat priors on the ratio and on `r2`.
pub fn simulate_implied_r1(
    rho_max: f64,
    r2_max: f64,
    n: usize,
    bins: usize,
    seed: u64,
) -> Result<RatioSampleReport> {
    ensure_positive("rho_max", rho_max)?;
    ensure_positive("r2_max", r2_max)?;
    simulate_ratio(n, rho_max * r2_max, bins, seed, |rng| {
        rng.random::<f64>() * rho_max * rng.random::<f64>() * r2_max
    })
}

/// Time of the `k`-th arrival of a Poisson process with the given rate.
pub fn simulate_kth_arrival(
    rate: f64,
    k: usize,
    n: usize,
    cutoff: f64,
    bins: usize,
    seed: u64,
) -> Result<RatioSampleReport> {
    ensure_positive("process rate", rate)?;
    if k == 0 {
        return Err(Error::domain("number of arrivals k", 0.0));
    }
    let exp = rand_distr::Exp::new(rate).expect("validated rate");
    simulate_ratio(n, cutoff, bins, seed, |rng| {
        (0..k).map(|_| exp.sample(rng)).sum()
    })
}

/// Empirical distribution of `X1 − X2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceSample {
    pub start: i64,
    pub counts: Vec<u64>,
    pub n: u64,
    pub seed: u64,
}

impl DifferenceSample {
    pub fn frequency(&self, d: i64) -> f64 {
        if d < self.start {
            return 0.0;
        }
        self.counts
            .get((d - self.start) as usize)
            .map_or(0.0, |&c| c as f64 / self.n as f64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.n as f64;
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.start + i as i64, c as f64 / n))
    }

    fn central_moment(&self, order: i32) -> f64 {
        let mu = self.mean();
        self.iter()
            .map(|(d, f)| (d as f64 - mu).powi(order) * f)
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(d, f)| d as f64 * f).sum()
    }

    pub fn sd(&self) -> f64 {
        self.central_moment(2).sqrt()
    }

    pub fn skewness(&self) -> f64 {
        self.central_moment(3) / self.central_moment(2).powf(1.5)
    }
}

pub fn simulate_count_difference(
    lambda1: f64,
    lambda2: f64,
    n: usize,
    seed: u64,
) -> Result<DifferenceSample> {
    ensure_positive("poisson mean lambda1", lambda1)?;
    ensure_positive("poisson mean lambda2", lambda2)?;
    if n == 0 {
        return Err(Error::EmptySample("simulation requires n >= 1"));
    }
    let p1 = Poisson::new(lambda1).map_err(|e| Error::Numeric(e.to_string()))?;
    let p2 = Poisson::new(lambda2).map_err(|e| Error::Numeric(e.to_string()))?;
    let parts: Vec<std::collections::BTreeMap<i64, u64>> = chunks(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(index, len)| {
            let mut rng = chunk_stream(seed, index);
            let mut m = std::collections::BTreeMap::new();
            for _ in 0..len {
                let x1: f64 = p1.sample(&mut rng);
                let x2: f64 = p2.sample(&mut rng);
                *m.entry(x1 as i64 - x2 as i64).or_insert(0) += 1;
            }
            m
        })
        .collect();
    let mut all = std::collections::BTreeMap::new();
    for part in parts {
        for (d, c) in part {
            *all.entry(d).or_insert(0u64) += c;
        }
    }
    let start = *all.keys().next().expect("n >= 1");
    let end = *all.keys().next_back().expect("n >= 1");
    let mut counts = vec![0; (end - start + 1) as usize];
    for (d, c) in all {
        counts[(d - start) as usize] = c;
    }
    Ok(DifferenceSample {
        start,
        counts,
        n: n as u64,
        seed,
    })
}

/// Per-bin agreement between a histogram and exact bin probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramCheck {
    pub bins: usize,
    pub passed: usize,
    /// Largest `|observed − expected| / σ` over all bins.
    pub max_z: f64,
}

impl HistogramCheck {
    pub fn pass_fraction(&self) -> f64 {
        self.passed as f64 / self.bins as f64
    }
}

/// Compares each bin count against `n·p` using the binomial standard
/// deviation `sqrt(n p (1 − p))`, where `bin_probability(lo, hi)` is the
/// exact probability of the bin. A bin passes when within `n_sigma`.
pub fn histogram_check<F>(
    report: &RatioSampleReport,
    n_sigma: f64,
    bin_probability: F,
) -> HistogramCheck
where
    F: Fn(f64, f64) -> f64,
{
    let n = report.n as f64;
    let mut passed = 0;
    let mut max_z: f64 = 0.0;
    for (i, &count) in report.histogram.counts.iter().enumerate() {
        let (lo, hi) = report.histogram.edges(i);
        let p = bin_probability(lo, hi).clamp(0.0, 1.0);
        let expected = n * p;
        let sigma = (n * p * (1.0 - p)).sqrt();
        let z = if sigma > 0.0 {
            (count as f64 - expected).abs() / sigma
        } else if count as f64 == expected {
            0.0
        } else {
            f64::INFINITY
        };
        max_z = max_z.max(z);
        if z <= n_sigma {
            passed += 1;
        }
    }
    HistogramCheck {
        bins: report.histogram.counts.len(),
        passed,
        max_z,
    }
}
