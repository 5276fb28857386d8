use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::ln_gamma;
use crate::error::{ensure_positive, Result};

pub fn poisson_ln_pmf(x: u64, lambda: f64) -> Result<f64> {
    ensure_positive("poisson mean lambda", lambda)?;
    Ok(ln_pmf_unchecked(x, lambda))
}

#[inline]
pub(crate) fn ln_pmf_unchecked(x: u64, lambda: f64) -> f64 {
    let xf = x as f64;
    super::xlogy(xf, lambda) - lambda - ln_gamma(xf + 1.0)
}

/// `λ^x e^{−λ} / x!`
pub fn poisson_pmf(x: u64, lambda: f64) -> Result<f64> {
    poisson_ln_pmf(x, lambda).map(f64::exp)
}

/// `P(X ≤ x)` by direct summation of the mass function.
pub fn poisson_cdf(x: u64, lambda: f64) -> Result<f64> {
    ensure_positive("poisson mean lambda", lambda)?;
    let mut sum = 0.0;
    for k in 0..=x {
        let term = ln_pmf_unchecked(k, lambda).exp();
        sum += term;
        // Past the mean the terms shrink geometrically.
        if (k as f64) > lambda && term < f64::EPSILON * 1e-6 * sum {
            break;
        }
    }
    Ok(sum.min(1.0))
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// Largest count kept when summing over a Poisson pair:
/// `round(max λ) + 20·sqrt(max λ)`, floored to an integer.
pub fn skellam_truncation(lambda1: f64, lambda2: f64) -> u64 {
    let m = lambda1.max(lambda2);
    (m.round() + 20.0 * m.sqrt()).floor() as u64
}

/// Probability that `X1 − X2 = d` for independent `X1 ~ Poisson(λ1)`,
/// `X2 ~ Poisson(λ2)`.
///
/// Both counts are truncated at [`skellam_truncation`]; for `λ ≤ 100` the
/// discarded mass is below `1e−12`. Pairs are visited in the same order for
/// `(d, λ1, λ2)` and `(−d, λ2, λ1)`, so that symmetry holds bit for bit.
pub fn skellam_pmf(d: i64, lambda1: f64, lambda2: f64) -> Result<f64> {
    ensure_positive("poisson mean lambda1", lambda1)?;
    ensure_positive("poisson mean lambda2", lambda2)?;
    Ok(skellam_unchecked(
        d,
        lambda1,
        lambda2,
        skellam_truncation(lambda1, lambda2),
    ))
}

fn skellam_unchecked(d: i64, lambda1: f64, lambda2: f64, xmax: u64) -> f64 {
    let shift = d.unsigned_abs();
    if shift > xmax {
        return 0.0;
    }
    let (off1, off2) = if d >= 0 { (shift, 0) } else { (0, shift) };
    (0..=xmax - shift)
        .map(|m| {
            let a = ln_pmf_unchecked(m + off1, lambda1);
            let b = ln_pmf_unchecked(m + off2, lambda2);
            (a + b).exp()
        })
        .sum()
}

/// A probability mass function over a contiguous integer range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDist {
    /// Smallest value in the support.
    pub start: i64,
    pub probs: Vec<f64>,
}

impl DiscreteDist {
    pub fn end(&self) -> i64 {
        self.start + self.probs.len() as i64 - 1
    }

    pub fn pmf(&self, value: i64) -> f64 {
        if value < self.start {
            return 0.0;
        }
        self.probs
            .get((value - self.start) as usize)
            .copied()
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.start + i as i64, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(v, p)| v as f64 * p).sum()
    }

    pub fn sd(&self) -> f64 {
        let mu = self.mean();
        self.iter()
            .map(|(v, p)| (v as f64 - mu).powi(2) * p)
            .sum::<f64>()
            .sqrt()
    }
}

/// The full difference distribution over `[−xmax, xmax]`.
pub fn skellam_table(lambda1: f64, lambda2: f64) -> Result<DiscreteDist> {
    ensure_positive("poisson mean lambda1", lambda1)?;
    ensure_positive("poisson mean lambda2", lambda2)?;
    let xmax = skellam_truncation(lambda1, lambda2);
    let start = -(xmax as i64);
    let probs = (start..=xmax as i64)
        .map(|d| skellam_unchecked(d, lambda1, lambda2, xmax))
        .collect();
    Ok(DiscreteDist { start, probs })
}

/// Arrival times of the first `k` events of a Poisson process: cumulative
/// sums of exponential waiting times. The `k`-th arrival is Erlang(k, rate).
pub fn poisson_process_waiting_times<R: Rng + ?Sized>(
    rate: f64,
    k: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    ensure_positive("process rate", rate)?;
    if k == 0 {
        return Err(crate::Error::domain("number of arrivals k", 0.0));
    }
    let exp = Exp::new(rate).expect("validated rate");
    let mut t = 0.0;
    Ok((0..k)
        .map(|_| {
            t += exp.sample(rng);
            t
        })
        .collect())
}
