use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::{ln_gamma, xlogy, GammaParams, Stat, SummaryStats};
use crate::error::{Error, Result};

/// `ln[β^α/Γ(α) · x^{α−1} e^{−βx}]`.
pub fn gamma_ln_pdf(x: f64, p: &GammaParams) -> Result<f64> {
    let p = p.proper()?;
    if !(x >= 0.0) {
        return Err(Error::domain("gamma density argument x", x));
    }
    Ok(ln_pdf_unchecked(x, p.alpha(), p.beta()))
}

#[inline]
pub(crate) fn ln_pdf_unchecked(x: f64, alpha: f64, beta: f64) -> f64 {
    if x == 0.0 {
        return if alpha < 1.0 {
            f64::INFINITY
        } else if alpha == 1.0 {
            beta.ln()
        } else {
            f64::NEG_INFINITY
        };
    }
    alpha * beta.ln() - ln_gamma(alpha) + xlogy(alpha - 1.0, x) - beta * x
}

pub fn gamma_pdf(x: f64, p: &GammaParams) -> Result<f64> {
    gamma_ln_pdf(x, p).map(f64::exp)
}

/// Mean `α/β`, variance `α/β²`, mode `(α−1)/β` (0 when `α < 1`).
pub fn gamma_summaries(p: &GammaParams) -> Result<SummaryStats> {
    let p = p.proper()?;
    Ok(SummaryStats::new(
        Stat::Defined(p.mode()),
        Stat::Defined(p.mean()),
        Stat::Defined(p.variance()),
    ))
}

pub fn gamma_sample<R: Rng + ?Sized>(p: &GammaParams, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    let p = p.proper()?;
    if n == 0 {
        return Err(Error::EmptySample("gamma_sample requires n >= 1"));
    }
    let dist = sampler(p);
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}

pub(crate) fn sampler(p: &GammaParams) -> Gamma<f64> {
    Gamma::new(p.alpha(), 1.0 / p.beta()).expect("validated gamma parameters")
}
