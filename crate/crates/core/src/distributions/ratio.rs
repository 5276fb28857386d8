//! Densities of ratios of positive random variables.

use super::{ln_beta, xlogy, GammaParams, Stat, SummaryStats};
use crate::error::{Error, Result};

/// Log density of `Z1/Z2` for independent `Zi ~ Gamma(αi, βi)`:
///
/// `β1^α1 β2^α2 / B(α1, α2) · ρ^{α1−1} (β2 + ρβ1)^{−(α1+α2)}`.
pub fn gamma_ratio_ln_pdf(rho: f64, p1: &GammaParams, p2: &GammaParams) -> Result<f64> {
    let (p1, p2) = (p1.proper()?, p2.proper()?);
    if !(rho >= 0.0) {
        return Err(Error::domain("ratio rho", rho));
    }
    Ok(ln_pdf_unchecked(
        rho,
        p1.alpha(),
        p1.beta(),
        p2.alpha(),
        p2.beta(),
    ))
}

#[inline]
pub(crate) fn ln_pdf_unchecked(rho: f64, a1: f64, b1: f64, a2: f64, b2: f64) -> f64 {
    if rho == 0.0 && a1 < 1.0 {
        return f64::INFINITY;
    }
    a1 * b1.ln() + a2 * b2.ln() + xlogy(a1 - 1.0, rho)
        - (a1 + a2) * (b2 + rho * b1).ln()
        - ln_beta(a1, a2)
}

pub fn gamma_ratio_pdf(rho: f64, p1: &GammaParams, p2: &GammaParams) -> Result<f64> {
    gamma_ratio_ln_pdf(rho, p1, p2).map(f64::exp)
}

/// `P(Z1/Z2 ≤ rho)`, a regularized incomplete Beta function.
pub fn gamma_ratio_cdf(rho: f64, p1: &GammaParams, p2: &GammaParams) -> Result<f64> {
    let (p1, p2) = (p1.proper()?, p2.proper()?);
    if !(rho >= 0.0) {
        return Err(Error::domain("ratio rho", rho));
    }
    if rho.is_infinite() {
        return Ok(1.0);
    }
    let u = p1.beta() * rho / (p2.beta() + p1.beta() * rho);
    Ok(statrs::function::beta::beta_reg(p1.alpha(), p2.alpha(), u))
}

/// Mode, mean (`α2 > 1`) and variance (`α2 > 2`) of `Z1/Z2`.
///
/// The mode is `(β2/β1)(α1−1)/(α2+1)`, clamped at 0 where `α1 < 1` makes
/// the density decreasing.
pub fn gamma_ratio_summaries(p1: &GammaParams, p2: &GammaParams) -> Result<SummaryStats> {
    let (p1, p2) = (p1.proper()?, p2.proper()?);
    Ok(ratio_summaries_unchecked(
        p1.alpha(),
        p1.beta(),
        p2.alpha(),
        p2.beta(),
        ("alpha2 > 1", "alpha2 > 2"),
    ))
}

pub(crate) fn ratio_summaries_unchecked(
    a1: f64,
    b1: f64,
    a2: f64,
    b2: f64,
    conditions: (&str, &str),
) -> SummaryStats {
    let scale = b2 / b1;
    let mode = (scale * (a1 - 1.0) / (a2 + 1.0)).max(0.0);
    let mean = Stat::when(a2 > 1.0, conditions.0, || scale * a1 / (a2 - 1.0));
    let variance = Stat::when(a2 > 2.0, conditions.1, || {
        let m = a1 / (a2 - 1.0);
        scale * scale * m * ((a1 + 1.0) / (a2 - 2.0) - m)
    });
    SummaryStats::new(Stat::Defined(mode), mean, variance)
}

pub fn beta_prime_ln_pdf(x: f64, alpha: f64, beta: f64) -> Result<f64> {
    crate::error::ensure_positive("beta prime alpha", alpha)?;
    crate::error::ensure_positive("beta prime beta", beta)?;
    if !(x >= 0.0) {
        return Err(Error::domain("beta prime argument x", x));
    }
    if x == 0.0 && alpha < 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(xlogy(alpha - 1.0, x) - (alpha + beta) * x.ln_1p() - ln_beta(alpha, beta))
}

/// `x^{α−1} (1+x)^{−(α+β)} / B(α, β)`.
pub fn beta_prime_pdf(x: f64, alpha: f64, beta: f64) -> Result<f64> {
    beta_prime_ln_pdf(x, alpha, beta).map(f64::exp)
}

/// Density of `U1/U2` for independent uniforms on a common `[0, M]`;
/// independent of `M`.
pub fn uniform_ratio_pdf(rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::domain("ratio rho", rho));
    }
    Ok(if rho <= 1.0 { 0.5 } else { 0.5 / (rho * rho) })
}

pub fn uniform_ratio_cdf(rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::domain("ratio rho", rho));
    }
    Ok(if rho <= 1.0 {
        0.5 * rho
    } else {
        1.0 - 0.5 / rho
    })
}
