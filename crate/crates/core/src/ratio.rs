//! Closed-form posteriors of the rate ratio `ρ = r1/r2`.
//!
//! Model A infers `r1` and `r2` independently from flat priors and deduces
//! `ρ`. Model B puts `ρ` and `r2` at the top of the graph (`r1 = ρ·r2`), with
//! a flat prior on `ρ` and a Gamma prior on `r2`. With flat priors both
//! densities share the same structure, B having `x2` replaced by `x2 − 1`.
//!
//! All factorials go through log-Gamma, normalizations through log-Beta.

use serde::{Deserialize, Serialize};

use crate::distributions::{
    ln_beta, ln_gamma, ratio::ratio_summaries_unchecked, xlogy, GammaParams, Stat, SummaryStats,
};
use crate::error::{ensure_positive, Error, Result};
use crate::inference::CountObservation;
use crate::numeric::{self, Curve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioModel {
    A,
    B,
}

impl std::str::FromStr for RatioModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(RatioModel::A),
            "B" | "b" => Ok(RatioModel::B),
            other => Err(Error::Config(format!(
                "unknown ratio model {other:?} (expected A or B)"
            ))),
        }
    }
}

fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

fn ln_pow_rho(exponent: f64, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::domain("ratio rho", rho));
    }
    Ok(xlogy(exponent, rho))
}

/// Log density of `ρλ = λ1/λ2` given counts, flat priors on both λ:
/// `(x1+x2+1)!/(x1! x2!) · ρ^x1 (1+ρ)^{−(x1+x2+2)}`.
pub fn lambda_ratio_ln_pdf(rho: f64, x1: u64, x2: u64) -> Result<f64> {
    let (a, b) = (x1 as f64, x2 as f64);
    Ok(
        ln_factorial(x1 + x2 + 1) - ln_factorial(x1) - ln_factorial(x2) + ln_pow_rho(a, rho)?
            - (a + b + 2.0) * rho.ln_1p(),
    )
}

pub fn lambda_ratio_pdf(rho: f64, x1: u64, x2: u64) -> Result<f64> {
    lambda_ratio_ln_pdf(rho, x1, x2).map(f64::exp)
}

/// Mode `x1/(x2+2)`, mean `(x1+1)/x2` (`x2 > 0`) and
/// `σ = sqrt(μ·((x1+2)/(x2−1) − μ))` (`x2 > 1`).
pub fn lambda_ratio_summaries(x1: u64, x2: u64) -> SummaryStats {
    let (a, b) = (x1 as f64, x2 as f64);
    let mean = (a + 1.0) / b;
    SummaryStats::new(
        Stat::Defined(a / (b + 2.0)),
        Stat::when(x2 > 0, "x2 > 0", || mean),
        Stat::when(x2 > 1, "x2 > 1", || mean * ((a + 2.0) / (b - 1.0) - mean)),
    )
}

/// Model A density of `ρ = r1/r2`:
/// `(x1+x2+1)!/(x1! x2!) · T1^{x1+1} T2^{x2+1} ρ^x1 (T2 + T1ρ)^{−(x1+x2+2)}`.
pub fn model_a_ln_pdf(rho: f64, d1: &CountObservation, d2: &CountObservation) -> Result<f64> {
    let (x1, x2) = (d1.counts(), d2.counts());
    let (a, b) = (x1 as f64, x2 as f64);
    let (t1, t2) = (d1.time(), d2.time());
    Ok(
        ln_factorial(x1 + x2 + 1) - ln_factorial(x1) - ln_factorial(x2)
            + (a + 1.0) * t1.ln()
            + (b + 1.0) * t2.ln()
            + ln_pow_rho(a, rho)?
            - (a + b + 2.0) * (t2 + t1 * rho).ln(),
    )
}

pub fn model_a_pdf(rho: f64, d1: &CountObservation, d2: &CountObservation) -> Result<f64> {
    model_a_ln_pdf(rho, d1, d2).map(f64::exp)
}

pub fn model_a_summaries(d1: &CountObservation, d2: &CountObservation) -> SummaryStats {
    let (a, b) = (d1.counts() as f64, d2.counts() as f64);
    let (t1, t2) = (d1.time(), d2.time());
    let mean = ((a + 1.0) / t1) / (b / t2);
    SummaryStats::new(
        Stat::Defined((a / t1) / ((b + 2.0) / t2)),
        Stat::when(b > 0.0, "x2 > 0", || mean),
        Stat::when(b > 1.0, "x2 > 1", || {
            mean * (t2 / t1 * (a + 2.0) / (b - 1.0) - mean)
        }),
    )
}

/// Shape of the `r2`-side Gamma after integrating `r2` out of Model B:
/// `α0 + x2 − 1`. Must be positive for the density to normalize.
fn model_b_shape(d2: &CountObservation, prior_r2: &GammaParams) -> Result<f64> {
    let shape = prior_r2.alpha() + d2.counts() as f64 - 1.0;
    if shape > 0.0 {
        Ok(shape)
    } else {
        Err(Error::domain(
            "model B shape alpha0 + x2 - 1 (must be > 0)",
            shape,
        ))
    }
}

/// Model B density of `ρ` with a flat prior on `ρ` and `Gamma(α0, β0)` on `r2`:
///
/// `T1^{x1+1} (β0+T2)^{α0+x2−1} / B(x1+1, α0+x2−1) · ρ^x1 (β0+T2+T1ρ)^{−(α0+x1+x2)}`.
pub fn model_b_ln_pdf(
    rho: f64,
    d1: &CountObservation,
    d2: &CountObservation,
    prior_r2: &GammaParams,
) -> Result<f64> {
    let shape2 = model_b_shape(d2, prior_r2)?;
    let a = d1.counts() as f64;
    let (t1, t2) = (d1.time(), d2.time());
    let b2 = prior_r2.beta() + t2;
    Ok(
        (a + 1.0) * t1.ln() + shape2 * b2.ln() - ln_beta(a + 1.0, shape2) + ln_pow_rho(a, rho)?
            - (a + 1.0 + shape2) * (b2 + t1 * rho).ln(),
    )
}

pub fn model_b_pdf(
    rho: f64,
    d1: &CountObservation,
    d2: &CountObservation,
    prior_r2: &GammaParams,
) -> Result<f64> {
    model_b_ln_pdf(rho, d1, d2, prior_r2).map(f64::exp)
}

/// Model B summaries. With the flat `r2` prior: mode
/// `(x1/T1)/((x2+1)/T2)`, mean `((x1+1)/T1)/((x2−1)/T2)` (`x2 > 1`),
/// `σ = sqrt(μ·(T2/T1·(x1+2)/(x2−2) − μ))` (`x2 > 2`). Otherwise those of
/// `Gamma(x1+1, T1) / Gamma(α0+x2−1, β0+T2)`.
pub fn model_b_summaries(
    d1: &CountObservation,
    d2: &CountObservation,
    prior_r2: &GammaParams,
) -> Result<SummaryStats> {
    let shape2 = model_b_shape(d2, prior_r2)?;
    let (a, b) = (d1.counts() as f64, d2.counts() as f64);
    let (t1, t2) = (d1.time(), d2.time());
    if *prior_r2 == GammaParams::flat() {
        let mean = ((a + 1.0) / t1) / ((b - 1.0) / t2);
        return Ok(SummaryStats::new(
            Stat::Defined((a / t1) / ((b + 1.0) / t2)),
            Stat::when(b > 1.0, "x2 > 1", || mean),
            Stat::when(b > 2.0, "x2 > 2", || {
                mean * (t2 / t1 * (a + 2.0) / (b - 2.0) - mean)
            }),
        ));
    }
    Ok(ratio_summaries_unchecked(
        a + 1.0,
        t1,
        shape2,
        prior_r2.beta() + t2,
        ("alpha0 + x2 > 2", "alpha0 + x2 > 3"),
    ))
}

/// Marginal posteriors of `r1` and `r2` in Model B with flat priors on `ρ`
/// and `r2`: `r1 ~ Gamma(x1+1, T1)` (as in Model A) and
/// `r2 ~ Gamma(x2, T2)`.
pub fn model_b_rate_posteriors(
    d1: &CountObservation,
    d2: &CountObservation,
) -> Result<(GammaParams, GammaParams)> {
    model_b_rate_posteriors_with_prior(d1, d2, &GammaParams::flat())
}

/// As [`model_b_rate_posteriors`] with a `Gamma(α0, β0)` prior on `r2`,
/// giving `r2 ~ Gamma(α0 + x2 − 1, β0 + T2)`.
pub fn model_b_rate_posteriors_with_prior(
    d1: &CountObservation,
    d2: &CountObservation,
    prior_r2: &GammaParams,
) -> Result<(GammaParams, GammaParams)> {
    let shape2 = model_b_shape(d2, prior_r2)?;
    Ok((
        GammaParams::new(d1.counts() as f64 + 1.0, d1.time())?,
        GammaParams::new(shape2, prior_r2.beta() + d2.time())?,
    ))
}

/// Density of `r1 = ρ·r2` implied by uniform priors on `ρ ∈ [0, ρM]` and
/// `r2 ∈ [0, r2M]`: `ln(r2M·ρM / r1) / (ρM·r2M)` on `(0, ρM·r2M]`, zero
/// elsewhere.
pub fn implied_r1_pdf(r1: f64, rho_max: f64, r2_max: f64) -> Result<f64> {
    ensure_positive("rho_max", rho_max)?;
    ensure_positive("r2_max", r2_max)?;
    let upper = rho_max * r2_max;
    if r1.is_nan() {
        return Err(Error::domain("rate r1", r1));
    }
    if r1 <= 0.0 || r1 > upper {
        return Ok(0.0);
    }
    Ok((upper / r1).ln() / upper)
}

/// Everything that defines a closed-form `ρ` posterior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPosteriorSpec {
    pub model: RatioModel,
    pub data1: CountObservation,
    pub data2: CountObservation,
    /// Prior on `r2`; only Model B admits anything but the flat prior.
    #[serde(default = "GammaParams::flat")]
    pub prior_r2: GammaParams,
}

impl RatioPosteriorSpec {
    pub fn new(model: RatioModel, data1: CountObservation, data2: CountObservation) -> Self {
        Self {
            model,
            data1,
            data2,
            prior_r2: GammaParams::flat(),
        }
    }

    pub fn with_prior_r2(mut self, prior_r2: GammaParams) -> Self {
        self.prior_r2 = prior_r2;
        self
    }

    /// Pools `N` instances of `(x1, T1, x2, T2)` into total counts and
    /// total times, valid when both rates are constant across instances.
    pub fn pooled(
        model: RatioModel,
        pairs: &[(CountObservation, CountObservation)],
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySample("pooling requires at least one pair"));
        }
        let sum = |f: fn(&(CountObservation, CountObservation)) -> &CountObservation| {
            let x = pairs.iter().map(|p| f(p).counts()).sum();
            let t = pairs.iter().map(|p| f(p).time()).sum();
            CountObservation::new(x, t)
        };
        Ok(Self::new(model, sum(|p| &p.0)?, sum(|p| &p.1)?))
    }
}

/// A validated closed-form posterior of `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPosterior {
    pub spec: RatioPosteriorSpec,
    pub summaries: SummaryStats,
}

impl RatioPosterior {
    pub fn new(spec: RatioPosteriorSpec) -> Result<Self> {
        let summaries = match spec.model {
            RatioModel::A => {
                if spec.prior_r2 != GammaParams::flat() {
                    return Err(Error::Config(
                        "model A is only available with flat priors on r1 and r2".into(),
                    ));
                }
                model_a_summaries(&spec.data1, &spec.data2)
            }
            RatioModel::B => model_b_summaries(&spec.data1, &spec.data2, &spec.prior_r2)?,
        };
        Ok(Self { spec, summaries })
    }

    pub fn ln_pdf(&self, rho: f64) -> Result<f64> {
        let s = &self.spec;
        match s.model {
            RatioModel::A => model_a_ln_pdf(rho, &s.data1, &s.data2),
            RatioModel::B => model_b_ln_pdf(rho, &s.data1, &s.data2, &s.prior_r2),
        }
    }

    /// Density at `rho`; 0 for negative arguments.
    pub fn pdf(&self, rho: f64) -> f64 {
        if rho < 0.0 {
            return 0.0;
        }
        self.ln_pdf(rho).map(f64::exp).unwrap_or(f64::NAN)
    }

    /// Marginal posteriors of `(r1, r2)`.
    pub fn rate_posteriors(&self) -> Result<(GammaParams, GammaParams)> {
        let s = &self.spec;
        match s.model {
            RatioModel::A => Ok((
                GammaParams::new(s.data1.counts() as f64 + 1.0, s.data1.time())?,
                GammaParams::new(s.data2.counts() as f64 + 1.0, s.data2.time())?,
            )),
            RatioModel::B => model_b_rate_posteriors_with_prior(&s.data1, &s.data2, &s.prior_r2),
        }
    }

    /// `P(ρ ≤ rho)` by quadrature.
    pub fn cdf(&self, rho: f64) -> Result<f64> {
        numeric::cdf(|r| self.pdf(r), rho)
    }

    /// Quantile by numeric CDF inversion, tolerance `1e−6`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        numeric::quantile(|r| self.pdf(r), p, 1e-6)
    }

    pub fn curve(&self, points: usize) -> Result<Curve> {
        numeric::sample_curve(|r| self.pdf(r), points, numeric::DEFAULT_CURVE_QUANTILE)
    }
}

/// Model B with a non-flat prior `f0(ρ)`: the flat-prior density reweighted
/// by `f0` and renormalized numerically.
pub struct ReweightedModelB<F> {
    base: RatioPosterior,
    prior_rho: F,
    norm: f64,
}

impl<F: Fn(f64) -> f64> ReweightedModelB<F> {
    pub fn new(
        d1: CountObservation,
        d2: CountObservation,
        prior_r2: GammaParams,
        prior_rho: F,
    ) -> Result<Self> {
        let spec = RatioPosteriorSpec::new(RatioModel::B, d1, d2).with_prior_r2(prior_r2);
        let base = RatioPosterior::new(spec)?;
        let norm = numeric::integrate_half_line(|r| base.pdf(r) * prior_rho(r), 1e-12)?;
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numeric(format!(
                "reweighted density has norm {norm}"
            )));
        }
        Ok(Self {
            base,
            prior_rho,
            norm,
        })
    }

    /// Flat-prior density times `f0(ρ)`, before renormalization.
    pub fn unnormalized(&self, rho: f64) -> f64 {
        self.base.pdf(rho) * (self.prior_rho)(rho)
    }

    pub fn pdf(&self, rho: f64) -> f64 {
        self.unnormalized(rho) / self.norm
    }
}
