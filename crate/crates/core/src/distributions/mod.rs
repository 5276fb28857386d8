//! Probability distributions used throughout the crate.
//!
//! Densities are evaluated in the log domain (log-Gamma, log-Beta) and
//! exponentiated at the boundary. Moments that do not exist for a given
//! parameter set are reported as [`Stat::Undefined`], never as errors.

pub(crate) mod binomial;
pub(crate) mod gamma;
pub(crate) mod poisson;
pub(crate) mod ratio;

pub use binomial::{binomial_ln_pmf, binomial_pmf};
pub use gamma::{gamma_ln_pdf, gamma_pdf, gamma_sample, gamma_summaries};
pub use poisson::{
    normal_cdf, poisson_cdf, poisson_ln_pmf, poisson_pmf, poisson_process_waiting_times,
    skellam_pmf, skellam_table, skellam_truncation, DiscreteDist,
};
pub use ratio::{
    beta_prime_ln_pdf, beta_prime_pdf, gamma_ratio_cdf, gamma_ratio_ln_pdf, gamma_ratio_pdf,
    gamma_ratio_summaries, uniform_ratio_cdf, uniform_ratio_pdf,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape/rate pair `(α, β)` of a Gamma distribution.
///
/// Used both for priors and posteriors of λ (dimensionless) and of rates
/// `r` (then `β` has the dimension of a time). The flat prior is the
/// improper limit `(1, 0)`, available through [`GammaParams::flat`]; every
/// density or summary evaluation rejects it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGamma", into = "RawGamma")]
pub struct GammaParams {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGamma {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawGamma> for GammaParams {
    type Error = Error;

    fn try_from(raw: RawGamma) -> Result<Self> {
        GammaParams::new_prior(raw.alpha, raw.beta)
    }
}

impl From<GammaParams> for RawGamma {
    fn from(p: GammaParams) -> Self {
        RawGamma {
            alpha: p.alpha,
            beta: p.beta,
        }
    }
}

impl GammaParams {
    /// A proper Gamma distribution: `alpha > 0`, `beta > 0`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        crate::error::ensure_positive("gamma shape alpha", alpha)?;
        crate::error::ensure_positive("gamma rate beta", beta)?;
        Ok(Self { alpha, beta })
    }

    /// Like [`GammaParams::new`] but also admits `beta = 0`, the improper
    /// limit used for flat priors.
    pub fn new_prior(alpha: f64, beta: f64) -> Result<Self> {
        crate::error::ensure_positive("gamma shape alpha", alpha)?;
        crate::error::ensure_non_negative("gamma rate beta", beta)?;
        Ok(Self { alpha, beta })
    }

    /// The flat prior on the positive half-line, `(α, β) = (1, 0)`.
    pub const fn flat() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_proper(&self) -> bool {
        self.beta > 0.0
    }

    pub(crate) fn proper(&self) -> Result<&Self> {
        if self.is_proper() {
            Ok(self)
        } else {
            Err(Error::domain(
                "gamma rate beta (improper distribution)",
                self.beta,
            ))
        }
    }

    pub fn mean(&self) -> f64 {
        self.alpha / self.beta
    }

    pub fn variance(&self) -> f64 {
        self.alpha / (self.beta * self.beta)
    }

    pub fn sd(&self) -> f64 {
        self.alpha.sqrt() / self.beta
    }

    /// `(α − 1)/β` for `α ≥ 1`, otherwise the density peaks at 0.
    pub fn mode(&self) -> f64 {
        if self.alpha >= 1.0 {
            (self.alpha - 1.0) / self.beta
        } else {
            0.0
        }
    }
}

/// A summary value that may not exist for the given parameters.
///
/// In JSON a defined value is `{"value": 1.5}`; an undefined one is
/// `{"value": null, "requires": "x2 > 1"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawStat", into = "RawStat")]
pub enum Stat {
    Defined(f64),
    /// Carries the condition that the parameters violate.
    Undefined(String),
}

#[derive(Serialize, Deserialize)]
struct RawStat {
    value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    requires: Option<String>,
}

impl From<RawStat> for Stat {
    fn from(raw: RawStat) -> Self {
        match raw.value {
            Some(v) => Stat::Defined(v),
            None => Stat::Undefined(raw.requires.unwrap_or_default()),
        }
    }
}

impl From<Stat> for RawStat {
    fn from(s: Stat) -> Self {
        match s {
            Stat::Defined(v) => RawStat {
                value: Some(v),
                requires: None,
            },
            Stat::Undefined(c) => RawStat {
                value: None,
                requires: Some(c),
            },
        }
    }
}

impl Stat {
    pub fn when(condition_holds: bool, requires: &str, value: impl FnOnce() -> f64) -> Self {
        if condition_holds {
            Stat::Defined(value())
        } else {
            Stat::Undefined(requires.to_owned())
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Stat::Defined(v) => Some(*v),
            Stat::Undefined(_) => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Stat::Defined(_))
    }

    /// Unwraps a defined value; panics with the violated condition otherwise.
    pub fn expect_defined(&self) -> f64 {
        match self {
            Stat::Defined(v) => *v,
            Stat::Undefined(c) => panic!("statistic undefined: requires {c}"),
        }
    }
}

impl std::fmt::Display for Stat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stat::Defined(v) => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
            Stat::Undefined(c) => write!(f, "undef({c})"),
        }
    }
}

/// Mode, mean, variance and standard deviation of a distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mode: Stat,
    pub mean: Stat,
    pub variance: Stat,
    pub sd: Stat,
}

impl SummaryStats {
    /// Builds the summary, deriving `sd = sqrt(variance)` so both share
    /// the same definedness.
    pub fn new(mode: Stat, mean: Stat, variance: Stat) -> Self {
        let sd = match &variance {
            Stat::Defined(v) => Stat::Defined(v.sqrt()),
            Stat::Undefined(c) => Stat::Undefined(c.clone()),
        };
        Self {
            mode,
            mean,
            variance,
            sd,
        }
    }
}

/// `a * ln(x)` with the convention `0 * ln(0) = 0`.
pub(crate) fn xlogy(a: f64, x: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * x.ln()
    }
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    statrs::function::beta::ln_beta(a, b)
}
