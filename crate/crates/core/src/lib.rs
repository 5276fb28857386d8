//! Bayesian inference for Poisson process intensities and their ratio.
//!
//! The crate is organised bottom-up:
//!
//! - [`distributions`]: pmf/pdf evaluators, summaries and seeded samplers
//!   (Poisson, Skellam, Gamma, Binomial, ratio-of-Gamma, Beta prime, ...).
//! - [`inference`]: conjugate Gamma updating of λ and of rates `r = λ/T`,
//!   prior elicitation and the relative belief updating ratio.
//! - [`ratio`]: closed-form posteriors of `ρ = r1/r2` under the two causal
//!   models (A: rates first, ratio deduced; B: ratio and `r2` on top).
//! - [`montecarlo`]: forward simulation of count differences and ratios and
//!   sampling cross-checks of every closed form.
//! - [`mcmc`]: a Metropolis-within-Gibbs engine for the fixed model family
//!   (A, B, B with efficiencies, B with efficiencies and background).
//! - [`numeric`]: quadrature, CDF inversion and curve sampling.
//!
//! Rates carry units of inverse time; observation times use the same unit.

// `!(x >= 0.0)` is the NaN-rejecting guard used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
pub mod error;
pub mod inference;
pub mod mcmc;
pub mod montecarlo;
pub mod numeric;
pub mod ratio;
pub mod rng;

pub use distributions::{GammaParams, Stat, SummaryStats};
pub use error::{Error, Result};
pub use inference::{CountObservation, RateEstimate};
pub use mcmc::{Chain, ChainSummary, ModelSpec, Variant};
pub use montecarlo::RatioSampleReport;
pub use ratio::{RatioModel, RatioPosterior, RatioPosteriorSpec};
