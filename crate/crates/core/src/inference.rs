//! Conjugate updating of Poisson intensities.
//!
//! With a `Gamma(α0, β0)` prior, observing `x` counts yields
//! `Gamma(α0 + x, β0 + 1)` for the Poisson mean λ and
//! `Gamma(α0 + x, β0 + T)` for a rate `r = λ/T` observed for a time `T`.

use serde::{Deserialize, Serialize};

use crate::distributions::{gamma_summaries, GammaParams, SummaryStats};
use crate::error::{ensure_positive, Error, Result};

/// `x` counts observed in a live time `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawObservation", into = "RawObservation")]
pub struct CountObservation {
    x: u64,
    t: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObservation {
    x: u64,
    t: f64,
}

impl TryFrom<RawObservation> for CountObservation {
    type Error = Error;

    fn try_from(raw: RawObservation) -> Result<Self> {
        CountObservation::new(raw.x, raw.t)
    }
}

impl From<CountObservation> for RawObservation {
    fn from(o: CountObservation) -> Self {
        RawObservation { x: o.x, t: o.t }
    }
}

impl CountObservation {
    pub fn new(x: u64, t: f64) -> Result<Self> {
        ensure_positive("observation time T", t)?;
        Ok(Self { x, t })
    }

    pub fn counts(&self) -> u64 {
        self.x
    }

    pub fn time(&self) -> f64 {
        self.t
    }
}

/// A rate posterior together with its summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub posterior: GammaParams,
    pub summaries: SummaryStats,
}

impl RateEstimate {
    pub fn from_posterior(posterior: GammaParams) -> Result<Self> {
        Ok(Self {
            summaries: gamma_summaries(&posterior)?,
            posterior,
        })
    }
}

/// Posterior of a Poisson mean λ after observing `x` counts.
pub fn update_lambda(prior: &GammaParams, x: u64) -> GammaParams {
    GammaParams::new_prior(prior.alpha() + x as f64, prior.beta() + 1.0)
        .expect("update keeps parameters valid")
}

/// Posterior of a rate after one observation.
pub fn update_rate(prior: &GammaParams, obs: &CountObservation) -> GammaParams {
    GammaParams::new_prior(prior.alpha() + obs.x as f64, prior.beta() + obs.t)
        .expect("update keeps parameters valid")
}

/// Posterior after pooling all observations: `(α0 + Σx, β0 + ΣT)`.
pub fn combine_observations(prior: &GammaParams, obs: &[CountObservation]) -> Result<GammaParams> {
    if obs.is_empty() {
        return Err(Error::EmptySample(
            "combine_observations requires at least one observation",
        ));
    }
    let x: u64 = obs.iter().map(|o| o.x).sum();
    let t: f64 = obs.iter().map(|o| o.t).sum();
    GammaParams::new_prior(prior.alpha() + x as f64, prior.beta() + t)
}

/// Flat-prior (or given-prior) rate estimate for one observation.
pub fn estimate_rate(prior: &GammaParams, obs: &CountObservation) -> Result<RateEstimate> {
    RateEstimate::from_posterior(update_rate(prior, obs))
}

/// Gamma prior with mean `mu0` and standard deviation `sigma0`:
/// `α0 = μ0²/σ0²`, `β0 = μ0/σ0²`.
pub fn elicit_gamma(mu0: f64, sigma0: f64) -> Result<GammaParams> {
    ensure_positive("prior mean mu0", mu0)?;
    ensure_positive("prior standard deviation sigma0", sigma0)?;
    let var = sigma0 * sigma0;
    GammaParams::new(mu0 * mu0 / var, mu0 / var)
}

/// Log-likelihood of a rate, up to a constant: `x ln r − rT`.
pub fn rate_ln_likelihood(r: f64, obs: &CountObservation) -> Result<f64> {
    crate::error::ensure_non_negative("rate r", r)?;
    Ok(crate::distributions::xlogy(obs.x as f64, r) - r * obs.t)
}

/// `L(r; x, T) / L(r_ref; x, T)`: how the observation reshapes beliefs about
/// `r` relative to the reference value.
///
/// For `x = 0` and `r_ref = 0` this is `e^{−rT}`. A reference at which the
/// likelihood vanishes (`r_ref = 0` with `x > 0`) is rejected.
pub fn relative_belief_ratio(r: f64, obs: &CountObservation, r_ref: f64) -> Result<f64> {
    let ln_ref = rate_ln_likelihood(r_ref, obs)?;
    if ln_ref == f64::NEG_INFINITY {
        return Err(Error::Reference { r_ref, x: obs.x });
    }
    Ok((rate_ln_likelihood(r, obs)? - ln_ref).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(x: u64, t: f64) -> CountObservation {
        CountObservation::new(x, t).unwrap()
    }

    #[test]
    fn observation_validation() {
        assert!(CountObservation::new(3, 0.0).is_err());
        assert!(CountObservation::new(3, -1.0).is_err());
        assert!(CountObservation::new(3, f64::INFINITY).is_err());
        assert!(serde_json::from_str::<CountObservation>(r#"{"x": 3, "t": 0}"#).is_err());
        assert!(serde_json::from_str::<CountObservation>(r#"{"x": -3, "t": 1}"#).is_err());
    }

    #[test]
    fn lambda_update() {
        let p = update_lambda(&GammaParams::flat(), 0);
        assert_eq!((p.alpha(), p.beta()), (1.0, 1.0));
        let s = gamma_summaries(&p).unwrap();
        assert_eq!(s.mean.expect_defined(), 1.0);
        assert_eq!(s.sd.expect_defined(), 1.0);
        assert_eq!(s.mode.expect_defined(), 0.0);

        let p = update_lambda(&GammaParams::flat(), 5);
        assert_eq!((p.alpha(), p.beta()), (6.0, 1.0));

        let seq = update_lambda(&update_lambda(&GammaParams::flat(), 2), 3);
        assert_eq!((seq.alpha(), seq.beta()), (6.0, 2.0));
    }

    #[test]
    fn rate_update_reference_values() {
        let e = estimate_rate(&GammaParams::flat(), &obs(3, 3.0)).unwrap();
        assert_eq!((e.posterior.alpha(), e.posterior.beta()), (4.0, 3.0));
        assert!((e.summaries.mean.expect_defined() - 1.333).abs() < 5e-4);
        assert!((e.summaries.sd.expect_defined() - 0.667).abs() < 5e-4);

        let e = estimate_rate(&GammaParams::flat(), &obs(6, 6.0)).unwrap();
        assert!((e.summaries.mean.expect_defined() - 1.167).abs() < 5e-4);
        assert!((e.summaries.sd.expect_defined() - 0.441).abs() < 5e-4);

        let prior = GammaParams::new(6.25, 1.25).unwrap();
        assert_eq!(update_rate(&prior, &obs(0, 1e-300)), prior);
    }

    #[test]
    fn flat_prior_closed_forms_on_grid() {
        for t in [0.5, 1.0, 3.0, 6.0] {
            for x in 0..=100u64 {
                let e = estimate_rate(&GammaParams::flat(), &obs(x, t)).unwrap();
                assert_eq!(e.summaries.mean.expect_defined(), (x + 1) as f64 / t);
                assert_eq!(e.summaries.mode.expect_defined(), x as f64 / t);
                assert!(
                    (e.summaries.sd.expect_defined() - ((x + 1) as f64).sqrt() / t).abs() < 1e-12
                );
            }
        }
    }

    #[test]
    fn combination() {
        let data = [obs(3, 3.0), obs(6, 6.0)];
        let c = combine_observations(&GammaParams::flat(), &data).unwrap();
        assert_eq!((c.alpha(), c.beta()), (10.0, 9.0));
        let rev = [data[1], data[0]];
        assert_eq!(combine_observations(&GammaParams::flat(), &rev).unwrap(), c);
        let folded = data
            .iter()
            .fold(GammaParams::flat(), |p, o| update_rate(&p, o));
        assert_eq!(folded, c);
        assert!(combine_observations(&GammaParams::flat(), &[]).is_err());
    }

    #[test]
    fn elicitation() {
        let p = elicit_gamma(5.0, 2.0).unwrap();
        assert_eq!((p.alpha(), p.beta()), (6.25, 1.25));
        let p = elicit_gamma(1.0, 1.0).unwrap();
        assert_eq!((p.alpha(), p.beta()), (1.0, 1.0));
        let s = gamma_summaries(&elicit_gamma(3.0, 0.5).unwrap()).unwrap();
        assert!((s.mean.expect_defined() - 3.0).abs() < 1e-14);
        assert!((s.sd.expect_defined() - 0.5).abs() < 1e-14);
        assert!(elicit_gamma(0.0, 1.0).is_err());
        assert!(elicit_gamma(1.0, -1.0).is_err());
    }

    #[test]
    fn belief_ratio() {
        assert_eq!(relative_belief_ratio(0.0, &obs(0, 2.0), 0.0).unwrap(), 1.0);
        let v = relative_belief_ratio(1.0, &obs(0, 1.0), 0.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(
            relative_belief_ratio(1.0, &obs(2, 1.0), 0.0),
            Err(Error::Reference { r_ref: 0.0, x: 2 })
        );
        // With counts, a positive reference works and r = 0 is excluded.
        assert_eq!(relative_belief_ratio(0.0, &obs(2, 1.0), 1.0).unwrap(), 0.0);
        assert_eq!(relative_belief_ratio(2.5, &obs(2, 1.0), 2.5).unwrap(), 1.0);
    }

    #[test]
    fn zero_count_sensitivity_plateau() {
        for t in [0.1, 1.0, 10.0, 100.0] {
            let o = obs(0, t);
            for rt in [1e-5, 1e-3, 0.009] {
                assert!(relative_belief_ratio(rt / t, &o, 0.0).unwrap() > 0.99);
            }
            for rt in [21.5, 50.0, 1e3] {
                assert!(relative_belief_ratio(rt / t, &o, 0.0).unwrap() < 1e-9);
            }
        }
    }
}
