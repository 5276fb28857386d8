use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::distributions::GammaParams;
use crate::error::{Error, Result};

/// Rate parameter of the Gamma(1, β) priors standing in for flat priors.
pub const FLAT_PRIOR_RATE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
    #[serde(rename = "B_EFF")]
    BEff,
    #[serde(rename = "B_EFF_BKG")]
    BEffBkg,
}

impl Variant {
    /// Top nodes that must carry a prior.
    pub fn required_priors(&self) -> &'static [&'static str] {
        match self {
            Variant::A => &["r1", "r2"],
            _ => &["rho", "r2"],
        }
    }
}

/// Observed counts and live times of the two processes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Data {
    pub x1: u64,
    pub t1: f64,
    pub x2: u64,
    pub t2: f64,
}

/// A detection efficiency, either known exactly or uncertain with a Beta
/// distribution calibrated elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Efficiency {
    Fixed(f64),
    Beta { a: f64, b: f64 },
}

impl Efficiency {
    pub(crate) fn validate(&self, path: &str) -> Result<()> {
        match *self {
            Efficiency::Fixed(e) if e > 0.0 && e <= 1.0 => Ok(()),
            Efficiency::Fixed(e) => Err(Error::Config(format!(
                "{path}: fixed efficiency {e} not in (0, 1]"
            ))),
            Efficiency::Beta { a, b } if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() => {
                Ok(())
            }
            Efficiency::Beta { a, b } => Err(Error::Config(format!(
                "{path}: beta parameters ({a}, {b}) must be positive"
            ))),
        }
    }

    pub(crate) fn initial(&self) -> f64 {
        match *self {
            Efficiency::Fixed(e) => e,
            Efficiency::Beta { a, b } => a / (a + b),
        }
    }
}

fn unit_efficiency() -> Efficiency {
    Efficiency::Fixed(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Efficiencies {
    pub eps1: Efficiency,
    pub eps2: Efficiency,
}

/// One background process per channel, each with an explicit Gamma prior
/// on its rate and its own efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Background {
    pub rb1: GammaParams,
    pub rb2: GammaParams,
    #[serde(default = "unit_efficiency")]
    pub eps_b1: Efficiency,
    #[serde(default = "unit_efficiency")]
    pub eps_b2: Efficiency,
}

/// Declarative description of a model run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub variant: Variant,
    pub data: Data,
    /// Priors keyed by top-node name (`r1`, `r2`, `rho`).
    pub priors: BTreeMap<String, GammaParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiencies: Option<Efficiencies>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<Background>,
    /// Variables to record; defaults to `r1`, `r2`, `rho`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monitor: Option<Vec<String>>,
}

fn flat() -> GammaParams {
    GammaParams::new(1.0, FLAT_PRIOR_RATE).expect("valid constant")
}

impl ModelSpec {
    /// Model A with Gamma(1, 1e−6) priors on both rates.
    pub fn model_a(data: Data) -> Self {
        Self::with_flat_priors(Variant::A, data)
    }

    /// Model B with Gamma(1, 1e−6) priors on `rho` and `r2`.
    pub fn model_b(data: Data) -> Self {
        Self::with_flat_priors(Variant::B, data)
    }

    pub fn model_b_eff(data: Data, efficiencies: Efficiencies) -> Self {
        let mut s = Self::with_flat_priors(Variant::BEff, data);
        s.efficiencies = Some(efficiencies);
        s
    }

    pub fn model_b_eff_bkg(data: Data, efficiencies: Efficiencies, background: Background) -> Self {
        let mut s = Self::model_b_eff(data, efficiencies);
        s.variant = Variant::BEffBkg;
        s.background = Some(background);
        s
    }

    fn with_flat_priors(variant: Variant, data: Data) -> Self {
        let priors = variant
            .required_priors()
            .iter()
            .map(|k| (k.to_string(), flat()))
            .collect();
        Self {
            variant,
            data,
            priors,
            efficiencies: None,
            background: None,
            monitor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = &self.data;
        for (name, t) in [("data.t1", d.t1), ("data.t2", d.t2)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!(
                    "{name}: live time {t} must be positive"
                )));
            }
        }
        let required = self.variant.required_priors();
        for name in required {
            if !self.priors.contains_key(*name) {
                return Err(Error::Config(format!(
                    "priors.{name}: missing prior for top node"
                )));
            }
        }
        if let Some(extra) = self.priors.keys().find(|k| !required.contains(&k.as_str())) {
            return Err(Error::Config(format!(
                "priors.{extra}: not a top node of variant {:?}",
                self.variant
            )));
        }
        let wants_eff = matches!(self.variant, Variant::BEff | Variant::BEffBkg);
        match (&self.efficiencies, wants_eff) {
            (Some(e), true) => {
                e.eps1.validate("efficiencies.eps1")?;
                e.eps2.validate("efficiencies.eps2")?;
            }
            (None, true) => {
                return Err(Error::Config(
                    "efficiencies: required by this variant".into(),
                ))
            }
            (Some(_), false) => {
                return Err(Error::Config(
                    "efficiencies: only valid for B_EFF and B_EFF_BKG".into(),
                ))
            }
            (None, false) => {}
        }
        match (&self.background, self.variant == Variant::BEffBkg) {
            (Some(b), true) => {
                b.eps_b1.validate("background.eps_b1")?;
                b.eps_b2.validate("background.eps_b2")?;
            }
            (None, true) => return Err(Error::Config("background: required by B_EFF_BKG".into())),
            (Some(_), false) => {
                return Err(Error::Config("background: only valid for B_EFF_BKG".into()))
            }
            (None, false) => {}
        }
        Ok(())
    }
}
