use crate::distributions::{binomial, poisson, xlogy, GammaParams};
use crate::error::{Error, Result};

use super::spec::{Efficiency, ModelSpec, Variant};

/// Positive or unit-interval continuous node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cont {
    /// `r1` in variant A, `rho` otherwise.
    Top,
    R2,
    Eps(usize),
    Rb(usize),
    EpsB(usize),
}

/// Non-negative integer latent node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Disc {
    /// Signal events lost to inefficiency: `n_i − xs_i`.
    MissS(usize),
    /// Observed events attributed to signal, in `[0, x_i]`.
    Xs(usize),
    /// Background events lost to inefficiency.
    MissB(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kind {
    Log(Cont),
    Logit(Cont),
    Int(Disc),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Move {
    pub name: String,
    pub kind: Kind,
    pub initial_scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct State {
    pub top: f64,
    pub r2: f64,
    pub eps: [f64; 2],
    pub rb: [f64; 2],
    pub eps_b: [f64; 2],
    pub miss_s: [u64; 2],
    pub xs: [u64; 2],
    pub miss_b: [u64; 2],
}

impl State {
    pub fn cont(&self, c: Cont) -> f64 {
        match c {
            Cont::Top => self.top,
            Cont::R2 => self.r2,
            Cont::Eps(i) => self.eps[i],
            Cont::Rb(i) => self.rb[i],
            Cont::EpsB(i) => self.eps_b[i],
        }
    }

    pub fn cont_mut(&mut self, c: Cont) -> &mut f64 {
        match c {
            Cont::Top => &mut self.top,
            Cont::R2 => &mut self.r2,
            Cont::Eps(i) => &mut self.eps[i],
            Cont::Rb(i) => &mut self.rb[i],
            Cont::EpsB(i) => &mut self.eps_b[i],
        }
    }

    pub fn disc(&self, d: Disc) -> u64 {
        match d {
            Disc::MissS(i) => self.miss_s[i],
            Disc::Xs(i) => self.xs[i],
            Disc::MissB(i) => self.miss_b[i],
        }
    }

    pub fn disc_mut(&mut self, d: Disc) -> &mut u64 {
        match d {
            Disc::MissS(i) => &mut self.miss_s[i],
            Disc::Xs(i) => &mut self.xs[i],
            Disc::MissB(i) => &mut self.miss_b[i],
        }
    }
}

/// Variables a chain can record for a given variant.
fn available(variant: Variant) -> &'static [&'static str] {
    match variant {
        Variant::A | Variant::B => &["r1", "r2", "rho"],
        Variant::BEff => &["r1", "r2", "rho", "eps1", "eps2", "n1", "n2"],
        Variant::BEffBkg => &[
            "r1", "r2", "rho", "eps1", "eps2", "n1", "n2", "rb1", "rb2", "eps_b1", "eps_b2", "xs1",
            "xs2", "nb1", "nb2",
        ],
    }
}

/// A validated model: log-joint evaluator, update schedule and initial state.
#[derive(Debug, Clone)]
pub struct Model {
    spec: ModelSpec,
    prior_top: GammaParams,
    prior_r2: GammaParams,
    pub(crate) moves: Vec<Move>,
    monitor: Vec<String>,
    pub(crate) init: State,
}

/// Validates `spec` and lays out nodes, update moves and a starting point.
pub fn build_model(spec: ModelSpec) -> Result<Model> {
    spec.validate()?;
    let top_name = if spec.variant == Variant::A {
        "r1"
    } else {
        "rho"
    };
    let prior_top = spec.priors[top_name];
    let prior_r2 = spec.priors["r2"];

    let monitor = match &spec.monitor {
        Some(m) if m.is_empty() => return Err(Error::Config("monitor: empty list".into())),
        Some(m) => m.clone(),
        None => vec!["r1".into(), "r2".into(), "rho".into()],
    };
    let avail = available(spec.variant);
    if let Some(bad) = monitor.iter().find(|m| !avail.contains(&m.as_str())) {
        return Err(Error::Config(format!(
            "monitor: unknown variable {bad:?} for variant {:?} (available: {})",
            spec.variant,
            avail.join(", ")
        )));
    }

    let d = spec.data;
    let x = [d.x1, d.x2];
    let t = [d.t1, d.t2];
    let r_start = [(d.x1 as f64 + 1.0) / d.t1, (d.x2 as f64 + 1.0) / d.t2];
    let mut init = State {
        top: if spec.variant == Variant::A {
            r_start[0]
        } else {
            r_start[0] / r_start[1]
        },
        r2: r_start[1],
        eps: [1.0; 2],
        rb: [0.0; 2],
        eps_b: [1.0; 2],
        miss_s: [0; 2],
        xs: x,
        miss_b: [0; 2],
    };

    let mut moves = vec![
        Move {
            name: top_name.into(),
            kind: Kind::Log(Cont::Top),
            initial_scale: 0.5,
        },
        Move {
            name: "r2".into(),
            kind: Kind::Log(Cont::R2),
            initial_scale: 0.5,
        },
    ];

    if let Some(e) = spec.efficiencies {
        for (i, eff) in [e.eps1, e.eps2].into_iter().enumerate() {
            let e0 = eff.initial();
            init.eps[i] = e0;
            if let Efficiency::Beta { .. } = eff {
                moves.push(Move {
                    name: format!("eps{}", i + 1),
                    kind: Kind::Logit(Cont::Eps(i)),
                    initial_scale: 0.5,
                });
            }
            // ε fixed at 1 pins n_i to the signal count.
            if eff != Efficiency::Fixed(1.0) {
                let expected = (x[i] as f64 + 1.0) * (1.0 - e0) / e0;
                init.miss_s[i] = expected.round() as u64;
                moves.push(Move {
                    name: format!("n{}", i + 1),
                    kind: Kind::Int(Disc::MissS(i)),
                    initial_scale: expected.sqrt().max(1.0),
                });
            }
        }
    }

    if let Some(b) = spec.background {
        for (i, (prior, eff)) in [(b.rb1, b.eps_b1), (b.rb2, b.eps_b2)]
            .into_iter()
            .enumerate()
        {
            let rb0 = if prior.is_proper() {
                prior.mean()
            } else {
                r_start[i]
            };
            init.rb[i] = rb0;
            init.eps_b[i] = eff.initial();
            moves.push(Move {
                name: format!("rb{}", i + 1),
                kind: Kind::Log(Cont::Rb(i)),
                initial_scale: 0.5,
            });
            if let Efficiency::Beta { .. } = eff {
                moves.push(Move {
                    name: format!("eps_b{}", i + 1),
                    kind: Kind::Logit(Cont::EpsB(i)),
                    initial_scale: 0.5,
                });
            }
            if x[i] > 0 {
                moves.push(Move {
                    name: format!("xs{}", i + 1),
                    kind: Kind::Int(Disc::Xs(i)),
                    initial_scale: ((x[i] as f64 + 1.0).sqrt() / 2.0).max(1.0),
                });
            }
            if eff != Efficiency::Fixed(1.0) {
                let e0 = eff.initial();
                let expected = (rb0 * t[i] + 1.0) * (1.0 - e0);
                moves.push(Move {
                    name: format!("nb{}", i + 1),
                    kind: Kind::Int(Disc::MissB(i)),
                    initial_scale: expected.sqrt().max(1.0),
                });
            }
        }
    }

    let model = Model {
        spec,
        prior_top,
        prior_r2,
        moves,
        monitor,
        init,
    };
    let lp = model.log_joint(&model.init);
    if !lp.is_finite() {
        return Err(Error::Initialization(format!(
            "log-density {lp} at starting point {:?}",
            model.init
        )));
    }
    Ok(model)
}

/// Unnormalized Gamma log-density; β = 0 gives the improper power law.
fn gamma_prior(p: &GammaParams, v: f64) -> f64 {
    xlogy(p.alpha() - 1.0, v) - p.beta() * v
}

fn efficiency_prior(e: &Efficiency, v: f64) -> f64 {
    match *e {
        Efficiency::Fixed(_) => 0.0,
        Efficiency::Beta { a, b } => xlogy(a - 1.0, v) + xlogy(b - 1.0, 1.0 - v),
    }
}

impl Model {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn variant(&self) -> Variant {
        self.spec.variant
    }

    /// Recorded variables, in recording order.
    pub fn monitored(&self) -> &[String] {
        &self.monitor
    }

    /// Stochastic nodes updated by the sampler.
    pub fn stochastic_nodes(&self) -> Vec<&str> {
        self.moves.iter().map(|m| m.name.as_str()).collect()
    }

    /// Nodes computed from others.
    pub fn deterministic_nodes(&self) -> Vec<&'static str> {
        match self.spec.variant {
            Variant::A => vec!["lambda1", "lambda2", "rho"],
            _ => vec!["lambda1", "lambda2", "r1"],
        }
    }

    pub(crate) fn rates(&self, s: &State) -> [f64; 2] {
        match self.spec.variant {
            Variant::A => [s.top, s.r2],
            _ => [s.top * s.r2, s.r2],
        }
    }

    pub(crate) fn log_joint(&self, s: &State) -> f64 {
        let d = &self.spec.data;
        let x = [d.x1, d.x2];
        let t = [d.t1, d.t2];
        let r = self.rates(s);
        let mut lp = gamma_prior(&self.prior_top, s.top) + gamma_prior(&self.prior_r2, s.r2);
        for i in 0..2 {
            lp += match self.spec.variant {
                Variant::A | Variant::B => poisson::ln_pmf_unchecked(x[i], r[i] * t[i]),
                Variant::BEff => {
                    let effs = self.spec.efficiencies.expect("validated");
                    let eff = if i == 0 { effs.eps1 } else { effs.eps2 };
                    let n = x[i] + s.miss_s[i];
                    poisson::ln_pmf_unchecked(n, r[i] * t[i])
                        + binomial::ln_pmf_unchecked(x[i], n, s.eps[i])
                        + efficiency_prior(&eff, s.eps[i])
                }
                Variant::BEffBkg => {
                    let effs = self.spec.efficiencies.expect("validated");
                    let bkg = self.spec.background.expect("validated");
                    let (eff, prior_b, eff_b) = if i == 0 {
                        (effs.eps1, bkg.rb1, bkg.eps_b1)
                    } else {
                        (effs.eps2, bkg.rb2, bkg.eps_b2)
                    };
                    let xs = s.xs[i];
                    let xb = x[i] - xs;
                    let ns = xs + s.miss_s[i];
                    let nb = xb + s.miss_b[i];
                    poisson::ln_pmf_unchecked(ns, r[i] * t[i])
                        + binomial::ln_pmf_unchecked(xs, ns, s.eps[i])
                        + efficiency_prior(&eff, s.eps[i])
                        + poisson::ln_pmf_unchecked(nb, s.rb[i] * t[i])
                        + binomial::ln_pmf_unchecked(xb, nb, s.eps_b[i])
                        + efficiency_prior(&eff_b, s.eps_b[i])
                        + gamma_prior(&prior_b, s.rb[i])
                }
            };
        }
        lp
    }

    /// Whether an integer move to `value` stays inside the node's support.
    pub(crate) fn in_support(&self, d: Disc, value: i64) -> bool {
        let x = [self.spec.data.x1, self.spec.data.x2];
        match d {
            Disc::MissS(_) | Disc::MissB(_) => value >= 0,
            Disc::Xs(i) => value >= 0 && value as u64 <= x[i],
        }
    }

    pub(crate) fn value(&self, s: &State, name: &str) -> f64 {
        let r = self.rates(s);
        let x = [self.spec.data.x1, self.spec.data.x2];
        let signal = |i: usize| match self.spec.variant {
            Variant::BEffBkg => s.xs[i],
            _ => x[i],
        };
        match name {
            "r1" => r[0],
            "r2" => r[1],
            "rho" => r[0] / r[1],
            "eps1" => s.eps[0],
            "eps2" => s.eps[1],
            "n1" => (signal(0) + s.miss_s[0]) as f64,
            "n2" => (signal(1) + s.miss_s[1]) as f64,
            "rb1" => s.rb[0],
            "rb2" => s.rb[1],
            "eps_b1" => s.eps_b[0],
            "eps_b2" => s.eps_b[1],
            "xs1" => s.xs[0] as f64,
            "xs2" => s.xs[1] as f64,
            "nb1" => (x[0] - s.xs[0] + s.miss_b[0]) as f64,
            "nb2" => (x[1] - s.xs[1] + s.miss_b[1]) as f64,
            _ => unreachable!("monitor names validated at build"),
        }
    }
}
