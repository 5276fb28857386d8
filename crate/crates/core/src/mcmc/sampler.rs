use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded;

use super::model::{Kind, Model, State};

const TARGET_ACCEPTANCE: f64 = 0.44;
const ADAPT_BATCH: usize = 50;

/// Post-burn-in draws of the monitored variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub monitored: BTreeMap<String, Vec<f64>>,
    pub n_iter: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// Post-burn-in acceptance rate per stochastic node.
    pub acceptance: BTreeMap<String, f64>,
}

impl Chain {
    pub fn draws(&self, name: &str) -> Option<&[f64]> {
        self.monitored.get(name).map(Vec::as_slice)
    }

    /// CSV with an `iteration` column (1-based, post burn-in) and one column
    /// per monitored variable.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let names: Vec<&String> = self.monitored.keys().collect();
        write!(w, "iteration")?;
        for n in &names {
            write!(w, ",{n}")?;
        }
        writeln!(w)?;
        for i in 0..self.n_iter {
            write!(w, "{}", i + 1)?;
            for n in &names {
                write!(w, ",{}", self.monitored[*n][i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

struct MoveState {
    log_scale: f64,
    accepted: usize,
    tried: usize,
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn logistic(y: f64) -> f64 {
    1.0 / (1.0 + (-y).exp())
}

/// One Metropolis update of move `k`; returns whether it was accepted.
fn step<R: Rng + ?Sized>(
    model: &Model,
    k: usize,
    scale: f64,
    s: &mut State,
    lp: &mut f64,
    rng: &mut R,
) -> bool {
    let mut prop = s.clone();
    let log_jac = match model.moves[k].kind {
        Kind::Log(c) => {
            let dz = scale * rng.sample::<f64, _>(StandardNormal);
            *prop.cont_mut(c) = s.cont(c) * dz.exp();
            dz
        }
        Kind::Logit(c) => {
            let old = s.cont(c);
            let new = logistic(logit(old) + scale * rng.sample::<f64, _>(StandardNormal));
            if !(new > 0.0 && new < 1.0) {
                return false;
            }
            *prop.cont_mut(c) = new;
            new.ln() + (1.0 - new).ln() - old.ln() - (1.0 - old).ln()
        }
        Kind::Int(d) => {
            let width = scale.round().max(1.0) as i64;
            let mag = rng.random_range(1..=width);
            let delta = if rng.random::<bool>() { mag } else { -mag };
            let target = s.disc(d) as i64 + delta;
            if !model.in_support(d, target) {
                return false;
            }
            *prop.disc_mut(d) = target as u64;
            0.0
        }
    };
    let lp_new = model.log_joint(&prop);
    if lp_new.is_nan() {
        return false;
    }
    let log_ratio = lp_new - *lp + log_jac;
    if log_ratio >= 0.0 || rng.random::<f64>().ln() < log_ratio {
        *s = prop;
        *lp = lp_new;
        true
    } else {
        false
    }
}

/// Runs `burn_in` adaptive iterations, then records `n_iter` draws with
/// frozen step sizes. Each iteration updates every stochastic node once.
pub fn run_chain(model: &Model, n_iter: usize, burn_in: usize, seed: u64) -> Result<Chain> {
    if n_iter == 0 {
        return Err(Error::Config("n_iter must be at least 1".into()));
    }
    let mut rng = seeded(seed);
    let mut s = model.init.clone();
    let mut lp = model.log_joint(&s);
    if !lp.is_finite() {
        return Err(Error::Initialization(format!("log-density {lp} at {s:?}")));
    }
    let mut moves: Vec<MoveState> = model
        .moves
        .iter()
        .map(|m| MoveState {
            log_scale: m.initial_scale.ln(),
            accepted: 0,
            tried: 0,
        })
        .collect();

    let mut batch = 0usize;
    for it in 1..=burn_in {
        for (k, ms) in moves.iter_mut().enumerate() {
            ms.tried += 1;
            ms.accepted += step(model, k, ms.log_scale.exp(), &mut s, &mut lp, &mut rng) as usize;
        }
        if it % ADAPT_BATCH == 0 {
            batch += 1;
            let delta = (1.0 / (batch as f64).sqrt()).clamp(0.01, 0.1);
            for ms in &mut moves {
                let rate = ms.accepted as f64 / ms.tried as f64;
                ms.log_scale += if rate > TARGET_ACCEPTANCE {
                    delta
                } else {
                    -delta
                };
                ms.accepted = 0;
                ms.tried = 0;
            }
        }
    }
    for ms in &mut moves {
        ms.accepted = 0;
        ms.tried = 0;
    }

    let names = model.monitored();
    let mut draws: Vec<Vec<f64>> = names.iter().map(|_| Vec::with_capacity(n_iter)).collect();
    for _ in 0..n_iter {
        for (k, ms) in moves.iter_mut().enumerate() {
            ms.tried += 1;
            ms.accepted += step(model, k, ms.log_scale.exp(), &mut s, &mut lp, &mut rng) as usize;
        }
        for (v, name) in draws.iter_mut().zip(names) {
            v.push(model.value(&s, name));
        }
    }

    Ok(Chain {
        monitored: names.iter().cloned().zip(draws).collect(),
        n_iter,
        burn_in,
        seed,
        acceptance: model
            .moves
            .iter()
            .zip(&moves)
            .map(|(m, ms)| (m.name.clone(), ms.accepted as f64 / ms.tried as f64))
            .collect(),
    })
}

/// Independent chains in parallel; chain `i` uses seed `seed + i`.
pub fn run_chains(
    model: &Model,
    n_chains: usize,
    n_iter: usize,
    burn_in: usize,
    seed: u64,
) -> Result<Vec<Chain>> {
    (0..n_chains as u64)
        .into_par_iter()
        .map(|i| run_chain(model, n_iter, burn_in, seed.wrapping_add(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcmc::{build_model, Data, ModelSpec};

    const DATA: Data = Data {
        x1: 3,
        t1: 3.0,
        x2: 6,
        t2: 6.0,
    };

    #[test]
    fn reproducible_per_seed() {
        let m = build_model(ModelSpec::model_b(DATA)).unwrap();
        let a = run_chain(&m, 2000, 500, 11).unwrap();
        let b = run_chain(&m, 2000, 500, 11).unwrap();
        assert_eq!(a, b);
        let c = run_chain(&m, 2000, 500, 12).unwrap();
        assert_ne!(a.monitored["rho"], c.monitored["rho"]);
    }

    #[test]
    fn lengths_positivity_and_acceptance() {
        let m = build_model(ModelSpec::model_a(DATA)).unwrap();
        let c = run_chain(&m, 5000, 1000, 3).unwrap();
        for v in c.monitored.values() {
            assert_eq!(v.len(), 5000);
            assert!(v.iter().all(|&x| x > 0.0 && x.is_finite()));
        }
        for (name, &a) in &c.acceptance {
            assert!((0.25..0.65).contains(&a), "{name} acceptance {a}");
        }
    }

    #[test]
    fn zero_iterations_rejected() {
        let m = build_model(ModelSpec::model_a(DATA)).unwrap();
        assert!(run_chain(&m, 0, 10, 1).is_err());
    }

    #[test]
    fn csv_layout() {
        let m = build_model(ModelSpec::model_a(DATA)).unwrap();
        let c = run_chain(&m, 3, 10, 1).unwrap();
        let mut out = Vec::new();
        c.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "iteration,r1,r2,rho");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("3,"));
    }

    #[test]
    fn parallel_chains_match_serial() {
        let m = build_model(ModelSpec::model_a(DATA)).unwrap();
        let all = run_chains(&m, 3, 500, 100, 40).unwrap();
        assert_eq!(all[2], run_chain(&m, 500, 100, 42).unwrap());
    }
}
