use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "rateratio",
    version,
    about = "Bayesian inference of Poisson rates and their ratio"
)]
pub struct Cli {
    /// Master seed for every sampling step.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output file; for `mcmc`, a directory receiving chain and summaries.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Predictive distribution of count differences or ratios.
    #[command(subcommand)]
    Predict(Predict),
    /// Posterior of a single rate from x counts in time T.
    Infer(Infer),
    /// Closed-form posterior of rho = r1/r2.
    Ratio(RatioArgs),
    /// Pool several observations of one rate, or several ratio instances.
    Combine(Combine),
    /// Sampling cross-checks of the closed-form densities.
    #[command(subcommand)]
    Mc(Mc),
    /// Metropolis-within-Gibbs run of a model spec file.
    Mcmc(McmcArgs),
}

#[derive(Subcommand, Debug)]
pub enum Predict {
    /// Exact distribution of X1 − X2 for Poisson counts.
    Diff(Lambdas),
    /// Simulated distribution of X1/X2, with 0/0 and k/0 bookkeeping.
    Ratio {
        #[command(flatten)]
        lambdas: Lambdas,
        #[command(flatten)]
        hist: HistArgs,
    },
}

#[derive(Args, Debug)]
pub struct Lambdas {
    #[arg(long, value_parser = positive)]
    pub l1: f64,
    #[arg(long, value_parser = positive)]
    pub l2: f64,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct HistArgs {
    /// Number of draws.
    #[arg(long, default_value_t = 1_000_000, value_parser = at_least_one)]
    pub n: usize,
    /// Upper edge of the histogram.
    #[arg(long, value_parser = positive)]
    pub cutoff: Option<f64>,
    #[arg(long, default_value_t = rateratio::montecarlo::DEFAULT_BINS, value_parser = at_least_one)]
    pub bins: usize,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PriorArgs {
    /// Prior mean; requires --prior-sd.
    #[arg(long, value_parser = positive, requires = "prior_sd", conflicts_with_all = ["prior_alpha", "prior_beta"])]
    pub prior_mean: Option<f64>,
    #[arg(long, value_parser = positive, requires = "prior_mean")]
    pub prior_sd: Option<f64>,
    /// Prior shape; requires --prior-beta. Without any prior option the
    /// prior is flat.
    #[arg(long, value_parser = positive, requires = "prior_beta")]
    pub prior_alpha: Option<f64>,
    #[arg(long, value_parser = non_negative, requires = "prior_alpha")]
    pub prior_beta: Option<f64>,
}

#[derive(Args, Debug)]
pub struct Infer {
    #[arg(long)]
    pub x: u64,
    #[arg(long = "T", alias = "t", value_parser = positive)]
    pub t: f64,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Points of the emitted density curve.
    #[arg(long, default_value_t = rateratio::numeric::DEFAULT_CURVE_POINTS, value_parser = at_least_two)]
    pub points: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelArg {
    A,
    B,
}

#[derive(Args, Debug)]
pub struct RatioArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub model: ModelArg,
    #[arg(long)]
    pub x1: u64,
    #[arg(long = "T1", alias = "t1", value_parser = positive)]
    pub t1: f64,
    #[arg(long)]
    pub x2: u64,
    #[arg(long = "T2", alias = "t2", value_parser = positive)]
    pub t2: f64,
    /// Gamma prior on r2 (Model B only), as alpha.
    #[arg(long, value_parser = positive, requires = "prior_r2_beta")]
    pub prior_r2_alpha: Option<f64>,
    #[arg(long, value_parser = non_negative, requires = "prior_r2_alpha")]
    pub prior_r2_beta: Option<f64>,
    /// Also evaluate the other model on the same grid.
    #[arg(long)]
    pub compare: bool,
    #[arg(long, default_value_t = rateratio::numeric::DEFAULT_CURVE_POINTS, value_parser = at_least_two)]
    pub points: usize,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["obs", "pair"]))]
pub struct Combine {
    /// One observation of a single rate, as `x,T`. Repeatable.
    #[arg(long, value_parser = parse_obs)]
    pub obs: Vec<(u64, f64)>,
    /// One ratio instance, as `x1,T1,x2,T2`. Repeatable.
    #[arg(long, value_parser = parse_pair)]
    pub pair: Vec<(u64, f64, u64, f64)>,
    /// Ratio model used with --pair.
    #[arg(long, value_enum, ignore_case = true, default_value = "B")]
    pub model: ModelArg,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Also report the posterior from each observation alone.
    #[arg(long)]
    pub detail: bool,
}

#[derive(Subcommand, Debug)]
pub enum Mc {
    /// Z1/Z2 with Zi ~ Gamma(ai, bi).
    GammaRatio {
        #[arg(long, value_parser = positive)]
        a1: f64,
        #[arg(long, value_parser = positive)]
        b1: f64,
        #[arg(long, value_parser = positive)]
        a2: f64,
        #[arg(long, value_parser = positive)]
        b2: f64,
        #[command(flatten)]
        hist: HistArgs,
    },
    /// Posterior of rho under Model A by sampling Gamma(x1+1, T1)/Gamma(x2+1, T2).
    ModelA {
        #[arg(long)]
        x1: u64,
        #[arg(long = "T1", alias = "t1", value_parser = positive)]
        t1: f64,
        #[arg(long)]
        x2: u64,
        #[arg(long = "T2", alias = "t2", value_parser = positive)]
        t2: f64,
        #[command(flatten)]
        hist: HistArgs,
    },
    /// U1/U2 with both uniform on [0, r_max).
    UniformRatio {
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        r_max: f64,
        #[command(flatten)]
        hist: HistArgs,
    },
    /// rho·r2 with rho ~ U[0, rho_max), r2 ~ U[0, r2_max).
    ImpliedR1 {
        #[arg(long, value_parser = positive)]
        rho_max: f64,
        #[arg(long, value_parser = positive)]
        r2_max: f64,
        #[command(flatten)]
        hist: HistArgs,
    },
    /// Time of the k-th arrival of a Poisson process.
    Arrival {
        #[arg(long, value_parser = positive)]
        rate: f64,
        #[arg(long, default_value_t = 1, value_parser = at_least_one)]
        k: usize,
        #[command(flatten)]
        hist: HistArgs,
    },
}

#[derive(Args, Debug)]
pub struct McmcArgs {
    /// JSON model spec file.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 100_000, value_parser = at_least_one)]
    pub n_iter: usize,
    /// Defaults to max(1000, n_iter/100).
    #[arg(long)]
    pub burn_in: Option<usize>,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} must be positive and finite"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} must be non-negative and finite"))
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn at_least_two(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 2 => Ok(v),
        Ok(_) => Err("must be at least 2".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn fields(s: &str, n: usize) -> Result<Vec<&str>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(format!(
            "expected {n} comma-separated values, got {}",
            parts.len()
        ));
    }
    Ok(parts)
}

fn parse_obs(s: &str) -> Result<(u64, f64), String> {
    let p = fields(s, 2)?;
    Ok((
        p[0].parse().map_err(|e| format!("x: {e}"))?,
        positive(p[1])?,
    ))
}

fn parse_pair(s: &str) -> Result<(u64, f64, u64, f64), String> {
    let p = fields(s, 4)?;
    Ok((
        p[0].parse().map_err(|e| format!("x1: {e}"))?,
        positive(p[1])?,
        p[2].parse().map_err(|e| format!("x2: {e}"))?,
        positive(p[3])?,
    ))
}
