use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sampler::Chain;

pub const QUANTILE_LEVELS: [f64; 5] = [0.025, 0.25, 0.5, 0.75, 0.975];
const BATCHES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSummary {
    pub mean: f64,
    /// Sample standard deviation, `n − 1` denominator.
    pub sd: f64,
    /// `sd / √n`.
    pub naive_se: f64,
    /// Batch-means estimate over 20 batches; equals `naive_se` below 40 draws.
    pub time_series_se: f64,
    /// At [`QUANTILE_LEVELS`].
    pub quantiles: [f64; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub n: usize,
    pub variables: BTreeMap<String, VariableSummary>,
}

/// Quantile of sorted data by inclusive linear interpolation: with
/// `h = (n − 1)·p`, returns `x[⌊h⌋] + (h − ⌊h⌋)(x[⌊h⌋+1] − x[⌊h⌋])`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let ss = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    (mean, if x.len() > 1 { ss / (n - 1.0) } else { 0.0 })
}

fn batch_means_se(x: &[f64]) -> f64 {
    let b = x.len() / BATCHES;
    let means: Vec<f64> = x
        .chunks_exact(b)
        .take(BATCHES)
        .map(|c| c.iter().sum::<f64>() / b as f64)
        .collect();
    let (_, var) = mean_var(&means);
    (var / BATCHES as f64).sqrt()
}

pub fn summarize_variable(draws: &[f64]) -> Result<VariableSummary> {
    if draws.is_empty() {
        return Err(Error::EmptySample("chain"));
    }
    let (mean, var) = mean_var(draws);
    let sd = var.sqrt();
    let naive_se = sd / (draws.len() as f64).sqrt();
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(VariableSummary {
        mean,
        sd,
        naive_se,
        time_series_se: if draws.len() >= 2 * BATCHES {
            batch_means_se(draws)
        } else {
            naive_se
        },
        quantiles: QUANTILE_LEVELS.map(|p| quantile_sorted(&sorted, p)),
    })
}

pub fn summarize_chain(chain: &Chain) -> Result<ChainSummary> {
    if chain.monitored.is_empty() {
        return Err(Error::EmptySample("chain"));
    }
    let variables = chain
        .monitored
        .iter()
        .map(|(k, v)| Ok((k.clone(), summarize_variable(v)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let n = chain.monitored.values().next().map_or(0, Vec::len);
    Ok(ChainSummary { n, variables })
}

fn g4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = (3 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.digits$}")
}

impl ChainSummary {
    /// Two aligned tables: moments with standard errors, then quantiles.
    pub fn to_text(&self) -> String {
        let width = self
            .variables
            .keys()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max(3);
        let mut s = String::new();
        let _ = writeln!(s, "Iterations = {}", self.n);
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "1. Empirical mean and standard deviation for each variable,"
        );
        let _ = writeln!(s, "   plus standard error of the mean:");
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:width$} {:>10} {:>10} {:>10} {:>15}",
            "", "Mean", "SD", "Naive SE", "Time-series SE"
        );
        for (k, v) in &self.variables {
            let _ = writeln!(
                s,
                "{k:width$} {:>10} {:>10} {:>10} {:>15}",
                g4(v.mean),
                g4(v.sd),
                g4(v.naive_se),
                g4(v.time_series_se)
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "2. Quantiles for each variable:");
        let _ = writeln!(s);
        let _ = write!(s, "{:width$}", "");
        for p in QUANTILE_LEVELS {
            let _ = write!(s, " {:>9}", format!("{}%", p * 100.0));
        }
        let _ = writeln!(s);
        for (k, v) in &self.variables {
            let _ = write!(s, "{k:width$}");
            for q in v.quantiles {
                let _ = write!(s, " {:>9}", g4(q));
            }
            let _ = writeln!(s);
        }
        s
    }
}
