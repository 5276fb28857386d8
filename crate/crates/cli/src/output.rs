use std::fmt::Write as _;

use rateratio::numeric::Curve;
use rateratio::{GammaParams, RatioSampleReport, SummaryStats};
use serde_json::Value;

/// One command result rendered three ways; `--format` picks one.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub csv: String,
}

pub fn gamma_label(p: &GammaParams) -> String {
    format!("Gamma(alpha={}, beta={})", p.alpha(), p.beta())
}

pub fn summary_text(s: &SummaryStats) -> String {
    format!(
        "mode  {:.4}\nmean  {:.4}\nsd    {:.4}\n",
        s.mode, s.mean, s.sd
    )
}

pub fn curve_csv(header: &str, x: &[f64], columns: &[&[f64]]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{header}");
    for (i, xi) in x.iter().enumerate() {
        let _ = write!(s, "{xi}");
        for c in columns {
            let _ = write!(s, ",{}", c[i]);
        }
        let _ = writeln!(s);
    }
    s
}

pub fn single_curve_csv(c: &Curve) -> String {
    curve_csv("x,density", &c.x, &[&c.density])
}

pub fn sample_report(kind: &str, params: Value, r: &RatioSampleReport) -> Output {
    let mut text = String::new();
    let _ = writeln!(text, "{kind}  n={}  seed={}", r.n, r.seed);
    let _ = writeln!(text, "mean           {:.6}", r.mean);
    let _ = writeln!(text, "sd             {:.6}", r.sd);
    let _ = writeln!(text, "mode estimate  {:.4}", r.mode_estimate);
    let _ = writeln!(text, "frac NaN       {:.6}", r.frac_nan);
    let _ = writeln!(text, "frac Inf       {:.6}", r.frac_inf);
    let _ = writeln!(
        text,
        "frac overflow  {:.6}  (beyond cutoff {})",
        r.frac_overflow, r.histogram.cutoff
    );
    let _ = writeln!(
        text,
        "in histogram   {:.6}  ({} bins)",
        r.in_histogram_mass(),
        r.histogram.counts.len()
    );
    let mut csv = Vec::new();
    r.histogram.write_csv(&mut csv).expect("writing to memory");
    Output {
        json: serde_json::json!({ "kind": kind, "parameters": params, "report": r }),
        text,
        csv: String::from_utf8(csv).expect("ascii csv"),
    }
}
