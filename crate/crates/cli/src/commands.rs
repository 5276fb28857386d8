use std::fmt::Write as _;
use std::fs;

use rateratio::distributions::{gamma_pdf, skellam_table, skellam_truncation};
use rateratio::inference::{combine_observations, elicit_gamma, estimate_rate, update_rate};
use rateratio::mcmc::{build_model, default_burn_in, run_chain, summarize_chain, ModelSpec};
use rateratio::montecarlo::{
    simulate_count_ratio, simulate_gamma_ratio, simulate_implied_r1, simulate_kth_arrival,
    simulate_uniform_ratio, DEFAULT_CUTOFF,
};
use rateratio::numeric::{quantile, sample_curve, DEFAULT_CURVE_QUANTILE};
use rateratio::{
    CountObservation, GammaParams, RateEstimate, RatioModel, RatioPosterior, RatioPosteriorSpec,
};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::*;
use crate::CliError;

const INTERVAL: [f64; 3] = [0.025, 0.5, 0.975];

fn model(m: ModelArg) -> RatioModel {
    match m {
        ModelArg::A => RatioModel::A,
        ModelArg::B => RatioModel::B,
    }
}

fn prior(p: &PriorArgs) -> rateratio::Result<GammaParams> {
    match (p.prior_mean, p.prior_sd, p.prior_alpha, p.prior_beta) {
        (Some(m), Some(s), _, _) => elicit_gamma(m, s),
        (_, _, Some(a), Some(b)) => GammaParams::new_prior(a, b),
        _ => Ok(GammaParams::flat()),
    }
}

pub fn predict(p: &Predict, seed: u64) -> Result<Output, CliError> {
    match p {
        Predict::Diff(l) => {
            let table = skellam_table(l.l1, l.l2)?;
            let xmax = skellam_truncation(l.l1, l.l2);
            let rows: Vec<Value> = table
                .iter()
                .map(|(d, p)| json!({ "d": d, "p": p }))
                .collect();
            let mut text = format!(
                "D = X1 - X2,  lambda1={}  lambda2={}  truncation xmax={xmax}\nmean {:.6}  sd {:.6}\n\n     d  P(D=d)\n",
                l.l1,
                l.l2,
                table.mean() + 0.0,
                table.sd()
            );
            let mut csv = String::from("d,probability\n");
            for (d, p) in table.iter() {
                let _ = writeln!(csv, "{d},{p}");
                if p >= 5e-7 {
                    let _ = writeln!(text, "{d:>6}  {p:.6}");
                }
            }
            Ok(Output {
                json: json!({
                    "lambda1": l.l1, "lambda2": l.l2, "xmax": xmax,
                    "mean": table.mean(), "sd": table.sd(), "table": rows,
                }),
                text,
                csv,
            })
        }
        Predict::Ratio { lambdas: l, hist } => {
            let cutoff = hist.cutoff.unwrap_or(DEFAULT_CUTOFF);
            let r = simulate_count_ratio(l.l1, l.l2, hist.n, cutoff, hist.bins, seed)?;
            Ok(sample_report(
                "count ratio X1/X2",
                json!({ "lambda1": l.l1, "lambda2": l.l2 }),
                &r,
            ))
        }
    }
}

pub fn infer(a: &Infer) -> Result<Output, CliError> {
    let prior = prior(&a.prior)?;
    let obs = CountObservation::new(a.x, a.t)?;
    let est = estimate_rate(&prior, &obs)?;
    let post = est.posterior;
    let curve = sample_curve(
        |r| gamma_pdf(r, &post).unwrap_or(0.0),
        a.points,
        DEFAULT_CURVE_QUANTILE,
    )?;
    let text = format!(
        "observation  x={}  T={}\nprior        {}\nposterior    {}\n{}",
        a.x,
        a.t,
        gamma_label(&prior),
        gamma_label(&post),
        summary_text(&est.summaries)
    );
    Ok(Output {
        json: json!({
            "observation": obs, "prior": prior, "posterior": post,
            "summaries": est.summaries, "curve": curve,
        }),
        text,
        csv: single_curve_csv(&curve),
    })
}

struct Evaluated {
    label: &'static str,
    post: RatioPosterior,
    interval: Vec<f64>,
    rates: (GammaParams, GammaParams),
}

fn evaluate(label: &'static str, spec: RatioPosteriorSpec) -> Result<Evaluated, CliError> {
    let post = RatioPosterior::new(spec)?;
    let interval = INTERVAL
        .iter()
        .map(|&p| post.quantile(p))
        .collect::<rateratio::Result<_>>()?;
    let rates = post.rate_posteriors()?;
    Ok(Evaluated {
        label,
        post,
        interval,
        rates,
    })
}

fn evaluated_json(e: &Evaluated) -> Value {
    json!({
        "model": e.label,
        "spec": e.post.spec,
        "summaries": e.post.summaries,
        "quantiles": { "p2.5": e.interval[0], "p50": e.interval[1], "p97.5": e.interval[2] },
        "rate_posteriors": { "r1": e.rates.0, "r2": e.rates.1 },
    })
}

fn evaluated_text(e: &Evaluated) -> String {
    format!(
        "model {}\nr1 ~ {}\nr2 ~ {}\nrho:\n{}median {:.4}\n95% central interval [{:.4}, {:.4}]\n",
        e.label,
        gamma_label(&e.rates.0),
        gamma_label(&e.rates.1),
        summary_text(&e.post.summaries),
        e.interval[1],
        e.interval[0],
        e.interval[2]
    )
}

fn ratio_output(models: Vec<Evaluated>, points: usize) -> Result<Output, CliError> {
    let mut upper: f64 = 0.0;
    for m in &models {
        upper = upper.max(quantile(|r| m.post.pdf(r), DEFAULT_CURVE_QUANTILE, 1e-6)?);
    }
    let step = upper / (points - 1) as f64;
    let x: Vec<f64> = (0..points).map(|i| i as f64 * step).collect();
    let columns: Vec<Vec<f64>> = models
        .iter()
        .map(|m| x.iter().map(|&r| m.post.pdf(r)).collect())
        .collect();
    let header = std::iter::once("rho")
        .chain(models.iter().map(|m| m.label))
        .collect::<Vec<_>>()
        .join(",");
    let col_refs: Vec<&[f64]> = columns.iter().map(Vec::as_slice).collect();
    let mut curve = serde_json::Map::new();
    curve.insert("rho".into(), json!(x));
    for (m, c) in models.iter().zip(&columns) {
        curve.insert(m.label.into(), json!(c));
    }
    Ok(Output {
        json: json!({
            "posteriors": models.iter().map(evaluated_json).collect::<Vec<_>>(),
            "curve": curve,
        }),
        text: models
            .iter()
            .map(evaluated_text)
            .collect::<Vec<_>>()
            .join("\n"),
        csv: curve_csv(&header, &x, &col_refs),
    })
}

pub fn ratio(a: &RatioArgs) -> Result<Output, CliError> {
    let d1 = CountObservation::new(a.x1, a.t1)?;
    let d2 = CountObservation::new(a.x2, a.t2)?;
    let prior_r2 = match (a.prior_r2_alpha, a.prior_r2_beta) {
        (Some(al), Some(be)) => GammaParams::new_prior(al, be)?,
        _ => GammaParams::flat(),
    };
    let spec_for = |m: RatioModel| {
        let s = RatioPosteriorSpec::new(m, d1, d2);
        if m == RatioModel::B {
            s.with_prior_r2(prior_r2)
        } else {
            s
        }
    };
    let primary = model(a.model);
    if primary == RatioModel::A && prior_r2 != GammaParams::flat() {
        return Err(CliError::Usage(
            "--prior-r2-* applies to model B only".into(),
        ));
    }
    let label = |m: RatioModel| if m == RatioModel::A { "A" } else { "B" };
    let mut models = vec![evaluate(label(primary), spec_for(primary))?];
    if a.compare {
        let other = if primary == RatioModel::A {
            RatioModel::B
        } else {
            RatioModel::A
        };
        models.push(evaluate(label(other), spec_for(other))?);
        models.sort_by_key(|m| m.label);
    }
    ratio_output(models, a.points)
}

pub fn combine(a: &Combine) -> Result<Output, CliError> {
    let prior = prior(&a.prior)?;
    if !a.obs.is_empty() {
        if !a.pair.is_empty() {
            return Err(CliError::Usage("--obs and --pair cannot be mixed".into()));
        }
        let obs = a
            .obs
            .iter()
            .map(|&(x, t)| CountObservation::new(x, t))
            .collect::<rateratio::Result<Vec<_>>>()?;
        let pooled = RateEstimate::from_posterior(combine_observations(&prior, &obs)?)?;
        let mut rows = vec![("pooled".to_string(), pooled.clone())];
        if a.detail {
            for (i, o) in obs.iter().enumerate() {
                let p = update_rate(&prior, o);
                rows.push((
                    format!("obs{} x={} T={}", i + 1, o.counts(), o.time()),
                    RateEstimate::from_posterior(p)?,
                ));
            }
        }
        let mut text = format!("prior  {}\n", gamma_label(&prior));
        let mut csv = String::from("label,alpha,beta,mode,mean,sd\n");
        for (label, e) in &rows {
            let _ = write!(
                text,
                "\n{label}: {}\n{}",
                gamma_label(&e.posterior),
                summary_text(&e.summaries)
            );
            let _ = writeln!(
                csv,
                "{label},{},{},{},{},{}",
                e.posterior.alpha(),
                e.posterior.beta(),
                e.summaries.mode,
                e.summaries.mean,
                e.summaries.sd
            );
        }
        let per: Vec<Value> = rows[1..].iter().map(|(_, e)| json!(e)).collect();
        return Ok(Output {
            json: json!({ "prior": prior, "observations": obs, "pooled": pooled, "per_observation": per }),
            text,
            csv,
        });
    }

    let pairs = a
        .pair
        .iter()
        .map(|&(x1, t1, x2, t2)| {
            Ok((
                CountObservation::new(x1, t1)?,
                CountObservation::new(x2, t2)?,
            ))
        })
        .collect::<rateratio::Result<Vec<_>>>()?;
    let m = model(a.model);
    let with_prior = |s: RatioPosteriorSpec| {
        if m == RatioModel::B {
            s.with_prior_r2(prior)
        } else {
            s
        }
    };
    if m == RatioModel::A && prior != GammaParams::flat() {
        return Err(CliError::Usage(
            "prior options apply to model B only".into(),
        ));
    }
    let pooled = RatioPosterior::new(with_prior(RatioPosteriorSpec::pooled(m, &pairs)?))?;
    let mut rows = vec![("pooled".to_string(), pooled.clone())];
    if a.detail {
        for (i, (d1, d2)) in pairs.iter().enumerate() {
            rows.push((
                format!("pair{}", i + 1),
                RatioPosterior::new(with_prior(RatioPosteriorSpec::new(m, *d1, *d2)))?,
            ));
        }
    }
    let mut text = String::new();
    let mut csv = String::from("label,x1,T1,x2,T2,mode,mean,sd\n");
    for (label, p) in &rows {
        let s = &p.spec;
        let _ = write!(
            text,
            "{label}: x1={} T1={} x2={} T2={}\n{}\n",
            s.data1.counts(),
            s.data1.time(),
            s.data2.counts(),
            s.data2.time(),
            summary_text(&p.summaries)
        );
        let _ = writeln!(
            csv,
            "{label},{},{},{},{},{},{},{}",
            s.data1.counts(),
            s.data1.time(),
            s.data2.counts(),
            s.data2.time(),
            p.summaries.mode,
            p.summaries.mean,
            p.summaries.sd
        );
    }
    let per: Vec<Value> = rows[1..].iter().map(|(_, p)| json!(p)).collect();
    Ok(Output {
        json: json!({ "pooled": pooled, "per_pair": per }),
        text,
        csv,
    })
}

pub fn mc(m: &Mc, seed: u64) -> Result<Output, CliError> {
    let cut = |h: &HistArgs, default: f64| h.cutoff.unwrap_or(default);
    Ok(match m {
        Mc::GammaRatio {
            a1,
            b1,
            a2,
            b2,
            hist,
        } => {
            let (p1, p2) = (GammaParams::new(*a1, *b1)?, GammaParams::new(*a2, *b2)?);
            let r =
                simulate_gamma_ratio(&p1, &p2, hist.n, cut(hist, DEFAULT_CUTOFF), hist.bins, seed)?;
            sample_report("gamma ratio Z1/Z2", json!({ "p1": p1, "p2": p2 }), &r)
        }
        Mc::ModelA {
            x1,
            t1,
            x2,
            t2,
            hist,
        } => {
            let p1 = GammaParams::new(*x1 as f64 + 1.0, *t1)?;
            let p2 = GammaParams::new(*x2 as f64 + 1.0, *t2)?;
            let r =
                simulate_gamma_ratio(&p1, &p2, hist.n, cut(hist, DEFAULT_CUTOFF), hist.bins, seed)?;
            sample_report(
                "model A rho",
                json!({ "x1": x1, "T1": t1, "x2": x2, "T2": t2 }),
                &r,
            )
        }
        Mc::UniformRatio { r_max, hist } => {
            let r = simulate_uniform_ratio(*r_max, hist.n, cut(hist, 10.0), hist.bins, seed)?;
            sample_report("uniform ratio U1/U2", json!({ "r_max": r_max }), &r)
        }
        Mc::ImpliedR1 {
            rho_max,
            r2_max,
            hist,
        } => {
            if hist.cutoff.is_some() {
                return Err(CliError::Usage(
                    "implied-r1 histograms always span [0, rho_max*r2_max]".into(),
                ));
            }
            let r = simulate_implied_r1(*rho_max, *r2_max, hist.n, hist.bins, seed)?;
            sample_report(
                "implied r1",
                json!({ "rho_max": rho_max, "r2_max": r2_max }),
                &r,
            )
        }
        Mc::Arrival { rate, k, hist } => {
            let default = (*k as f64 + 10.0 * (*k as f64).sqrt()) / rate;
            let r = simulate_kth_arrival(*rate, *k, hist.n, cut(hist, default), hist.bins, seed)?;
            sample_report("k-th arrival time", json!({ "rate": rate, "k": k }), &r)
        }
    })
}

/// Files produced by an MCMC run, written only after everything succeeded.
pub struct McmcArtifacts {
    pub output: Output,
    pub chain_csv: String,
    pub summary_text: String,
    pub summary_json: String,
}

pub fn mcmc(a: &McmcArgs, seed: u64) -> Result<McmcArtifacts, CliError> {
    let raw = fs::read_to_string(&a.spec)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.spec.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&raw);
    let spec: ModelSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        CliError::Usage(format!(
            "{}: at `{}`: {}",
            a.spec.display(),
            e.path(),
            e.inner()
        ))
    })?;
    let model = build_model(spec)?;
    let burn_in = a.burn_in.unwrap_or_else(|| default_burn_in(a.n_iter));
    let chain = run_chain(&model, a.n_iter, burn_in, seed)?;
    let summary = summarize_chain(&chain)?;

    let mut chain_csv = Vec::new();
    chain.write_csv(&mut chain_csv).expect("writing to memory");
    let chain_csv = String::from_utf8(chain_csv).expect("ascii csv");
    let mut summary_text = summary.to_text();
    let _ = writeln!(summary_text, "\nburn-in {burn_in}, seed {seed}");
    let _ = writeln!(summary_text, "acceptance rates:");
    for (name, rate) in &chain.acceptance {
        let _ = writeln!(summary_text, "  {name:<8} {rate:.3}");
    }
    let json = json!({
        "spec": model.spec(),
        "n_iter": chain.n_iter,
        "burn_in": burn_in,
        "seed": seed,
        "acceptance": chain.acceptance,
        "summary": summary,
    });
    let summary_json = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
    Ok(McmcArtifacts {
        output: Output {
            json,
            text: summary_text.clone(),
            csv: chain_csv.clone(),
        },
        chain_csv,
        summary_text,
        summary_json,
    })
}
