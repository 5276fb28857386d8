//! Runs Models A and B on (x1, T1, x2, T2) = (3, 3, 6, 6) and prints the
//! chain summaries next to the closed-form values.

use rateratio::distributions::GammaParams;
use rateratio::mcmc::{build_model, default_burn_in, run_chain, summarize_chain, Data, ModelSpec};
use rateratio::ratio::{model_a_summaries, model_b_summaries};
use rateratio::CountObservation;

fn main() -> rateratio::Result<()> {
    let data = Data {
        x1: 3,
        t1: 3.0,
        x2: 6,
        t2: 6.0,
    };
    let (d1, d2) = (
        CountObservation::new(3, 3.0)?,
        CountObservation::new(6, 6.0)?,
    );
    let n = 100_000;
    for (label, spec, exact) in [
        (
            "Model A",
            ModelSpec::model_a(data),
            model_a_summaries(&d1, &d2),
        ),
        (
            "Model B",
            ModelSpec::model_b(data),
            model_b_summaries(&d1, &d2, &GammaParams::flat())?,
        ),
    ] {
        let model = build_model(spec)?;
        let chain = run_chain(&model, n, default_burn_in(n), 2024)?;
        let summary = summarize_chain(&chain)?;
        println!(
            "== {label}: rho = {:.3} +- {:.3} (closed form)",
            exact.mean, exact.sd
        );
        println!("acceptance: {:?}", chain.acceptance);
        print!("{}", summary.to_text());
        println!();
    }
    Ok(())
}
