//! Metropolis-within-Gibbs sampling for a fixed family of rate-ratio models.
//!
//! | variant      | top nodes           | observation model                               |
//! |--------------|---------------------|-------------------------------------------------|
//! | `A`          | `r1`, `r2`          | `xi ~ Poisson(ri·Ti)`, `rho = r1/r2`            |
//! | `B`          | `rho`, `r2`         | `xi ~ Poisson(ri·Ti)`, `r1 = rho·r2`            |
//! | `B_EFF`      | `rho`, `r2`, `epsi` | `ni ~ Poisson(ri·Ti)`, `xi ~ Binom(ni, epsi)`   |
//! | `B_EFF_BKG`  | as above + `rbi`    | signal and background each thinned, then summed |
//!
//! Positive continuous nodes move by Gaussian random walks on the log scale,
//! efficiencies on the logit scale, latent counts by symmetric integer
//! steps. Step sizes adapt during burn-in toward an acceptance rate of 0.44
//! and are frozen afterwards.

mod model;
mod sampler;
mod spec;
mod summary;

pub use model::{build_model, Model};
pub use sampler::{run_chain, run_chains, Chain};
pub use spec::{Background, Data, Efficiencies, Efficiency, ModelSpec, Variant, FLAT_PRIOR_RATE};
pub use summary::{summarize_chain, ChainSummary, VariableSummary, QUANTILE_LEVELS};

/// Burn-in used when none is given: `max(1000, n_iter / 100)`.
pub fn default_burn_in(n_iter: usize) -> usize {
    (n_iter / 100).max(1000)
}
