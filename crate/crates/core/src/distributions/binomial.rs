use super::ln_gamma;
use crate::error::{Error, Result};

/// Log mass of `Binom(n, p)` at `x`; `−∞` outside `[0, n]`.
pub fn binomial_ln_pmf(x: i64, n: u64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("binomial probability p", p));
    }
    if x < 0 || x as u64 > n {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(ln_pmf_unchecked(x as u64, n, p))
}

#[inline]
pub(crate) fn ln_pmf_unchecked(x: u64, n: u64, p: f64) -> f64 {
    if x > n {
        return f64::NEG_INFINITY;
    }
    if p == 0.0 {
        return if x == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p == 1.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let (xf, nf) = (x as f64, n as f64);
    ln_gamma(nf + 1.0) - ln_gamma(xf + 1.0) - ln_gamma(nf - xf + 1.0)
        + xf * p.ln()
        + (nf - xf) * (-p).ln_1p()
}

pub fn binomial_pmf(x: i64, n: u64, p: f64) -> Result<f64> {
    binomial_ln_pmf(x, n, p).map(f64::exp)
}
