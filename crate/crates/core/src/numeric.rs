//! Quadrature and CDF inversion for one-dimensional densities.
//!
//! Integration is adaptive Gauss–Kronrod (7/15 points). Nodes never touch the
//! interval endpoints, so integrable endpoint singularities are tolerated.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Numeric(format!("non-finite bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let mut total = 0.0;
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, eps, depth)) = stack.pop() {
        let (value, err) = kronrod(&f, lo, hi);
        if !value.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite integrand on [{lo}, {hi}]"
            )));
        }
        if err <= eps.max(1e-15 * value.abs()) || depth >= MAX_DEPTH {
            total += value;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * eps, depth + 1));
            stack.push((mid, hi, 0.5 * eps, depth + 1));
        }
    }
    Ok(total)
}

/// Integrates `f` over `[0, ∞)` through the map `x = t / (1 − t)`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let x = t / s;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫_0^x pdf`.
pub fn cdf<F: Fn(f64) -> f64>(pdf: F, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    integrate(pdf, 0.0, x, 1e-11)
}

/// Inverts the CDF of a density supported on `[0, ∞)` to absolute
/// tolerance `tol` in the argument.
pub fn quantile<F: Fn(f64) -> f64>(pdf: F, p: f64, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain("quantile probability", p));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut lo_mass = 0.0;
    let mut hi = 1.0;
    let mut hi_mass = cdf(&pdf, hi)?;
    let mut doublings = 0;
    while hi_mass < p {
        lo = hi;
        lo_mass = hi_mass;
        hi *= 2.0;
        hi_mass = lo_mass + integrate(&pdf, lo, hi, 1e-11)?;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Numeric(format!("quantile {p} not bracketed")));
        }
    }
    // Bisection on the mass accumulated from `lo`.
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let mid_mass = lo_mass + integrate(&pdf, lo, mid, 1e-12)?;
        if mid_mass < p {
            lo = mid;
            lo_mass = mid_mass;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A density sampled on an even grid, ready for plotting.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

pub const DEFAULT_CURVE_POINTS: usize = 512;
pub const DEFAULT_CURVE_QUANTILE: f64 = 0.999;

/// Samples `pdf` at `points` evenly spaced abscissae over `[0, q]` where `q`
/// is the `upper_quantile` of the density.
pub fn sample_curve<F: Fn(f64) -> f64>(
    pdf: F,
    points: usize,
    upper_quantile: f64,
) -> Result<Curve> {
    if points < 2 {
        return Err(Error::domain("curve points", points as f64));
    }
    let upper = quantile(&pdf, upper_quantile, 1e-6)?;
    let step = upper / (points - 1) as f64;
    let x: Vec<f64> = (0..points).map(|i| i as f64 * step).collect();
    let density = x.iter().map(|&v| pdf(v)).collect();
    Ok(Curve { x, density })
}
