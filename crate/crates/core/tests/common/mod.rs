//! Independent numerical oracles for tests. Nothing here calls the
//! library's own quadrature or special functions.
#![allow(dead_code)]

/// A density on the half line.
pub type Density = Box<dyn Fn(f64) -> f64>;

/// Upper limit for heavy-tailed densities on the half line. Every density
/// checked with it has a tail no heavier than `c/ρ²`, so the mass beyond
/// `HEAVY_TAIL_Q` is below `c·1e−10`.
pub const HEAVY_TAIL_Q: f64 = 1e10;

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson on a finite interval with a bounded integrand.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(&f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫_0^q f` over geometric panels `[0, h], [h, 2h], [2h, 4h], …`. The
/// first panel uses `x = t²`, which tames `log x` and `x^{-1/2}`
/// singularities at the origin.
pub fn integrate_to(f: impl Fn(f64) -> f64, q: f64) -> f64 {
    let h = 1e-3_f64.min(q);
    let g = |t: f64| if t == 0.0 { 0.0 } else { 2.0 * t * f(t * t) };
    let mut total = simpson(g, 0.0, h.sqrt(), 1e-14);
    let mut lo = h;
    while lo < q {
        let hi = (2.0 * lo).min(q);
        total += simpson(&f, lo, hi, 1e-13);
        lo = hi;
    }
    total
}

/// `∫_a^b f` for `0 ≤ a < b`, splitting at powers of two to keep panels short.
pub fn integrate_between(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return integrate_to(f, b);
    }
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (2.0 * lo).min(b);
        total += simpson(&f, lo, hi, 1e-13);
        lo = hi;
    }
    total
}

/// `ln n!` by direct summation.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Poisson pmf by the product form `e^{−λ} λ^x / x!`, accumulated in logs.
pub fn poisson_pmf_direct(x: u64, lambda: f64) -> f64 {
    (-lambda + x as f64 * lambda.ln() - ln_factorial(x)).exp()
}

/// `P(X1 − X2 = d)` summed until terms stop contributing.
pub fn skellam_brute(d: i64, l1: f64, l2: f64) -> f64 {
    let mut total = 0.0;
    let start = d.max(0) as u64;
    for x1 in start..start + 2000 {
        let x2 = (x1 as i64 - d) as u64;
        let term = poisson_pmf_direct(x1, l1) * poisson_pmf_direct(x2, l2);
        total += term;
        if x1 as f64 > l1 + 50.0 && term < 1e-300 {
            break;
        }
    }
    total
}

/// Mean and standard deviation of a density on the half line by quadrature.
pub fn moments(f: impl Fn(f64) -> f64 + Copy, q: f64) -> (f64, f64) {
    let m0 = integrate_to(f, q);
    let m1 = integrate_to(|x| x * f(x), q) / m0;
    let m2 = integrate_to(|x| x * x * f(x), q) / m0;
    (m1, (m2 - m1 * m1).sqrt())
}

/// Argmax of `f` on the grid `{0, step, 2·step, …, hi}`.
pub fn grid_argmax(f: impl Fn(f64) -> f64, hi: f64, step: f64) -> f64 {
    let n = (hi / step).round() as usize;
    (0..=n)
        .map(|i| i as f64 * step)
        .map(|x| (x, f(x)))
        .fold((0.0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
        .0
}
