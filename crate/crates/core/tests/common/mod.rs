#![allow(dead_code)]

use plapt::PlAptParams;

pub fn params(alpha: f64, beta: f64, theta: f64) -> PlAptParams {
    PlAptParams::new(alpha, beta, theta).unwrap()
}

/// theta in {0.6, 1.5, 3, 5.2} crossed with (alpha, beta) in {(0.5, 1.1), (1.5, 1.5), (2, 2.5)}.
pub fn reference_triples() -> Vec<PlAptParams> {
    let mut out = Vec::new();
    for theta in [0.6, 1.5, 3.0, 5.2] {
        for (alpha, beta) in [(0.5, 1.1), (1.5, 1.5), (2.0, 2.5)] {
            out.push(params(alpha, beta, theta));
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
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
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let f = &f as &dyn Fn(f64) -> f64;
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}
