//! Real Lambert W and the Gamma function.
//!
//! The Lambert W function inverts `w -> w * exp(w)`. On `[-1/e, 0)` the
//! inverse is two-valued: the principal branch `W0` takes values `>= -1`,
//! the lower branch `W-1` takes values `<= -1`. Quantiles of the
//! distribution in this crate are expressed through `W-1`.
//!
//! Evaluation strategy:
//!
//! * close to the branch point `-1/e` the series in `p = ±sqrt(2(1 + e z))`
//!   is summed directly (it is exact to rounding for `|p| < 1e-2`);
//! * on `W0` with `|z| < 1e-6` the Taylor series at the origin is used;
//! * otherwise an initial guess (branch-point series, `log1p`, or the
//!   asymptotic `L1 - L2 + L2/L1` form) is refined by Halley iteration on
//!   `h(w) = w + ln(w / z)`, which stays well scaled for `z` down to the
//!   smallest normal doubles.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `1/e` rounded to the nearest double; `-INV_E` is the branch point.
pub const INV_E: f64 = 0.367_879_441_171_442_33;

const MAX_ITERATIONS: usize = 64;

/// Real branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LambertBranch {
    /// `W0`, defined on `[-1/e, inf)`, values `>= -1`.
    Principal,
    /// `W-1`, defined on `[-1/e, 0)`, values `<= -1`.
    NegativeOne,
}

/// Coefficients of `W(p) = sum c_k p^k` around the branch point.
const BRANCH_SERIES: [f64; 8] = [
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680_863.0 / 43_545_600.0,
];

fn branch_point_series(p: f64) -> f64 {
    BRANCH_SERIES.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

/// Evaluates the Lambert W function on the requested real branch.
///
/// Returns `w` with `w * exp(w) == z` to about one part in `1e13`.
pub fn lambert_w(branch: LambertBranch, z: f64) -> Result<f64> {
    if z.is_nan() {
        return Err(Error::domain("lambert_w", z, "a real number"));
    }
    if z < -INV_E {
        return Err(Error::domain("lambert_w", z, "[-1/e, inf)"));
    }
    match branch {
        LambertBranch::Principal => {
            if z == 0.0 {
                return Ok(0.0);
            }
            if z == f64::INFINITY {
                return Ok(f64::INFINITY);
            }
        }
        LambertBranch::NegativeOne => {
            if z >= 0.0 {
                return Err(Error::domain("lambert_w", z, "[-1/e, 0) on the W-1 branch"));
            }
        }
    }
    if z == -INV_E {
        return Ok(-1.0);
    }

    // 2(1 + e z) with a single rounding; tiny negatives are rounding noise.
    let q = (2.0 * E.mul_add(z, 1.0)).max(0.0);
    let p = match branch {
        LambertBranch::Principal => q.sqrt(),
        LambertBranch::NegativeOne => -q.sqrt(),
    };
    if p.abs() < 1e-2 {
        return Ok(branch_point_series(p));
    }

    if branch == LambertBranch::Principal && z.abs() < 1e-6 {
        // Taylor series at the origin; the truncation error is O(z^5).
        return Ok(z * (1.0 - z * (1.0 - z * (1.5 - z * 8.0 / 3.0))));
    }

    let initial = if p.abs() < 0.5 {
        branch_point_series(p)
    } else {
        match branch {
            LambertBranch::Principal if z < 3.0 => z.ln_1p(),
            _ => {
                let l1 = z.abs().ln();
                let l2 = l1.abs().ln();
                l1 - l2 + l2 / l1
            }
        }
    };
    halley(branch, z, initial)
}

/// Halley iteration on `h(w) = w + ln(w / z)`; `w / z > 0` on both branches.
fn halley(branch: LambertBranch, z: f64, mut w: f64) -> Result<f64> {
    let log_abs_z = z.abs().ln();
    for _ in 0..MAX_ITERATIONS {
        let h = w + w.abs().ln() - log_abs_z;
        let dh = 1.0 + 1.0 / w;
        let step = h / (dh + h / (2.0 * w * w * dh));
        let next = w - step;
        let next = match branch {
            // Never let an iterate hop onto the other branch.
            LambertBranch::NegativeOne if next >= -1.0 => 0.5 * (w - 1.0),
            LambertBranch::Principal if next <= -1.0 => 0.5 * (w - 1.0),
            _ => next,
        };
        if !next.is_finite() {
            break;
        }
        let noise = 8.0 * f64::EPSILON * (1.0 + w.abs() + log_abs_z.abs());
        if step.abs() <= 2.0 * f64::EPSILON * next.abs() || h.abs() <= noise {
            return Ok(polish(next, z));
        }
        w = next;
    }
    Err(Error::numerical(
        "lambert_w",
        format!("Halley iteration did not converge for z = {z:e}"),
    ))
}

/// Picks whichever of `w` and its two neighbouring doubles has the
/// smallest residual `|w e^w - z|`.
///
/// `h` loses about one ulp of `w` to cancellation when `|w|` is large, while
/// the residual itself is evaluated to a few ulps of `z`.
fn polish(w: f64, z: f64) -> f64 {
    let residual = |v: f64| (v * v.exp() - z).abs();
    let bits = w.to_bits();
    let mut best = (residual(w), w);
    for candidate in [f64::from_bits(bits + 1), f64::from_bits(bits - 1)] {
        let r = residual(candidate);
        if r < best.0 {
            best = (r, candidate);
        }
    }
    best.1
}

/// Euler's Gamma function for `x > 0`.
///
/// Integer arguments up to 23 are returned exactly as factorials.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("gamma_fn", x, "(0, inf)"));
    }
    if x.fract() == 0.0 && x <= 23.0 {
        return Ok((1..x as u32).fold(1.0, |acc, k| acc * f64::from(k)));
    }
    let value = statrs::function::gamma::gamma(x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::numerical("gamma_fn", format!("overflow at x = {x}")))
    }
}

/// `ln Gamma(x)` for `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(w: f64, z: f64) -> f64 {
        ((w * w.exp()) - z).abs() / z.abs()
    }

    #[test]
    fn branch_point_values() {
        assert_eq!(lambert_w(LambertBranch::NegativeOne, -INV_E).unwrap(), -1.0);
        assert_eq!(lambert_w(LambertBranch::Principal, -INV_E).unwrap(), -1.0);
    }

    #[test]
    fn constructed_points_on_lower_branch() {
        for w in [-2.0_f64, -1.1, -1.001, -5.0, -40.0, -300.0] {
            let z = w * w.exp();
            let got = lambert_w(LambertBranch::NegativeOne, z).unwrap();
            assert!((got - w).abs() <= 1e-12 * w.abs().max(1.0), "w = {w}, got {got}");
        }
    }

    #[test]
    fn principal_at_zero_and_omega() {
        assert_eq!(lambert_w(LambertBranch::Principal, 0.0).unwrap(), 0.0);
        // Omega constant: W0(1).
        let w = lambert_w(LambertBranch::Principal, 1.0).unwrap();
        assert!((w - 0.567_143_290_409_783_8).abs() < 1e-15);
        let w = lambert_w(LambertBranch::Principal, E).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
    }

    #[test]
    fn principal_residuals() {
        for &z in &[
            -0.3678, -0.3, -0.1, -1e-10, 1e-300, 1e-5, 0.5, 2.9, 3.0, 10.0, 1e6, 1e300,
        ] {
            let w = lambert_w(LambertBranch::Principal, z).unwrap();
            assert!(w >= -1.0);
            assert!(residual(w, z) <= 1e-13, "z = {z}: residual {}", residual(w, z));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w(LambertBranch::NegativeOne, 0.0).is_err());
        assert!(lambert_w(LambertBranch::NegativeOne, 0.1).is_err());
        assert!(lambert_w(LambertBranch::NegativeOne, -0.4).is_err());
        assert!(lambert_w(LambertBranch::Principal, -0.4).is_err());
        assert!(lambert_w(LambertBranch::Principal, f64::NAN).is_err());
    }

    #[test]
    fn near_branch_point_is_continuous() {
        let mut previous = -1.0;
        for k in 1..200 {
            let z = -INV_E + 1e-12 * 1.2_f64.powi(k);
            if z >= 0.0 {
                break;
            }
            let w = lambert_w(LambertBranch::NegativeOne, z).unwrap();
            assert!(w < previous, "not decreasing at z = {z}");
            assert!(residual(w, z) <= 1e-13);
            previous = w;
        }
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_fn(2.0).unwrap(), 1.0);
        assert_eq!(gamma_fn(3.0).unwrap(), 2.0);
        let half_integer = std::f64::consts::PI.sqrt() / 2.0;
        assert!((gamma_fn(1.5).unwrap() - half_integer).abs() < 1e-14);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn gamma_recurrence() {
        let mut x = 0.05;
        while x <= 40.0 {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs(), "x = {x}");
            x += 0.173;
        }
    }
}
