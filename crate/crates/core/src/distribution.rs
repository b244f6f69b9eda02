//! The Pseudo-Lindley alpha power transformed (PL-APT) family.
//!
//! With the Pseudo-Lindley survival function
//!
//! ```text
//! S(x) = (1 + theta x / beta) exp(-theta x),      x >= 0
//! ```
//!
//! and `F = 1 - S`, the alpha power transform gives
//!
//! ```text
//! G(x) = (1 - alpha^F(x)) / (1 - alpha)            alpha != 1
//! G(x) = F(x)                                      alpha == 1
//! ```
//!
//! Pseudo-Lindley is the `alpha = 1` member and Lindley is the
//! `alpha = 1, beta = 1 + theta` member.
//!
//! Every quantile reduces to the Pseudo-Lindley quantile at a transformed
//! survival level `s`: `x = -(beta + W-1(-beta e^-beta s)) / theta`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::sample::Sample;
use crate::special::{lambert_w, ln_gamma, LambertBranch, INV_E};

/// `|alpha - 1|` below this selects the `alpha = 1` formulas.
pub const ALPHA_ONE_TOLERANCE: f64 = 1e-8;

/// How far below `-1/e` a rounded Lambert argument may fall before it is
/// treated as corruption rather than rounding.
const BRANCH_CLAMP_SLACK: f64 = 1e-14;

/// Parameters `(alpha, beta, theta)` of a PL-APT distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct PlAptParams {
    alpha: f64,
    beta: f64,
    theta: f64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
    theta: f64,
}

impl TryFrom<RawParams> for PlAptParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        PlAptParams::new(raw.alpha, raw.beta, raw.theta)
    }
}

impl PlAptParams {
    /// Validates `alpha > 0`, `beta > 1`, `theta > 0` (all finite).
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be positive and finite",
            });
        }
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must be greater than 1 and finite",
            });
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must be positive and finite",
            });
        }
        Ok(Self { alpha, beta, theta })
    }

    /// Pseudo-Lindley distribution (`alpha = 1`).
    pub fn pseudo_lindley(beta: f64, theta: f64) -> Result<Self> {
        Self::new(1.0, beta, theta)
    }

    /// Lindley distribution (`alpha = 1`, `beta = 1 + theta`).
    pub fn lindley(theta: f64) -> Result<Self> {
        Self::new(1.0, 1.0 + theta, theta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same `(alpha, beta)` with a different rate.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, theta)
    }

    /// The single switch between the `alpha = 1` and `alpha != 1` formulas.
    pub fn is_alpha_one(&self) -> bool {
        (self.alpha - 1.0).abs() < ALPHA_ONE_TOLERANCE
    }

    /// `ln(alpha)`, accurate for alpha close to one.
    pub(crate) fn ln_alpha(&self) -> f64 {
        (self.alpha - 1.0).ln_1p()
    }

    /// `ln(alpha) / (alpha - 1)`, positive for every `alpha != 1`.
    pub(crate) fn transform_scale(&self) -> f64 {
        let d = self.alpha - 1.0;
        if self.is_alpha_one() {
            1.0
        } else {
            d.ln_1p() / d
        }
    }

    fn survival_weight(&self) -> f64 {
        self.beta * (-self.beta).exp()
    }
}

/// Rank pair `(n, k)` for the density of the k-th order statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStatSpec {
    n: u64,
    k: u64,
}

impl OrderStatSpec {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "sample size must be at least 1",
            });
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k as f64,
                reason: "rank must lie in [1, n]",
            });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }
}

/// Pseudo-Lindley survival `(1 + theta x / beta) exp(-theta x)` for `x >= 0`.
pub(crate) fn base_survival(beta: f64, theta: f64, x: f64) -> f64 {
    let tx = theta * x;
    ((tx / beta).ln_1p() - tx).exp()
}

/// Lindley cdf `1 - (1 + theta x / (1 + theta)) exp(-theta x)`.
pub fn lindley_cdf(theta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    1.0 - (1.0 + theta * x / (1.0 + theta)) * (-theta * x).exp()
}

/// Lindley density `theta^2 / (1 + theta) (1 + x) exp(-theta x)`.
pub fn lindley_pdf(theta: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    theta * theta / (1.0 + theta) * (1.0 + x) * (-theta * x).exp()
}

/// Pseudo-Lindley cdf `1 - (beta + theta x) exp(-theta x) / beta`.
pub fn pseudo_lindley_cdf(beta: f64, theta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    1.0 - (beta + theta * x) * (-theta * x).exp() / beta
}

/// Pseudo-Lindley density `theta (beta - 1 + theta x) exp(-theta x) / beta`.
pub fn pseudo_lindley_pdf(beta: f64, theta: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    theta * (beta - 1.0 + theta * x) * (-theta * x).exp() / beta
}

/// `(G(x), 1 - G(x))`. The smaller of the two is evaluated directly and the
/// other as its complement, so the pair sums to one within an ulp.
fn cdf_and_reliability(p: &PlAptParams, x: f64) -> (f64, f64) {
    if !(x > 0.0) {
        return (0.0, 1.0);
    }
    if x == f64::INFINITY {
        return (1.0, 0.0);
    }
    let tx = p.theta * x;
    // ln S(x)
    let ln_s = (tx / p.beta).ln_1p() - tx;
    let f = -ln_s.exp_m1();
    let s = ln_s.exp();
    if p.is_alpha_one() {
        return if f <= 0.5 { (f, 1.0 - f) } else { (1.0 - s, s) };
    }
    let ln_a = p.ln_alpha();
    // G = expm1(F ln a) / (a - 1),  R = a expm1(-S ln a) / (1 - a)
    let g = (f * ln_a).exp_m1() / (p.alpha - 1.0);
    if g <= 0.5 {
        (g, 1.0 - g)
    } else {
        let r = p.alpha * (-s * ln_a).exp_m1() / (1.0 - p.alpha);
        (1.0 - r, r)
    }
}

/// Cumulative distribution function `G(x)`; zero for `x <= 0`.
pub fn cdf(p: &PlAptParams, x: f64) -> f64 {
    cdf_and_reliability(p, x).0
}

/// Reliability (survival) `1 - G(x)`.
pub fn reliability(p: &PlAptParams, x: f64) -> f64 {
    cdf_and_reliability(p, x).1
}

/// Probability density `g(x)`; zero for `x < 0`.
pub fn pdf(p: &PlAptParams, x: f64) -> f64 {
    if !(x >= 0.0) || x.is_infinite() {
        return 0.0;
    }
    let base = pseudo_lindley_pdf(p.beta, p.theta, x);
    if p.is_alpha_one() {
        return base;
    }
    let f = 1.0 - base_survival(p.beta, p.theta, x);
    base * p.transform_scale() * (f * p.ln_alpha()).exp()
}

/// Hazard rate `g(x) / (1 - G(x))` for `x >= 0`.
///
/// Evaluated in the closed form
/// `theta (beta - 1 + theta x) / (beta + theta x) * t / expm1(t)` with
/// `t = S(x) ln(alpha)`, which stays finite deep in the right tail where the
/// reliability itself underflows. The second factor is one when `alpha = 1`.
pub fn hazard(p: &PlAptParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::domain("hazard", x, "[0, inf)"));
    }
    let tx = p.theta * x;
    let base = p.theta * (p.beta - 1.0 + tx) / (p.beta + tx);
    if p.is_alpha_one() {
        return Ok(base);
    }
    let t = base_survival(p.beta, p.theta, x) * p.ln_alpha();
    let factor = if t == 0.0 { 1.0 } else { t / t.exp_m1() };
    let h = base * factor;
    if h.is_finite() {
        Ok(h)
    } else {
        Err(Error::numerical("hazard", format!("indeterminate at x = {x}")))
    }
}

/// Pseudo-Lindley quantile at survival level `s` in `(0, 1]`.
fn quantile_from_base_survival(p: &PlAptParams, s: f64) -> Result<f64> {
    let mut z = -p.survival_weight() * s;
    if z < -INV_E {
        if z >= -INV_E - BRANCH_CLAMP_SLACK {
            z = -INV_E;
        } else {
            return Err(Error::numerical(
                "quantile",
                format!("Lambert argument {z:e} below -1/e"),
            ));
        }
    }
    let w = lambert_w(LambertBranch::NegativeOne, z)?;
    Ok((-(p.beta + w) / p.theta).max(0.0))
}

/// Quantile `G^-1(u)` for `u` in `[0, 1)`.
pub fn quantile(p: &PlAptParams, u: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::domain("quantile", u, "[0, 1)"));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    if u > 0.5 {
        // 1 - u is exact here.
        return tail_quantile(p, 1.0 - u);
    }
    let s = if p.is_alpha_one() {
        1.0 - u
    } else {
        1.0 - ((p.alpha - 1.0) * u).ln_1p() / p.ln_alpha()
    };
    quantile_from_base_survival(p, s)
}

/// Upper-tail quantile `G^-1(1 - v)` for tail probability `v` in `(0, 1]`.
///
/// Accurate for tiny `v`, where forming `1 - v` first would lose digits.
pub fn tail_quantile(p: &PlAptParams, v: f64) -> Result<f64> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(Error::domain("tail_quantile", v, "(0, 1]"));
    }
    if v == 1.0 {
        return Ok(0.0);
    }
    let s = if p.is_alpha_one() {
        v
    } else {
        -(v * (1.0 - p.alpha) / p.alpha).ln_1p() / p.ln_alpha()
    };
    quantile_from_base_survival(p, s)
}

/// Draws `n` values by inverse-transform sampling with a seeded ChaCha8
/// stream (see [`crate::rng`]); the returned sample is sorted.
pub fn sample(p: &PlAptParams, n: usize, seed: u64) -> Result<Sample> {
    Sample::new(sample_unsorted(p, n, seed, 0)?)
}

/// Draws in generation order from stream `stream` of `seed`.
pub fn sample_unsorted(p: &PlAptParams, n: usize, seed: u64, stream: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "sample size must be at least 1",
        });
    }
    let mut rng = stream_rng(seed, stream);
    (0..n).map(|_| quantile(p, rng.random::<f64>())).collect()
}

fn ln_pow(base: f64, exponent: u64) -> f64 {
    if exponent == 0 {
        0.0
    } else {
        exponent as f64 * base.ln()
    }
}

/// Density of the k-th order statistic of an i.i.d. sample of size n.
pub fn order_stat_pdf(p: &PlAptParams, spec: OrderStatSpec, x: f64) -> f64 {
    let density = pdf(p, x);
    if density == 0.0 {
        return 0.0;
    }
    let (g, r) = cdf_and_reliability(p, x);
    let (n, k) = (spec.n, spec.k);
    // n! / ((n - k)! (k - 1)!)
    let ln_coeff = ln_gamma(n as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0) - ln_gamma(k as f64);
    let ln_value = ln_coeff + ln_pow(g, k - 1) + ln_pow(r, n - k);
    ln_value.exp() * density
}

/// Density of the sample median for odd sample size `2m + 1`.
pub fn median_order_stat_pdf(p: &PlAptParams, m: u64, x: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: 0.0,
            reason: "median density needs m >= 1 (sample size 2m + 1)",
        });
    }
    let spec = OrderStatSpec::new(2 * m + 1, m + 1)?;
    Ok(order_stat_pdf(p, spec, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64, t: f64) -> PlAptParams {
        PlAptParams::new(a, b, t).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(PlAptParams::new(0.0, 2.0, 1.0).is_err());
        assert!(PlAptParams::new(1.0, 1.0, 1.0).is_err());
        assert!(PlAptParams::new(1.0, 2.0, -1.0).is_err());
        assert!(PlAptParams::new(f64::NAN, 2.0, 1.0).is_err());
        assert!(PlAptParams::new(1.0 + 5e-9, 2.0, 1.0).unwrap().is_alpha_one());
        assert!(!PlAptParams::new(1.0 + 2e-8, 2.0, 1.0).unwrap().is_alpha_one());
    }

    #[test]
    fn serde_rejects_invalid() {
        let bad = r#"{"alpha":1.0,"beta":0.5,"theta":1.0}"#;
        assert!(serde_json::from_str::<PlAptParams>(bad).is_err());
        let ok = r#"{"alpha":2.0,"beta":2.5,"theta":0.6}"#;
        assert_eq!(serde_json::from_str::<PlAptParams>(ok).unwrap(), params(2.0, 2.5, 0.6));
    }

    #[test]
    fn cdf_lower_endpoint() {
        assert_eq!(cdf(&params(2.0, 2.5, 0.6), 0.0), 0.0);
        assert_eq!(cdf(&params(2.0, 2.5, 0.6), -3.0), 0.0);
        assert_eq!(reliability(&params(0.5, 1.1, 0.6), 0.0), 1.0);
    }

    #[test]
    fn pdf_at_origin_and_support() {
        assert_eq!(pdf(&params(1.0, 2.0, 1.0), 0.0), 0.5);
        assert_eq!(pdf(&params(2.0, 2.5, 0.6), -1.0), 0.0);
    }

    #[test]
    fn pdf_matches_cdf_derivative() {
        let p = params(2.0, 2.5, 0.6);
        let h = 1e-6;
        let fd = (cdf(&p, 1.0 + h) - cdf(&p, 1.0 - h)) / (2.0 * h);
        assert!((pdf(&p, 1.0) - fd).abs() < 1e-6);
    }

    #[test]
    fn reliability_closed_form_for_alpha_not_one() {
        let p = params(2.0, 2.5, 0.6);
        for &x in &[0.1, 1.0, 4.0, 15.0] {
            let s = base_survival(2.5, 0.6, x);
            let direct = 2.0 / (2.0 - 1.0) * (1.0 - 2.0_f64.powf(-s));
            assert!((reliability(&p, x) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn hazard_reductions() {
        assert_eq!(hazard(&params(1.0, 2.0, 1.0), 0.0).unwrap(), 0.5);
        let h = hazard(&params(1.0, 1.5, 3.0), 1e4).unwrap();
        assert!((h - 3.0).abs() < 1e-3);
        let p = params(2.0, 2.5, 0.6);
        let ratio = pdf(&p, 1.0) / reliability(&p, 1.0);
        assert!((hazard(&p, 1.0).unwrap() - ratio).abs() < 1e-13);
        // far tail stays finite where reliability has underflowed
        let far = hazard(&p, 3000.0).unwrap();
        assert_eq!(reliability(&p, 3000.0), 0.0);
        assert!((far - 0.6).abs() < 1e-3);
        assert!(hazard(&p, -1.0).is_err());
    }

    #[test]
    fn quantile_endpoints_and_errors() {
        let p = params(0.5, 1.1, 0.6);
        assert_eq!(quantile(&p, 0.0).unwrap(), 0.0);
        assert!(quantile(&p, 1.0).is_err());
        assert!(quantile(&p, -0.1).is_err());
        assert!(tail_quantile(&p, 0.0).is_err());
        assert_eq!(tail_quantile(&p, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for p in [
            params(0.5, 1.1, 0.6),
            params(2.0, 2.5, 0.6),
            params(1.0, 1.5, 3.0),
            params(40.0, 1.01, 0.01),
        ] {
            for &u in &[1e-9, 1e-4, 0.1, 0.25, 0.5, 0.75, 0.9, 0.999_999] {
                let x = quantile(&p, u).unwrap();
                assert!((cdf(&p, x) - u).abs() <= 1e-10, "{p:?} u = {u}");
            }
        }
    }

    #[test]
    fn tail_quantile_agrees_with_quantile() {
        let p = params(2.0, 2.5, 0.6);
        for &v in &[0.5, 0.25, 0.01] {
            let a = tail_quantile(&p, v).unwrap();
            let b = quantile(&p, 1.0 - v).unwrap();
            assert!((a - b).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn lindley_and_pseudo_lindley_collapse() {
        for &theta in &[0.3, 1.0, 4.0] {
            let p = PlAptParams::lindley(theta).unwrap();
            for i in 0..200 {
                let x = i as f64 * 0.05;
                assert!((cdf(&p, x) - lindley_cdf(theta, x)).abs() <= 1e-14);
                assert!((pdf(&p, x) - lindley_pdf(theta, x)).abs() <= 1e-14);
            }
        }
        let p = PlAptParams::pseudo_lindley(1.5, 3.0).unwrap();
        for i in 0..100 {
            let x = i as f64 * 0.02;
            assert!((cdf(&p, x) - pseudo_lindley_cdf(1.5, 3.0, x)).abs() <= 2.0 * f64::EPSILON);
        }
    }

    #[test]
    fn order_statistic_reductions() {
        let p = params(2.0, 2.5, 0.6);
        for &x in &[0.2, 1.0, 3.5] {
            let single = order_stat_pdf(&p, OrderStatSpec::new(1, 1).unwrap(), x);
            assert!((single - pdf(&p, x)).abs() < 1e-14);
            let max5 = order_stat_pdf(&p, OrderStatSpec::new(5, 5).unwrap(), x);
            let expected = 5.0 * cdf(&p, x).powi(4) * pdf(&p, x);
            assert!((max5 - expected).abs() < 1e-13 * expected.max(1e-300));
            let median = median_order_stat_pdf(&p, 1, x).unwrap();
            assert_eq!(median, order_stat_pdf(&p, OrderStatSpec::new(3, 2).unwrap(), x));
        }
        assert!(median_order_stat_pdf(&p, 0, 1.0).is_err());
        assert!(OrderStatSpec::new(3, 4).is_err());
        assert!(OrderStatSpec::new(3, 0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = params(2.0, 2.5, 0.6);
        let a = sample(&p, 1000, 42).unwrap();
        let b = sample(&p, 1000, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.values().iter().all(|&x| x >= 0.0));
        assert!(sample(&p, 0, 1).is_err());
    }

    #[test]
    fn single_draw_is_quantile_of_first_uniform() {
        let p = params(0.5, 1.1, 0.6);
        let u0: f64 = stream_rng(9, 0).random();
        let s = sample(&p, 1, 9).unwrap();
        assert_eq!(s.values(), &[quantile(&p, u0).unwrap()]);
    }
}
