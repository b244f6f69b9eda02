//! Upper-tail behaviour: the extremal quantile expansion, a numerical check
//! of the Gumbel domain of attraction, simulated normalized maxima, and the
//! double-indexed Hill family of tail-index estimators.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use crate::distribution::{tail_quantile, PlAptParams};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::sample::Sample;
use crate::special::gamma_fn;

/// Largest tail probability accepted by [`extremal_quantile`].
pub const EXPANSION_U_MAX: f64 = 0.1;

/// Largest tail probability accepted by [`pi_variation_check`].
pub const PI_VARIATION_U_MAX: f64 = 1e-2;

/// `B_n` above this sets [`EviReport::lindeberg_warning`].
pub const LINDEBERG_WARNING: f64 = 0.5;

fn require_alpha_not_one(p: &PlAptParams, function: &'static str) -> Result<()> {
    if p.is_alpha_one() {
        Err(Error::domain(function, p.alpha(), "alpha != 1"))
    } else {
        Ok(())
    }
}

/// `C(alpha, beta) = (1 - alpha) beta e^-beta / (alpha ln alpha)`, negative
/// for every admissible `alpha != 1`.
pub fn c_alpha_beta(alpha: f64, beta: f64) -> Result<f64> {
    let p = PlAptParams::new(alpha, beta, 1.0)?;
    require_alpha_not_one(&p, "c_alpha_beta")?;
    Ok((1.0 - alpha) * beta * (-beta).exp() / (alpha * p.ln_alpha()))
}

/// Lambert argument `A(alpha, beta, u)` of the upper-tail quantile:
/// `G^-1(1 - u) = -(beta + W-1(A)) / theta`.
///
/// Evaluated as `beta e^-beta ln(1 + u (1 - alpha) / alpha) / ln alpha`,
/// which equals `-beta e^-beta + beta e^-beta ln(alpha + u (1 - alpha)) / ln alpha`.
pub fn a_function(p: &PlAptParams, u: f64) -> Result<f64> {
    require_alpha_not_one(p, "a_function")?;
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::domain("a_function", u, "(0, 1]"));
    }
    let (alpha, beta) = (p.alpha(), p.beta());
    Ok(beta * (-beta).exp() * (u * (1.0 - alpha) / alpha).ln_1p() / p.ln_alpha())
}

/// Individual terms of the extremal quantile expansion at one `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerms {
    pub u: f64,
    /// `C0 = -beta/theta - ln(-C)/theta`.
    pub constant: f64,
    /// `ln(1/u) / theta`.
    pub log_term: f64,
    /// `ln ln(1/u) / theta`.
    pub log_log_term: f64,
    /// `ln(-C) / (theta ln(1/u))`.
    pub inverse_log_term: f64,
    pub total: f64,
}

/// Constants of the upper-tail expansion for fixed parameters with `alpha != 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalExpansion {
    pub params: PlAptParams,
    pub c_ab: f64,
    pub c0: f64,
}

impl ExtremalExpansion {
    pub fn new(params: &PlAptParams) -> Result<Self> {
        let c_ab = c_alpha_beta(params.alpha(), params.beta())?;
        let c0 = -(params.beta() + (-c_ab).ln()) / params.theta();
        Ok(Self {
            params: *params,
            c_ab,
            c0,
        })
    }

    /// `C0 + ln(1/u)/theta + ln ln(1/u)/theta + ln(-C)/(theta ln(1/u))`.
    pub fn terms(&self, u: f64) -> Result<ExpansionTerms> {
        if !(u > 0.0 && u <= EXPANSION_U_MAX) {
            return Err(Error::domain("extremal_quantile", u, "(0, 0.1]"));
        }
        let theta = self.params.theta();
        let log_inv = -u.ln();
        let log_term = log_inv / theta;
        let log_log_term = log_inv.ln() / theta;
        let inverse_log_term = (-self.c_ab).ln() / (theta * log_inv);
        Ok(ExpansionTerms {
            u,
            constant: self.c0,
            log_term,
            log_log_term,
            inverse_log_term,
            total: self.c0 + log_term + log_log_term + inverse_log_term,
        })
    }

    /// Three-term asymptotic series of `W-1` at the exact Lambert argument:
    /// `-(beta + L1 - L2 + L2/L1 + L2 (L2 - 2) / (2 L1^2)) / theta` with
    /// `L1 = ln(-A(u))`, `L2 = ln(-L1)`.
    ///
    /// Expanding `L1 = ln u + ln(-C) + O(u)` shows that [`Self::terms`] has
    /// the opposite sign on its `1/ln(1/u)` term and omits
    /// `ln ln(1/u) / (theta ln(1/u))`, so its error decays only like
    /// `ln ln(1/u) / ln(1/u)`. This series has error `O((L2/L1)^3)`.
    pub fn series(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= EXPANSION_U_MAX) {
            return Err(Error::domain("extremal_quantile", u, "(0, 0.1]"));
        }
        let a = a_function(&self.params, u)?;
        let l1 = (-a).ln();
        let l2 = (-l1).ln();
        let w = l1 - l2 + l2 / l1 + l2 * (l2 - 2.0) / (2.0 * l1 * l1);
        Ok(-(self.params.beta() + w) / self.params.theta())
    }
}

/// Extremal quantile approximation of `G^-1(1 - u)` for `0 < u <= 0.1`,
/// with the `K(u)` remainder dropped.
pub fn extremal_quantile(p: &PlAptParams, u: f64) -> Result<ExpansionTerms> {
    ExtremalExpansion::new(p)?.terms(u)
}

/// One row of [`pi_variation_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiVariationRow {
    pub u: f64,
    /// `s(u) = -u d/du G^-1(1 - u)`, by central differences with step `u/100`.
    pub s: f64,
    /// `(G^-1(1 - lambda u) - G^-1(1 - u)) / s(u) + ln lambda`.
    pub residual: f64,
}

/// Evaluates the Gumbel-domain residual `r(u)`, which tends to zero.
pub fn pi_variation_check(p: &PlAptParams, lambda: f64, u_grid: &[f64]) -> Result<Vec<PiVariationRow>> {
    require_alpha_not_one(p, "pi_variation_check")?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "must be positive and finite",
        });
    }
    u_grid
        .iter()
        .map(|&u| {
            if !(u > 0.0 && u < PI_VARIATION_U_MAX) {
                return Err(Error::domain("pi_variation_check", u, "(0, 0.01)"));
            }
            if lambda * u > 1.0 {
                return Err(Error::domain("pi_variation_check", lambda * u, "lambda * u <= 1"));
            }
            let h = u / 100.0;
            let derivative = (tail_quantile(p, u - h)? - tail_quantile(p, u + h)?) / (2.0 * h);
            let s = u * derivative;
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::numerical(
                    "pi_variation_check",
                    format!("finite-difference scale {s:e} unusable at u = {u:e}"),
                ));
            }
            let residual = if lambda == 1.0 {
                0.0
            } else {
                (tail_quantile(p, lambda * u)? - tail_quantile(p, u)?) / s + lambda.ln()
            };
            Ok(PiVariationRow { u, s, residual })
        })
        .collect()
}

/// Normalized maximum `theta (X_{n,n} - G^-1(1 - 1/n))` of one simulated sample.
///
/// Uses replication stream `replication` of `seed`: `n` uniforms `U` are
/// drawn and the maximum is the tail quantile of the smallest `1 - U`.
pub fn normalized_maximum(p: &PlAptParams, n: usize, seed: u64, replication: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, replication);
    let mut smallest = 1.0_f64;
    for _ in 0..n {
        smallest = smallest.min(1.0 - rng.random::<f64>());
    }
    let centre = tail_quantile(p, 1.0 / n as f64)?;
    Ok(p.theta() * (tail_quantile(p, smallest)? - centre))
}

/// Standard Gumbel cdf `exp(-exp(-x))`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Kolmogorov-Smirnov distance between the empirical cdf of `sorted` and `cdf`.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let m = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / m - f).max(f - i as f64 / m)
    })
}

/// Simulated normalized maxima and their distance to the Gumbel law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximaReport {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    /// Sorted normalized maxima; their empirical cdf.
    pub normalized: Vec<f64>,
    pub ks_distance: f64,
}

pub fn maxima_normalization(p: &PlAptParams, n: usize, reps: usize, seed: u64) -> Result<MaximaReport> {
    require_alpha_not_one(p, "maxima_normalization")?;
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "sample size must be at least 2",
        });
    }
    if reps == 0 {
        return Err(Error::InvalidParameter {
            name: "reps",
            value: 0.0,
            reason: "need at least one replication",
        });
    }
    let mut normalized = (0..reps as u64)
        .into_par_iter()
        .map(|r| normalized_maximum(p, n, seed, r))
        .collect::<Result<Vec<_>>>()?;
    normalized.sort_by(f64::total_cmp);
    let ks_distance = ks_distance(&normalized, gumbel_cdf);
    Ok(MaximaReport {
        n,
        reps,
        seed,
        normalized,
        ks_distance,
    })
}

/// Weight function `f` of the double Hill family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Weight {
    /// `f(j) = j`.
    Hill,
    /// `f(j) = j^tau`.
    Power { tau: f64 },
    /// `f(j) = values[j - 1]`.
    Custom { values: Vec<f64> },
}

/// Weight function together with the power `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub weight: Weight,
    pub s: f64,
}

impl WeightSpec {
    /// `f(j) = j`, `s = 1`: the classical Hill estimator.
    pub fn hill() -> Self {
        Self {
            weight: Weight::Hill,
            s: 1.0,
        }
    }

    /// `f(j) = j^tau`, `s = 1`.
    pub fn power(tau: f64) -> Self {
        Self {
            weight: Weight::Power { tau },
            s: 1.0,
        }
    }

    fn f(&self, j: usize) -> f64 {
        match &self.weight {
            Weight::Hill => j as f64,
            Weight::Power { tau } => (j as f64).powf(*tau),
            Weight::Custom { values } => values[j - 1],
        }
    }

    /// `f(j) j^-s` for `j = 1..=k`, after validating the spec.
    fn scaled_weights(&self, k: usize) -> Result<Vec<f64>> {
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "s",
                value: self.s,
                reason: "must be positive and finite",
            });
        }
        match &self.weight {
            Weight::Power { tau } if !tau.is_finite() => {
                return Err(Error::InvalidParameter {
                    name: "tau",
                    value: *tau,
                    reason: "must be finite",
                })
            }
            Weight::Custom { values } if values.len() < k => {
                return Err(Error::InvalidParameter {
                    name: "k",
                    value: k as f64,
                    reason: "exceeds the length of the custom weight table",
                })
            }
            _ => {}
        }
        (1..=k)
            .map(|j| {
                let f = self.f(j);
                if f > 0.0 && f.is_finite() {
                    Ok(f / (j as f64).powf(self.s))
                } else {
                    Err(Error::InvalidParameter {
                        name: "f(j)",
                        value: f,
                        reason: "weights must be positive and finite",
                    })
                }
            })
            .collect()
    }
}

/// Double Hill statistics for one sample and one `(f, s, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EviReport {
    pub k: usize,
    pub s: f64,
    /// `T_n = sum f(j) (ln X_{n-j+1,n} - ln X_{n-j,n})^s`.
    pub t_n: f64,
    /// `a_n = Gamma(s + 1) sum f(j) j^-s`.
    pub a_n: f64,
    /// `s_n = sqrt((Gamma(2s + 1) - Gamma(s + 1)^2) sum f(j)^2 j^-2s)`.
    pub s_n: f64,
    /// `B_n = max f(j) j^-s / s_n`.
    pub b_n: f64,
    /// `M_n = (T_n / a_n)^(1/s)`.
    pub m_n: f64,
    /// Value of `gamma` tested by `z_stat`.
    pub target: f64,
    /// `(a_n / s_n) (T_n / a_n - target^s) / target^s`.
    pub z_stat: f64,
    /// Two-sided normal p-value of `z_stat`.
    pub p_value: f64,
    /// 95% interval for `gamma`: `c (1 -+ 1.96 s_n / a_n)` with `c = T_n / a_n`,
    /// mapped through the `1/s` power (a negative lower end is clipped to 0).
    pub ci_low: f64,
    pub ci_high: f64,
    /// Set when `B_n` exceeds 0.5, where the normal approximation is doubtful.
    pub lindeberg_warning: bool,
}

impl EviReport {
    /// `a_n / s_n`, the rate of the normal approximation.
    pub fn rate(&self) -> f64 {
        self.a_n / self.s_n
    }
}

/// Neumaier compensated sum.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0_f64, 0.0_f64);
    for t in terms {
        let next = sum + t;
        carry += if sum.abs() >= t.abs() {
            (sum - next) + t
        } else {
            (t - next) + sum
        };
        sum = next;
    }
    sum + carry
}

fn check_k(data: &Sample, k: usize) -> Result<()> {
    if k == 0 || k >= data.len() {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k as f64,
            reason: "must satisfy 1 <= k <= n - 1",
        });
    }
    let threshold = data.order_stat(data.len() - k);
    if !(threshold > 0.0) {
        return Err(Error::domain(
            "double_hill_components",
            threshold,
            "positive top k + 1 order statistics",
        ));
    }
    Ok(())
}

/// Computes `T_n`, `a_n`, `s_n`, `B_n` and `M_n` from the top `k + 1`
/// order statistics; the test target defaults to `M_n`, so `z_stat = 0`.
pub fn double_hill_components(data: &Sample, w: &WeightSpec, k: usize) -> Result<EviReport> {
    check_k(data, k)?;
    let weights = w.scaled_weights(k)?;
    let n = data.len();
    let s = w.s;

    // ln X_{n-j+1} - ln X_{n-j} as ln1p of the relative gap.
    let spacings: Vec<f64> = (1..=k)
        .map(|j| {
            let upper = data.order_stat(n - j + 1);
            let lower = data.order_stat(n - j);
            ((upper - lower) / lower).ln_1p()
        })
        .collect();
    if spacings.iter().all(|&d| d == 0.0) {
        return Err(Error::Data(format!("top {} order statistics are all tied", k + 1)));
    }

    let t_n = compensated_sum(
        (1..=k)
            .zip(&spacings)
            .map(|(j, &d)| w.f(j) * if s == 1.0 { d } else { d.powf(s) }),
    );
    let gamma_s1 = gamma_fn(s + 1.0)?;
    let a_n = gamma_s1 * compensated_sum(weights.iter().copied());
    let variance_factor = gamma_fn(2.0 * s + 1.0)? - gamma_s1 * gamma_s1;
    let s_n = (variance_factor * compensated_sum(weights.iter().map(|v| v * v))).sqrt();
    let b_n = weights.iter().fold(0.0_f64, |m, &v| m.max(v)) / s_n;
    let ratio = t_n / a_n;
    let m_n = if s == 1.0 { ratio } else { ratio.powf(1.0 / s) };

    let z975 = Normal::standard().inverse_cdf(0.975);
    let half = z975 * ratio * s_n / a_n;
    let root = |v: f64| if s == 1.0 { v } else { v.max(0.0).powf(1.0 / s) };
    Ok(EviReport {
        k,
        s,
        t_n,
        a_n,
        s_n,
        b_n,
        m_n,
        target: m_n,
        z_stat: 0.0,
        p_value: 1.0,
        ci_low: root((ratio - half).max(0.0)),
        ci_high: root(ratio + half),
        lindeberg_warning: b_n > LINDEBERG_WARNING,
    })
}

/// Tests `gamma = target` with the normal approximation of `M_n`.
pub fn evi_asymptotic_test(data: &Sample, w: &WeightSpec, k: usize, target: f64) -> Result<EviReport> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "target",
            value: target,
            reason: "must be positive and finite",
        });
    }
    let mut report = double_hill_components(data, w, k)?;
    let centre = if report.s == 1.0 { target } else { target.powf(report.s) };
    let z = report.rate() * (report.t_n / report.a_n - centre) / centre;
    report.target = target;
    report.z_stat = z;
    report.p_value = erfc(z.abs() / std::f64::consts::SQRT_2);
    Ok(report)
}
