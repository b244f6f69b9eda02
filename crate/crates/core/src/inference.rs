//! Maximum-likelihood estimation of `(theta, beta)` at fixed `alpha`.
//!
//! The log-likelihood of a sample `x_1..x_n` is
//!
//! ```text
//! l = n (ln theta + ln(ln a / (a - 1)) - ln beta)
//!     + sum ln(beta - 1 + theta x_i) - theta sum x_i
//!     + ln a * sum (1 - S(x_i)),       S(x) = (1 + theta x / beta) e^(-theta x)
//! ```
//!
//! where `ln(ln a / (a - 1))` is taken jointly so the expression is real for
//! `0 < a < 1` as well. Differentiating gives the score
//!
//! ```text
//! dl/dtheta = n / theta + sum x_i / (beta - 1 + theta x_i) - sum x_i
//!             + ln a * sum x_i e^(-theta x_i) (beta - 1 + theta x_i) / beta
//! dl/dbeta  = -n / beta + sum 1 / (beta - 1 + theta x_i)
//!             + ln a * sum theta x_i e^(-theta x_i) / beta^2
//! ```
//!
//! Written as `-c ln a sum x e^(-theta x) + ln a sum ((beta + theta x)/beta) x e^(-theta x)`,
//! the `ln a` part of `dl/dtheta` has `c = 1/beta`, not `1 + 1/beta`.
//!
//! `alpha` is never estimated by its own Newton direction; use
//! [`fit_profile`] to pick it from a grid by profile likelihood.

use nalgebra::{Vector1, Vector2};
use serde::{Deserialize, Serialize};

use crate::distribution::PlAptParams;
use crate::error::{Error, Result};
use crate::optimize::{self, Objective, Settings};
use crate::sample::Sample;

/// Smallest admissible `beta - 1` during fitting.
pub const BETA_MARGIN: f64 = 1e-9;

/// Convergence and damping controls for [`fit_mle_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Score-norm tolerance per observation; the fit converges when
    /// `|score| <= tolerance_per_obs * n`.
    pub tolerance_per_obs: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tolerance_per_obs: 1e-8,
            max_iterations: 200,
            max_halvings: 30,
        }
    }
}

/// Outcome of a `(theta, beta)` maximum-likelihood fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: PlAptParams,
    pub loglik: f64,
    pub score_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub stderr_theta: Option<f64>,
    pub stderr_beta: Option<f64>,
    /// Inverse observed information, ordered `(theta, beta)`; absent when
    /// the negative Hessian is not positive definite.
    pub covariance: Option<[[f64; 2]; 2]>,
}

fn validate(alpha: f64, theta: f64, beta: f64) -> Result<PlAptParams> {
    PlAptParams::new(alpha, beta, theta)
}

/// Log-likelihood of `data` under `PL-APT(alpha, beta, theta)`.
pub fn log_likelihood(alpha: f64, theta: f64, beta: f64, data: &Sample) -> Result<f64> {
    let p = validate(alpha, theta, beta)?;
    let n = data.len() as f64;
    let mut sum_log_linear = 0.0;
    let mut sum_x = 0.0;
    let mut sum_cdf = 0.0;
    for &x in data.values() {
        let tx = theta * x;
        sum_log_linear += (beta - 1.0 + tx).ln();
        sum_x += x;
        if !p.is_alpha_one() {
            sum_cdf += -((tx / beta).ln_1p() - tx).exp_m1();
        }
    }
    let mut l = n * (theta.ln() - beta.ln()) + sum_log_linear - theta * sum_x;
    if !p.is_alpha_one() {
        l += n * p.transform_scale().ln() + p.ln_alpha() * sum_cdf;
    }
    Ok(l)
}

/// Partial derivatives `(dl/dtheta, dl/dbeta)` of [`log_likelihood`].
pub fn score(alpha: f64, theta: f64, beta: f64, data: &Sample) -> Result<(f64, f64)> {
    let p = validate(alpha, theta, beta)?;
    let n = data.len() as f64;
    let ln_a = if p.is_alpha_one() { 0.0 } else { p.ln_alpha() };
    let mut d_theta = n / theta;
    let mut d_beta = -n / beta;
    for &x in data.values() {
        let tx = theta * x;
        let linear = beta - 1.0 + tx;
        d_theta += x / linear - x;
        d_beta += 1.0 / linear;
        if ln_a != 0.0 {
            let decay = (-tx).exp();
            d_theta += ln_a * x * decay * linear / beta;
            d_beta += ln_a * tx * decay / (beta * beta);
        }
    }
    Ok((d_theta, d_beta))
}

fn feasible_theta_beta(theta: f64, beta: f64) -> bool {
    theta > 0.0 && theta.is_finite() && beta > 1.0 + BETA_MARGIN && beta.is_finite()
}

struct ThetaBeta<'a> {
    alpha: f64,
    data: &'a Sample,
}

impl Objective<2> for ThetaBeta<'_> {
    fn value(&self, x: &Vector2<f64>) -> Result<f64> {
        log_likelihood(self.alpha, x[0], x[1], self.data)
    }

    fn gradient(&self, x: &Vector2<f64>) -> Result<Vector2<f64>> {
        let (t, b) = score(self.alpha, x[0], x[1], self.data)?;
        Ok(Vector2::new(t, b))
    }

    fn feasible(&self, x: &Vector2<f64>) -> bool {
        feasible_theta_beta(x[0], x[1])
    }
}

/// Lindley likelihood as a function of `theta` alone (`beta = 1 + theta`).
struct LindleyTheta<'a> {
    data: &'a Sample,
}

impl Objective<1> for LindleyTheta<'_> {
    fn value(&self, x: &Vector1<f64>) -> Result<f64> {
        log_likelihood(1.0, x[0], 1.0 + x[0], self.data)
    }

    fn gradient(&self, x: &Vector1<f64>) -> Result<Vector1<f64>> {
        let (t, b) = score(1.0, x[0], 1.0 + x[0], self.data)?;
        Ok(Vector1::new(t + b))
    }

    fn feasible(&self, x: &Vector1<f64>) -> bool {
        x[0] > BETA_MARGIN && x[0].is_finite()
    }
}

fn check_data(data: &Sample) -> Result<()> {
    if data.len() < 2 {
        return Err(Error::Data("fitting needs at least two observations".into()));
    }
    if !(data.mean() > 0.0) {
        return Err(Error::Data("all observations are zero".into()));
    }
    Ok(())
}

fn settings(options: &FitOptions, n: usize) -> Settings {
    Settings {
        gradient_tolerance: options.tolerance_per_obs * n as f64,
        max_iterations: options.max_iterations,
        max_halvings: options.max_halvings,
    }
}

/// Fits `(theta, beta)` at fixed `alpha` with default [`FitOptions`].
///
/// Starts from `theta = 1 / mean`, `beta = 2` unless `init` is given.
pub fn fit_mle(alpha: f64, data: &Sample, init: Option<(f64, f64)>) -> Result<FitResult> {
    fit_mle_with(alpha, data, init, &FitOptions::default())
}

pub fn fit_mle_with(alpha: f64, data: &Sample, init: Option<(f64, f64)>, options: &FitOptions) -> Result<FitResult> {
    check_data(data)?;
    let (theta0, beta0) = init.unwrap_or((1.0 / data.mean(), 2.0));
    validate(alpha, theta0, beta0)?;
    if !feasible_theta_beta(theta0, beta0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta0,
            reason: "initial beta too close to 1",
        });
    }
    let objective = ThetaBeta { alpha, data };
    let out = optimize::maximize(&objective, Vector2::new(theta0, beta0), &settings(options, data.len()))?;

    let information = -out.hessian;
    let covariance = match information.cholesky() {
        Some(chol) => {
            let inv = chol.inverse();
            let off = 0.5 * (inv[(0, 1)] + inv[(1, 0)]);
            Some([[inv[(0, 0)], off], [off, inv[(1, 1)]]])
        }
        None => {
            let eig = information.symmetric_eigenvalues();
            let largest = eig.amax();
            let smallest = eig.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
            if out.converged && !(smallest > 1e-12 * largest) {
                return Err(Error::SingularHessian(smallest / largest));
            }
            None
        }
    };

    Ok(FitResult {
        params: PlAptParams::new(alpha, out.point[1], out.point[0])?,
        loglik: out.value,
        score_norm: out.gradient.norm(),
        iterations: out.iterations,
        converged: out.converged,
        stderr_theta: covariance.map(|c| c[0][0].sqrt()),
        stderr_beta: covariance.map(|c| c[1][1].sqrt()),
        covariance,
    })
}

/// Profile-likelihood fit over a grid of `alpha` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFit {
    /// Fit at the grid value with the largest converged log-likelihood.
    pub best: FitResult,
    /// `(alpha, loglik, converged)` per grid point, in grid order; grid
    /// points whose fit errored are omitted.
    pub profile: Vec<(f64, f64, bool)>,
}

pub fn fit_profile(alphas: &[f64], data: &Sample) -> Result<ProfileFit> {
    if alphas.is_empty() {
        return Err(Error::Data("alpha grid is empty".into()));
    }
    let mut best: Option<FitResult> = None;
    let mut profile = Vec::with_capacity(alphas.len());
    let mut last_error = None;
    for &alpha in alphas {
        match fit_mle(alpha, data, None) {
            Ok(fit) => {
                profile.push((alpha, fit.loglik, fit.converged));
                let better = match &best {
                    None => true,
                    Some(b) => (fit.converged, fit.loglik) > (b.converged, b.loglik),
                };
                if better {
                    best = Some(fit);
                }
            }
            Err(e) => last_error = Some(e),
        }
    }
    match best {
        Some(best) => Ok(ProfileFit { best, profile }),
        None => Err(last_error.expect("nonempty grid")),
    }
}

/// Fits the one-parameter Lindley model (`alpha = 1`, `beta = 1 + theta`).
pub fn fit_lindley(data: &Sample) -> Result<FitResult> {
    check_data(data)?;
    let options = FitOptions::default();
    let objective = LindleyTheta { data };
    let start = Vector1::new(1.0 / data.mean());
    let out = optimize::maximize(&objective, start, &settings(&options, data.len()))?;
    let theta = out.point[0];
    let variance = (-out.hessian[(0, 0)] > 0.0).then(|| -1.0 / out.hessian[(0, 0)]);
    Ok(FitResult {
        params: PlAptParams::lindley(theta)?,
        loglik: out.value,
        score_norm: out.gradient.norm(),
        iterations: out.iterations,
        converged: out.converged,
        stderr_theta: variance.map(f64::sqrt),
        stderr_beta: None,
        covariance: None,
    })
}

/// Candidate model for [`model_compare`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `theta` free.
    Lindley,
    /// `theta`, `beta` free.
    PseudoLindley,
    /// `theta`, `beta` free at a fixed `alpha`.
    PlApt { alpha: f64 },
    /// `theta`, `beta` free and `alpha` chosen from a grid (three free
    /// parameters for the information criteria).
    PlAptProfile { alphas: Vec<f64> },
}

impl Family {
    pub fn free_parameters(&self) -> usize {
        match self {
            Family::Lindley => 1,
            Family::PseudoLindley | Family::PlApt { .. } => 2,
            Family::PlAptProfile { .. } => 3,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Family::Lindley => "lindley".into(),
            Family::PseudoLindley => "pseudo-lindley".into(),
            Family::PlApt { alpha } => format!("pl-apt(alpha={alpha})"),
            Family::PlAptProfile { alphas } => format!("pl-apt(alpha grid, {} points)", alphas.len()),
        }
    }

    pub fn fit(&self, data: &Sample) -> Result<FitResult> {
        match self {
            Family::Lindley => fit_lindley(data),
            Family::PseudoLindley => fit_mle(1.0, data, None),
            Family::PlApt { alpha } => fit_mle(*alpha, data, None),
            Family::PlAptProfile { alphas } => fit_profile(alphas, data).map(|p| p.best),
        }
    }
}

/// `(AIC, BIC)` for a log-likelihood with `k` free parameters and `n` points.
pub fn information_criteria(loglik: f64, k: usize, n: usize) -> (f64, f64) {
    let k = k as f64;
    (2.0 * k - 2.0 * loglik, k * (n as f64).ln() - 2.0 * loglik)
}

/// One row of a model comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRow {
    pub family: Family,
    pub label: String,
    pub free_parameters: usize,
    pub fit: Option<FitResult>,
    pub loglik: Option<f64>,
    pub aic: Option<f64>,
    pub bic: Option<f64>,
    /// Set when the fit errored or did not converge.
    pub failure: Option<String>,
}

/// Fits every candidate; a failing candidate is flagged without affecting the others.
pub fn model_compare(data: &Sample, candidates: &[Family]) -> Vec<ModelRow> {
    candidates
        .iter()
        .map(|family| {
            let k = family.free_parameters();
            let mut row = ModelRow {
                family: family.clone(),
                label: family.label(),
                free_parameters: k,
                fit: None,
                loglik: None,
                aic: None,
                bic: None,
                failure: None,
            };
            match family.fit(data) {
                Ok(fit) => {
                    let (aic, bic) = information_criteria(fit.loglik, k, data.len());
                    if !fit.converged {
                        row.failure = Some(format!("did not converge (score norm {:e})", fit.score_norm));
                    }
                    row.loglik = Some(fit.loglik);
                    row.aic = Some(aic);
                    row.bic = Some(bic);
                    row.fit = Some(fit);
                }
                Err(e) => row.failure = Some(e.to_string()),
            }
            row
        })
        .collect()
}
