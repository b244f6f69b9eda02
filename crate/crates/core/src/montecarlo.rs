//! Reproducible simulation studies.
//!
//! Replication `i` draws its data from random stream `i` of the master seed
//! (see [`crate::rng`]), so a report depends only on its configuration and
//! never on the number of worker threads. Reports serialize to JSON; the
//! schema is described in `docs/experiment-report.md`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{sample_unsorted, PlAptParams};
use crate::error::{Error, Result};
use crate::extremes::{double_hill_components, gumbel_cdf, ks_distance, normalized_maximum, WeightSpec};
use crate::inference::{fit_mle, model_compare, Family};
use crate::rng::{stream_rng, STREAM_SCHEME};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Fit `(theta, beta)` at the true `alpha`.
    Recovery,
    /// Lindley, Pseudo-Lindley and PL-APT fits ranked by AIC and BIC.
    ModelCompare,
    /// Coverage of the double Hill 95% interval.
    EviCoverage,
    /// Normalized maxima against the Gumbel law.
    MaximaGumbel,
}

/// Number of upper order statistics used for a sample of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum KRule {
    /// `floor(n^exponent)`.
    Power {
        exponent: f64,
    },
    Fixed {
        k: usize,
    },
}

impl KRule {
    pub fn k(&self, n: usize) -> usize {
        match *self {
            KRule::Power { exponent } => (n as f64).powf(exponent).floor() as usize,
            KRule::Fixed { k } => k,
        }
    }
}

/// Data source of an [`ExperimentKind::EviCoverage`] study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum EviSource {
    /// Exact Pareto data `X = U^-gamma`; the interval should cover `gamma`.
    Pareto { gamma: f64 },
    /// Draws from `truth`, checked against a caller-chosen `target`.
    Truth { target: f64 },
}

impl EviSource {
    pub fn target(&self) -> f64 {
        match *self {
            EviSource::Pareto { gamma } => gamma,
            EviSource::Truth { target } => target,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub truth: PlAptParams,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub k_rule: KRule,
    pub weight: WeightSpec,
    pub evi_source: EviSource,
    /// Grid for the profile-likelihood PL-APT candidate in model comparison.
    pub alpha_grid: Vec<f64>,
}

impl ExperimentConfig {
    /// Configuration with defaults for the fields `kind` does not use.
    pub fn new(kind: ExperimentKind, truth: PlAptParams, n: usize, reps: usize, seed: u64) -> Self {
        Self {
            kind,
            truth,
            n,
            reps,
            seed,
            k_rule: KRule::Power { exponent: 0.6 },
            weight: WeightSpec::hill(),
            evi_source: EviSource::Pareto { gamma: 0.5 },
            alpha_grid: vec![0.25, 0.5, 1.5, 2.0, 3.0, 5.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidParameter {
                name: "reps",
                value: 0.0,
                reason: "need at least one replication",
            });
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: self.n as f64,
                reason: "sample size must be at least 2",
            });
        }
        if self.kind == ExperimentKind::EviCoverage {
            let k = self.k_rule.k(self.n);
            if k == 0 || k >= self.n {
                return Err(Error::InvalidParameter {
                    name: "k",
                    value: k as f64,
                    reason: "k rule must give 1 <= k <= n - 1",
                });
            }
            let target = self.evi_source.target();
            if !(target > 0.0 && target.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "target",
                    value: target,
                    reason: "must be positive and finite",
                });
            }
        }
        if self.kind == ExperimentKind::MaximaGumbel && self.truth.is_alpha_one() {
            return Err(Error::domain("run_experiment", 1.0, "alpha != 1 for maxima studies"));
        }
        if self.kind == ExperimentKind::ModelCompare && self.alpha_grid.is_empty() {
            return Err(Error::Data("alpha grid is empty".into()));
        }
        Ok(())
    }
}

/// Per-model numbers of one model-comparison replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelScore {
    pub label: String,
    pub loglik: Option<f64>,
    pub aic: Option<f64>,
    pub bic: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Recovery {
        theta: f64,
        beta: f64,
        loglik: f64,
        iterations: usize,
    },
    ModelCompare {
        models: Vec<ModelScore>,
        best_aic: Option<String>,
        best_bic: Option<String>,
    },
    EviCoverage {
        k: usize,
        estimate: f64,
        ci_low: f64,
        ci_high: f64,
        covered: bool,
    },
    MaximaGumbel {
        normalized: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub replication: u64,
    /// Absent when the replication failed.
    pub outcome: Option<Outcome>,
    pub failure: Option<String>,
}

/// Location and spread of an estimator over the successful replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub name: String,
    pub truth: f64,
    pub count: usize,
    pub mean: f64,
    pub bias: f64,
    /// Sample standard deviation (divisor `count - 1`); 0 for one value.
    pub sd: f64,
    pub rmse: f64,
}

impl EstimateSummary {
    fn new(name: &str, truth: f64, values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let sd = if count > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        let rmse = (values.iter().map(|v| (v - truth).powi(2)).sum::<f64>() / count as f64).sqrt();
        Some(Self {
            name: name.into(),
            truth,
            count,
            mean,
            bias: mean - truth,
            sd,
            rmse,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelWins {
    pub label: String,
    pub aic_wins: usize,
    pub bic_wins: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub successes: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub estimates: Vec<EstimateSummary>,
    pub coverage: Option<f64>,
    pub ks_distance: Option<f64>,
    pub model_wins: Vec<ModelWins>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub rng_scheme: String,
    pub library: String,
    pub library_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub provenance: Provenance,
    pub summary: Summary,
    /// One record per replication, ordered by replication index.
    pub records: Vec<Record>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn pareto_sample(gamma: f64, n: usize, seed: u64, stream: u64) -> Result<Sample> {
    use rand::Rng;
    let mut rng = stream_rng(seed, stream);
    Sample::new((0..n).map(|_| (1.0 - rng.random::<f64>()).powf(-gamma)).collect())
}

fn candidates(cfg: &ExperimentConfig) -> Vec<Family> {
    vec![
        Family::Lindley,
        Family::PseudoLindley,
        Family::PlAptProfile {
            alphas: cfg.alpha_grid.clone(),
        },
    ]
}

fn replicate(cfg: &ExperimentConfig, r: u64) -> Result<Outcome> {
    let data = || Sample::new(sample_unsorted(&cfg.truth, cfg.n, cfg.seed, r)?);
    match cfg.kind {
        ExperimentKind::Recovery => {
            let fit = fit_mle(cfg.truth.alpha(), &data()?, None)?;
            if !fit.converged {
                return Err(Error::numerical(
                    "fit_mle",
                    format!("no convergence after {} iterations", fit.iterations),
                ));
            }
            Ok(Outcome::Recovery {
                theta: fit.params.theta(),
                beta: fit.params.beta(),
                loglik: fit.loglik,
                iterations: fit.iterations,
            })
        }
        ExperimentKind::ModelCompare => {
            let rows = model_compare(&data()?, &candidates(cfg));
            let best = |pick: fn(&ModelScore) -> Option<f64>, models: &[ModelScore]| {
                models
                    .iter()
                    .filter(|m| m.failure.is_none())
                    .filter_map(|m| pick(m).map(|v| (v, m.label.clone())))
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .map(|(_, label)| label)
            };
            let models: Vec<ModelScore> = rows
                .into_iter()
                .map(|row| ModelScore {
                    label: row.label,
                    loglik: row.loglik,
                    aic: row.aic,
                    bic: row.bic,
                    failure: row.failure,
                })
                .collect();
            Ok(Outcome::ModelCompare {
                best_aic: best(|m| m.aic, &models),
                best_bic: best(|m| m.bic, &models),
                models,
            })
        }
        ExperimentKind::EviCoverage => {
            let sample = match cfg.evi_source {
                EviSource::Pareto { gamma } => pareto_sample(gamma, cfg.n, cfg.seed, r)?,
                EviSource::Truth { .. } => data()?,
            };
            let k = cfg.k_rule.k(cfg.n);
            let report = double_hill_components(&sample, &cfg.weight, k)?;
            let target = cfg.evi_source.target();
            Ok(Outcome::EviCoverage {
                k,
                estimate: report.m_n,
                ci_low: report.ci_low,
                ci_high: report.ci_high,
                covered: report.ci_low <= target && target <= report.ci_high,
            })
        }
        ExperimentKind::MaximaGumbel => Ok(Outcome::MaximaGumbel {
            normalized: normalized_maximum(&cfg.truth, cfg.n, cfg.seed, r)?,
        }),
    }
}

fn summarize(cfg: &ExperimentConfig, records: &[Record]) -> Summary {
    let outcomes: Vec<&Outcome> = records.iter().filter_map(|r| r.outcome.as_ref()).collect();
    let successes = outcomes.len();
    let failures = records.len() - successes;
    let mut summary = Summary {
        successes,
        failures,
        failure_rate: failures as f64 / records.len() as f64,
        estimates: Vec::new(),
        coverage: None,
        ks_distance: None,
        model_wins: Vec::new(),
    };
    match cfg.kind {
        ExperimentKind::Recovery => {
            let (mut thetas, mut betas) = (Vec::new(), Vec::new());
            for o in &outcomes {
                if let Outcome::Recovery { theta, beta, .. } = o {
                    thetas.push(*theta);
                    betas.push(*beta);
                }
            }
            summary
                .estimates
                .extend(EstimateSummary::new("theta", cfg.truth.theta(), &thetas));
            summary
                .estimates
                .extend(EstimateSummary::new("beta", cfg.truth.beta(), &betas));
        }
        ExperimentKind::ModelCompare => {
            summary.model_wins = candidates(cfg)
                .iter()
                .map(|f| ModelWins {
                    label: f.label(),
                    aic_wins: 0,
                    bic_wins: 0,
                    failures: 0,
                })
                .collect();
            for o in &outcomes {
                if let Outcome::ModelCompare {
                    models,
                    best_aic,
                    best_bic,
                } = o
                {
                    for (wins, model) in summary.model_wins.iter_mut().zip(models) {
                        wins.aic_wins += usize::from(best_aic.as_deref() == Some(model.label.as_str()));
                        wins.bic_wins += usize::from(best_bic.as_deref() == Some(model.label.as_str()));
                        wins.failures += usize::from(model.failure.is_some());
                    }
                }
            }
        }
        ExperimentKind::EviCoverage => {
            let mut estimates = Vec::new();
            let mut covered = 0;
            for o in &outcomes {
                if let Outcome::EviCoverage {
                    estimate, covered: c, ..
                } = o
                {
                    estimates.push(*estimate);
                    covered += usize::from(*c);
                }
            }
            summary
                .estimates
                .extend(EstimateSummary::new("gamma", cfg.evi_source.target(), &estimates));
            if successes > 0 {
                summary.coverage = Some(covered as f64 / successes as f64);
            }
        }
        ExperimentKind::MaximaGumbel => {
            let mut values: Vec<f64> = outcomes
                .iter()
                .filter_map(|o| match o {
                    Outcome::MaximaGumbel { normalized } => Some(*normalized),
                    _ => None,
                })
                .collect();
            // Mean of the standard Gumbel law is the Euler-Mascheroni constant.
            summary.estimates.extend(EstimateSummary::new(
                "normalized-maximum",
                0.577_215_664_901_532_9,
                &values,
            ));
            values.sort_by(f64::total_cmp);
            if !values.is_empty() {
                summary.ks_distance = Some(ks_distance(&values, gumbel_cdf));
            }
        }
    }
    summary
}

/// Runs all replications in parallel and assembles the report.
///
/// A failing replication is recorded with its error message; only an
/// invalid configuration is an error.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let records: Vec<Record> = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|r| match replicate(cfg, r) {
            Ok(outcome) => Record {
                replication: r,
                outcome: Some(outcome),
                failure: None,
            },
            Err(e) => Record {
                replication: r,
                outcome: None,
                failure: Some(e.to_string()),
            },
        })
        .collect();
    let summary = summarize(cfg, &records);
    Ok(ExperimentReport {
        provenance: Provenance {
            config: cfg.clone(),
            seed: cfg.seed,
            rng_scheme: STREAM_SCHEME.into(),
            library: env!("CARGO_PKG_NAME").into(),
            library_version: env!("CARGO_PKG_VERSION").into(),
        },
        summary,
        records,
    })
}
