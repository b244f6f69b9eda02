//! `plapt`: command-line access to the PL-APT distribution library.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence,
//! 4 I/O failure.

mod error;
mod input;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plapt::distribution::{cdf, hazard, pdf, quantile, sample};
use plapt::extremes::{double_hill_components, evi_asymptotic_test, ExtremalExpansion, Weight, WeightSpec};
use plapt::inference::{fit_mle, fit_profile, information_criteria, FitResult};
use plapt::montecarlo::{run_experiment, EviSource, ExperimentConfig, ExperimentKind, KRule};
use plapt::PlAptParams;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{csv_text, emit, format_number, json_text};

#[derive(Parser)]
#[command(
    name = "plapt",
    version,
    about = "Pseudo-Lindley alpha power transformed distribution toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    /// Power-transform parameter, alpha > 0 (1 gives Pseudo-Lindley).
    #[arg(long, short = 'a', default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Shape parameter, beta > 1.
    #[arg(long, short = 'b', allow_negative_numbers = true)]
    beta: f64,
    /// Rate parameter, theta > 0.
    #[arg(long, short = 't', allow_negative_numbers = true)]
    theta: f64,
}

impl ParamArgs {
    fn params(&self) -> CliResult<PlAptParams> {
        Ok(PlAptParams::new(self.alpha, self.beta, self.theta)?)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Recovery,
    ModelCompare,
    EviCoverage,
    MaximaGumbel,
}

#[derive(Subcommand)]
enum Command {
    /// Quantiles G^-1(u).
    Quantile {
        #[command(flatten)]
        params: ParamArgs,
        /// Probability levels in [0, 1).
        #[arg(
            short = 'u',
            long = "u",
            required = true,
            value_delimiter = ',',
            allow_negative_numbers = true
        )]
        levels: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Quartile table over a grid of parameters.
    Table {
        /// Rate values.
        #[arg(long, value_delimiter = ',', default_values_t = [0.6, 1.5, 3.0, 5.2])]
        thetas: Vec<f64>,
        /// alpha:beta pairs.
        #[arg(long, value_delimiter = ',', default_values = ["0.5:1.1", "1.5:1.5", "2:2.5", "1:1.1", "1:1.5", "1:2.5"])]
        pairs: Vec<String>,
        /// Round to this many significant digits.
        #[arg(long)]
        digits: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Density.
    Pdf(PointArgs),
    /// Cumulative distribution function.
    Cdf(PointArgs),
    /// Hazard rate.
    Hazard(PointArgs),
    /// Seeded random draws, one per line.
    Sample {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long, env = "PLAPT_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Maximum-likelihood fit of (theta, beta) from a CSV column.
    Fit {
        #[arg(long, short = 'i')]
        input: PathBuf,
        /// Fixed alpha (default 1).
        #[arg(long, short = 'a', conflicts_with = "alpha_grid")]
        alpha: Option<f64>,
        /// Pick alpha from this grid by profile likelihood.
        #[arg(long, value_delimiter = ',')]
        alpha_grid: Option<Vec<f64>>,
        /// Starting values theta,beta.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        start: Option<Vec<f64>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Double Hill tail-index estimate from a CSV column.
    Evi {
        #[arg(long, short = 'i')]
        input: PathBuf,
        /// Number of upper order statistics.
        #[arg(short = 'k', long)]
        k: usize,
        /// Classical Hill weights f(j) = j, s = 1 (the default).
        #[arg(long, conflicts_with_all = ["tau", "s"])]
        hill: bool,
        /// Power weights f(j) = j^tau.
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
        /// Power of the log-spacings.
        #[arg(long, short = 's')]
        s: Option<f64>,
        /// Test gamma = target.
        #[arg(long)]
        target: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Extremal quantile expansion against the exact tail quantile.
    Expansion {
        #[command(flatten)]
        params: ParamArgs,
        /// Tail probabilities in (0, 0.1].
        #[arg(short = 'u', long = "u", required = true, value_delimiter = ',')]
        levels: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Simulation study with a JSON report.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Evaluation points.
    #[arg(
        short = 'x',
        long = "x",
        required = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    points: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Read the whole configuration from a JSON file; other flags are ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "config")]
    kind: Option<KindArg>,
    #[arg(long, short = 'a', default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, short = 'b', default_value_t = 2.5)]
    beta: f64,
    #[arg(long, short = 't', default_value_t = 0.6)]
    theta: f64,
    #[arg(short = 'n', long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, env = "PLAPT_SEED", default_value_t = 0)]
    seed: u64,
    /// k = floor(n^c) for tail-index studies.
    #[arg(long, default_value_t = 0.6)]
    k_exponent: f64,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Draw exact Pareto data with this gamma in tail-index studies.
    #[arg(long, default_value_t = 0.5)]
    pareto_gamma: f64,
    #[command(flatten)]
    out: OutputArgs,
}

fn csv_out(header: &[&str], rows: &[Vec<f64>], digits: Option<usize>, path: Option<&Path>) -> CliResult<()> {
    emit(&csv_text(header, rows, digits)?, path)
}

fn point_rows(args: &PointArgs, f: impl Fn(&PlAptParams, f64) -> CliResult<f64>) -> CliResult<Vec<Vec<f64>>> {
    let p = args.params.params()?;
    args.points.iter().map(|&x| Ok(vec![x, f(&p, x)?])).collect()
}

fn parse_pair(text: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Validation(format!("pair {text:?} is not of the form alpha:beta"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

#[derive(Serialize)]
struct FitOutput {
    n: usize,
    alpha: f64,
    theta: f64,
    beta: f64,
    stderr_theta: Option<f64>,
    stderr_beta: Option<f64>,
    covariance: Option<[[f64; 2]; 2]>,
    loglik: f64,
    aic: f64,
    bic: f64,
    converged: bool,
    iterations: usize,
    score_norm: f64,
    /// `(alpha, loglik, converged)` per grid point for profile fits.
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<Vec<(f64, f64, bool)>>,
}

impl FitOutput {
    fn new(fit: &FitResult, n: usize, free: usize, profile: Option<Vec<(f64, f64, bool)>>) -> Self {
        let (aic, bic) = information_criteria(fit.loglik, free, n);
        Self {
            n,
            alpha: fit.params.alpha(),
            theta: fit.params.theta(),
            beta: fit.params.beta(),
            stderr_theta: fit.stderr_theta,
            stderr_beta: fit.stderr_beta,
            covariance: fit.covariance,
            loglik: fit.loglik,
            aic,
            bic,
            converged: fit.converged,
            iterations: fit.iterations,
            score_norm: fit.score_norm,
            profile,
        }
    }
}

#[derive(Serialize)]
struct EviOutput {
    n: usize,
    weight: Weight,
    #[serde(flatten)]
    report: plapt::EviReport,
}

fn experiment_config(args: &ExperimentArgs) -> CliResult<ExperimentConfig> {
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())));
    }
    let kind = match args.kind.expect("clap requires kind without config") {
        KindArg::Recovery => ExperimentKind::Recovery,
        KindArg::ModelCompare => ExperimentKind::ModelCompare,
        KindArg::EviCoverage => ExperimentKind::EviCoverage,
        KindArg::MaximaGumbel => ExperimentKind::MaximaGumbel,
    };
    let truth = PlAptParams::new(args.alpha, args.beta, args.theta)?;
    let mut cfg = ExperimentConfig::new(kind, truth, args.n, args.reps, args.seed);
    cfg.k_rule = KRule::Power {
        exponent: args.k_exponent,
    };
    cfg.weight = WeightSpec {
        weight: args.tau.map_or(Weight::Hill, |tau| Weight::Power { tau }),
        s: args.s,
    };
    cfg.evi_source = EviSource::Pareto {
        gamma: args.pareto_gamma,
    };
    Ok(cfg)
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Quantile { params, levels, out } => {
            let p = params.params()?;
            let rows = levels
                .iter()
                .map(|&u| Ok(vec![u, quantile(&p, u)?]))
                .collect::<CliResult<Vec<_>>>()?;
            csv_out(&["u", "quantile"], &rows, None, out.output.as_deref())
        }
        Command::Table {
            thetas,
            pairs,
            digits,
            out,
        } => {
            let pairs = pairs.iter().map(|p| parse_pair(p)).collect::<CliResult<Vec<_>>>()?;
            let mut rows = Vec::new();
            for &theta in &thetas {
                for &(alpha, beta) in &pairs {
                    let p = PlAptParams::new(alpha, beta, theta)?;
                    let mut row = vec![theta, alpha, beta];
                    for u in [0.25, 0.5, 0.75] {
                        row.push(quantile(&p, u)?);
                    }
                    rows.push(row);
                }
            }
            // Parameters are echoed exactly; only quartiles are rounded.
            let mut text = String::from("theta,alpha,beta,Q1,Q2,Q3\n");
            for row in &rows {
                let cells: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| format_number(v, if i < 3 { None } else { digits }))
                    .collect();
                text.push_str(&cells.join(","));
                text.push('\n');
            }
            emit(&text, out.output.as_deref())
        }
        Command::Pdf(args) => {
            let rows = point_rows(&args, |p, x| Ok(pdf(p, x)))?;
            csv_out(&["x", "pdf"], &rows, None, args.out.output.as_deref())
        }
        Command::Cdf(args) => {
            let rows = point_rows(&args, |p, x| Ok(cdf(p, x)))?;
            csv_out(&["x", "cdf"], &rows, None, args.out.output.as_deref())
        }
        Command::Hazard(args) => {
            let rows = point_rows(&args, |p, x| Ok(hazard(p, x)?))?;
            csv_out(&["x", "hazard"], &rows, None, args.out.output.as_deref())
        }
        Command::Sample { params, n, seed, out } => {
            let draws = sample(&params.params()?, n, seed)?;
            let rows: Vec<Vec<f64>> = draws.values().iter().map(|&x| vec![x]).collect();
            csv_out(&["x"], &rows, None, out.output.as_deref())
        }
        Command::Fit {
            input,
            alpha,
            alpha_grid,
            start,
            out,
        } => {
            let data = input::read_sample(&input)?;
            let init = start.map(|s| (s[0], s[1]));
            let result = match alpha_grid {
                Some(grid) => {
                    let profile = fit_profile(&grid, &data)?;
                    FitOutput::new(&profile.best, data.len(), 3, Some(profile.profile))
                }
                None => {
                    let fit = fit_mle(alpha.unwrap_or(1.0), &data, init)?;
                    FitOutput::new(&fit, data.len(), 2, None)
                }
            };
            emit(&json_text(&result), out.output.as_deref())?;
            if result.converged {
                Ok(())
            } else {
                Err(CliError::NonConvergence(format!(
                    "score norm {} after {} iterations",
                    result.score_norm, result.iterations
                )))
            }
        }
        Command::Evi {
            input,
            k,
            hill: _,
            tau,
            s,
            target,
            out,
        } => {
            let data = input::read_sample(&input)?;
            let weight = tau.map_or(Weight::Hill, |tau| Weight::Power { tau });
            let w = WeightSpec {
                weight: weight.clone(),
                s: s.unwrap_or(1.0),
            };
            let report = match target {
                Some(target) => evi_asymptotic_test(&data, &w, k, target)?,
                None => double_hill_components(&data, &w, k)?,
            };
            let n = data.len();
            emit(&json_text(&EviOutput { n, weight, report }), out.output.as_deref())
        }
        Command::Expansion { params, levels, out } => {
            let p = params.params()?;
            let expansion = ExtremalExpansion::new(&p)?;
            let mut rows = Vec::new();
            for &u in &levels {
                let t = expansion.terms(u)?;
                let exact = plapt::tail_quantile(&p, u)?;
                rows.push(vec![
                    u,
                    t.constant,
                    t.log_term,
                    t.log_log_term,
                    t.inverse_log_term,
                    t.total,
                    expansion.series(u)?,
                    exact,
                ]);
            }
            let header = [
                "u",
                "constant",
                "log_term",
                "log_log_term",
                "inverse_log_term",
                "expansion",
                "series",
                "exact",
            ];
            csv_out(&header, &rows, None, out.output.as_deref())
        }
        Command::Experiment(args) => {
            let cfg = experiment_config(&args)?;
            let report = run_experiment(&cfg)?;
            emit(&json_text(&report), args.out.output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("plapt: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
