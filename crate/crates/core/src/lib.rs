//! The Pseudo-Lindley alpha power transformed (PL-APT) lifetime distribution.
//!
//! With the Pseudo-Lindley survival function
//! `S(x) = (1 + theta x / beta) e^(-theta x)` and `F = 1 - S`, the PL-APT cdf is
//!
//! ```text
//! G(x) = (1 - alpha^F(x)) / (1 - alpha)   (alpha != 1),   G = F   (alpha = 1)
//! ```
//!
//! for `alpha > 0`, `beta > 1`, `theta > 0`. Lindley is the special case
//! `alpha = 1`, `beta = 1 + theta`.
//!
//! * [`special`]: Lambert W and Gamma.
//! * [`distribution`]: cdf, pdf, hazard, Lambert-W quantiles, sampling, order statistics.
//! * [`inference`]: likelihood, score, Newton fitting, model comparison.
//! * [`extremes`]: extremal quantile expansion, Gumbel checks, double Hill estimators.
//! * [`montecarlo`]: reproducible simulation studies with JSON reports.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distribution;
pub mod error;
pub mod extremes;
pub mod inference;
pub mod montecarlo;
mod optimize;
pub mod rng;
pub mod sample;
pub mod special;

pub use distribution::{
    cdf, hazard, median_order_stat_pdf, order_stat_pdf, pdf, quantile, reliability, sample as draw, tail_quantile,
    OrderStatSpec, PlAptParams,
};
pub use error::{Error, Result};
pub use extremes::{
    double_hill_components, evi_asymptotic_test, extremal_quantile, maxima_normalization, EviReport, ExtremalExpansion,
    Weight, WeightSpec,
};
pub use inference::{fit_mle, fit_profile, log_likelihood, model_compare, score, Family, FitResult};
pub use montecarlo::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentReport};
pub use sample::Sample;
pub use special::{gamma_fn, lambert_w, LambertBranch};
