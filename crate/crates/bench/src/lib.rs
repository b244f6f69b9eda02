//! Shared inputs for the benchmarks in `benches/`.

use plapt::{PlAptParams, Sample};

/// Parameter triple used across benchmarks.
pub fn reference_params() -> PlAptParams {
    PlAptParams::new(2.0, 2.5, 0.6).expect("valid parameters")
}

/// Seeded PL-APT sample of size `n`.
pub fn reference_sample(n: usize) -> Sample {
    plapt::draw(&reference_params(), n, 42).expect("sampling succeeds")
}

/// Exact Pareto-type sample `X_i = (i / (n + 1))^-0.5`.
pub fn pareto_sample(n: usize) -> Sample {
    let values = (1..=n).map(|i| (i as f64 / (n as f64 + 1.0)).powf(-0.5)).collect();
    Sample::new(values).expect("positive values")
}
