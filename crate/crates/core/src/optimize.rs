//! Damped Newton-Raphson for small smooth maximization problems.
//!
//! The Hessian is the symmetrized central-difference Jacobian of the
//! analytic gradient. Steps are halved until they stay feasible and do not
//! decrease the objective; when the Newton direction is unusable (Hessian
//! not negative definite, or no admissible step length) a diagonally scaled
//! steepest-ascent step is taken instead.

use nalgebra::{SMatrix, SVector};

use crate::error::Result;

pub(crate) struct Settings {
    /// Converged when the Euclidean gradient norm is at most this.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
}

pub(crate) struct Outcome<const N: usize> {
    pub point: SVector<f64, N>,
    pub value: f64,
    pub gradient: SVector<f64, N>,
    pub hessian: SMatrix<f64, N, N>,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) trait Objective<const N: usize> {
    fn value(&self, x: &SVector<f64, N>) -> Result<f64>;
    fn gradient(&self, x: &SVector<f64, N>) -> Result<SVector<f64, N>>;
    fn feasible(&self, x: &SVector<f64, N>) -> bool;
}

pub(crate) fn hessian<const N: usize, O: Objective<N>>(
    objective: &O,
    x: &SVector<f64, N>,
) -> Result<SMatrix<f64, N, N>> {
    let mut h = SMatrix::<f64, N, N>::zeros();
    for i in 0..N {
        let mut step = 1e-6 * x[i].abs().max(1e-3);
        let (mut lo, mut hi) = (*x, *x);
        for _ in 0..60 {
            lo[i] = x[i] - step;
            hi[i] = x[i] + step;
            if objective.feasible(&lo) && objective.feasible(&hi) {
                break;
            }
            step *= 0.5;
        }
        let column = (objective.gradient(&hi)? - objective.gradient(&lo)?) / (2.0 * step);
        h.set_column(i, &column);
    }
    Ok((h + h.transpose()) * 0.5)
}

fn newton_direction<const N: usize>(h: &SMatrix<f64, N, N>, g: &SVector<f64, N>) -> Option<SVector<f64, N>> {
    // Only use Newton where the local model is concave.
    let negated = -h;
    let chol = negated.cholesky()?;
    let d = chol.solve(g);
    (d.iter().all(|v| v.is_finite()) && d.dot(g) > 0.0).then_some(d)
}

fn ascent_direction<const N: usize>(h: &SMatrix<f64, N, N>, g: &SVector<f64, N>) -> SVector<f64, N> {
    SVector::<f64, N>::from_fn(|i, _| {
        let curvature = h[(i, i)].abs();
        if curvature.is_finite() && curvature > 1e-12 {
            g[i] / curvature
        } else {
            g[i]
        }
    })
}

/// Backtracking along `direction`; returns the accepted point and value.
fn line_search<const N: usize, O: Objective<N>>(
    objective: &O,
    x: &SVector<f64, N>,
    value: f64,
    direction: &SVector<f64, N>,
    max_halvings: usize,
) -> Option<(SVector<f64, N>, f64)> {
    let slack = 1e-12 * (1.0 + value.abs());
    let mut t = 1.0;
    for _ in 0..=max_halvings {
        let candidate = x + direction * t;
        if objective.feasible(&candidate) {
            if let Ok(v) = objective.value(&candidate) {
                if v.is_finite() && v >= value - slack {
                    return Some((candidate, v));
                }
            }
        }
        t *= 0.5;
    }
    None
}

pub(crate) fn maximize<const N: usize, O: Objective<N>>(
    objective: &O,
    start: SVector<f64, N>,
    settings: &Settings,
) -> Result<Outcome<N>> {
    let mut x = start;
    let mut value = objective.value(&x)?;
    let mut g = objective.gradient(&x)?;
    let mut iterations = 0;
    let mut converged = g.norm() <= settings.gradient_tolerance;

    while !converged && iterations < settings.max_iterations {
        let h = hessian(objective, &x)?;
        let newton =
            newton_direction(&h, &g).and_then(|d| line_search(objective, &x, value, &d, settings.max_halvings));
        let accepted = newton.or_else(|| {
            let d = ascent_direction(&h, &g);
            line_search(objective, &x, value, &d, settings.max_halvings)
        });
        let Some((next, next_value)) = accepted else {
            break;
        };
        x = next;
        value = next_value;
        g = objective.gradient(&x)?;
        iterations += 1;
        converged = g.norm() <= settings.gradient_tolerance;
    }

    let hessian = hessian(objective, &x)?;
    Ok(Outcome {
        point: x,
        value,
        gradient: g,
        hessian,
        iterations,
        converged,
    })
}
