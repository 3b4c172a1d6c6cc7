use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::format_number;
use crate::matrix::{PositiveVector, StochasticMatrix};
use crate::reversible::{stationary_distribution, ReversibleChain, REVERSIBILITY_TOL};
use crate::spectral::second_eigenvalue_modulus;
use crate::structure::is_aperiodic;
use crate::tilt::tilt;

/// Errors below this are treated as having hit the floating-point floor and
/// are left out of the rate fit.
pub const ERROR_FLOOR: f64 = 1e-13;

const STATIONARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub n_steps: usize,
    /// `errors[k-1] = ‖P_k - 1 μ_kᵀ‖_max` after `k` factors.
    pub errors: Vec<f64>,
    pub fitted_rate: f64,
    pub predicted_rate: f64,
    /// Second-eigenvalue bound for the first `k` factors.
    pub bound_curve: Vec<f64>,
}

impl ConvergenceReport {
    /// CSV with columns `step,error,bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,error,bound\n");
        for (k, (e, b)) in self.errors.iter().zip(&self.bound_curve).enumerate() {
            out.push_str(&format!("{},{},{}\n", k + 1, format_number(*e), format_number(*b)));
        }
        out
    }
}

/// Tracks `P_k = ∏_{i≤k} tilt(P, uᵢ)` for `k = 1..=n` and how fast it
/// approaches the rank-one matrix `1 μ_kᵀ`.
///
/// A schedule shorter than `n` repeats its last vector; an empty schedule
/// means no tilting.
pub fn converge_demo(
    chain: &ReversibleChain,
    u_schedule: &[PositiveVector],
    n: usize,
) -> Result<ConvergenceReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 steps, got {n}")));
    }
    let p = chain.kernel();
    let m = chain.states();
    if let Some(u) = u_schedule.iter().find(|u| u.len() != m) {
        return Err(Error::Dimension(format!(
            "schedule vector of length {} for a chain on {m} states",
            u.len()
        )));
    }
    if !is_aperiodic(p)? {
        return Err(Error::Periodic);
    }
    let predicted_rate = second_eigenvalue_modulus(p, Some(chain.stationary()), REVERSIBILITY_TOL)?;
    if predicted_rate >= 1.0 - 1e-12 {
        return Err(Error::Periodic);
    }

    let ones = PositiveVector::ones(m);
    let schedule = |k: usize| u_schedule.get(k).or(u_schedule.last()).unwrap_or(&ones);

    let mut errors = Vec::with_capacity(n);
    let mut bound_curve = Vec::with_capacity(n);
    let mut spread_factor = 1.0;
    let mut product: Option<StochasticMatrix> = None;
    for k in 0..n {
        let u = schedule(k);
        let step = tilt(p, u, p.tol())?;
        let next = match &product {
            None => step,
            Some(acc) => acc.compose(&step)?,
        };
        let mu = stationary_distribution(&next, STATIONARY_TOL)?;
        let err = next
            .row_iter()
            .flat_map(|row| row.iter().zip(mu.iter()).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        errors.push(err);
        spread_factor *= u.spread().powi(4);
        bound_curve.push(predicted_rate.powi(k as i32 + 1) * spread_factor);
        product = Some(next);
    }

    Ok(ConvergenceReport { n_steps: n, fitted_rate: fit_rate(&errors), errors, predicted_rate, bound_curve })
}

/// Geometric decay rate from a least-squares fit of `log(error)` against the
/// step index.
///
/// Only the run of errors before the first one under [`ERROR_FLOOR`] is used,
/// and of that only the last half, to skip the initial transient. Returns 0
/// when fewer than two usable points remain.
pub fn fit_rate(errors: &[f64]) -> f64 {
    let usable = errors.iter().position(|&e| e < ERROR_FLOOR).unwrap_or(errors.len());
    if usable < 2 {
        return 0.0;
    }
    let start = (usable / 2).min(usable - 2);
    let points: Vec<(f64, f64)> = (start..usable).map(|k| (k as f64, errors[k].ln())).collect();
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    (sxy / sxx).exp()
}
