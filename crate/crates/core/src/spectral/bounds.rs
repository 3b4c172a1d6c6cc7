//! Upper bounds on `|λ₂|` for tilted chains and products of reversible
//! chains, and checkers that set each bound against the observed value.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{PositiveVector, StochasticMatrix};
use crate::reversible::{tilted_stationary, ProbabilityVector, ReversibleChain, REVERSIBILITY_TOL};
use crate::tilt::tilt;

use super::second_eigenvalue_modulus;

/// A bound counts as satisfied when the observed value exceeds it by at most
/// this much.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub observed_lambda2: f64,
    pub bound_value: f64,
    pub satisfied: bool,
    pub slack: f64,
}

impl BoundReport {
    pub fn new(observed_lambda2: f64, bound_value: f64) -> Self {
        Self {
            observed_lambda2,
            bound_value,
            satisfied: observed_lambda2 <= bound_value + BOUND_SLACK,
            slack: bound_value - observed_lambda2,
        }
    }
}

/// `|λ₂(P)| · (max u / min u)²`, bounding `|λ₂|` of the `u`-tilt of a
/// reversible `P`.
pub fn bound_tilted(lambda2_p: f64, u: &PositiveVector) -> f64 {
    let ratio = u.spread();
    lambda2_p * ratio * ratio
}

fn max_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    if num.len() != den.len() {
        return Err(Error::Dimension(format!("distributions of length {} and {}", num.len(), den.len())));
    }
    for (index, (&a, &b)) in num.iter().zip(den).enumerate() {
        if a <= 0.0 || b <= 0.0 {
            return Err(Error::ZeroComponent { index });
        }
    }
    Ok(num.iter().zip(den).fold(0.0, |m, (a, b)| m.max(a / b)))
}

/// `|λ₂(P₁)| |λ₂(P₂)| · max μ₁/μ₂ · max μ₂/μ₁` for reversible `P₁`, `P₂`.
pub fn bound_pair(
    lambda2_1: f64,
    lambda2_2: f64,
    mu1: &ProbabilityVector,
    mu2: &ProbabilityVector,
) -> Result<f64> {
    Ok(lambda2_1 * lambda2_2 * max_ratio(mu1, mu2)? * max_ratio(mu2, mu1)?)
}

/// `∏ |λ₂(Pᵢ)| · ∏_{i≥2} max μᵢ₋₁/μᵢ · max μₙ/μ₁` for a product of
/// reversible chains.
pub fn bound_chain(lambda2s: &[f64], mus: &[ProbabilityVector]) -> Result<f64> {
    if lambda2s.len() != mus.len() {
        return Err(Error::LengthMismatch { left: lambda2s.len(), right: mus.len() });
    }
    let (first, last) = match (mus.first(), mus.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::InvalidArgument("empty product".into())),
    };
    let mut bound: f64 = lambda2s.iter().product();
    for pair in mus.windows(2) {
        bound *= max_ratio(&pair[0], &pair[1])?;
    }
    Ok(bound * max_ratio(last, first)?)
}

/// `|λ₂(P)|ⁿ · ∏ (max uᵢ / min uᵢ)⁴` for the product of the `uᵢ`-tilts of a
/// reversible `P`.
pub fn bound_main(lambda2_p: f64, us: &[PositiveVector]) -> Result<f64> {
    if us.is_empty() {
        return Err(Error::InvalidArgument("empty product".into()));
    }
    let spread: f64 = us.iter().map(|u| u.spread().powi(4)).product();
    Ok(lambda2_p.powi(us.len() as i32) * spread)
}

fn lambda2(chain: &ReversibleChain) -> Result<f64> {
    second_eigenvalue_modulus(chain.kernel(), Some(chain.stationary()), REVERSIBILITY_TOL)
}

fn product(factors: impl IntoIterator<Item = Result<StochasticMatrix>>) -> Result<StochasticMatrix> {
    let mut iter = factors.into_iter();
    let mut acc = iter.next().ok_or_else(|| Error::InvalidArgument("empty product".into()))??;
    for f in iter {
        acc = acc.compose(&f?)?;
    }
    Ok(acc)
}

/// `|λ₂(tilt(P, u))|` against [`bound_tilted`].
pub fn check_tilted(chain: &ReversibleChain, u: &PositiveVector) -> Result<BoundReport> {
    let tilted = tilted_stationary(chain, u)?;
    Ok(BoundReport::new(lambda2(&tilted)?, bound_tilted(lambda2(chain)?, u)))
}

/// `|λ₂(P₁P₂)|` against [`bound_pair`].
pub fn check_pair(first: &ReversibleChain, second: &ReversibleChain) -> Result<BoundReport> {
    let w = first.kernel().compose(second.kernel())?;
    let bound = bound_pair(lambda2(first)?, lambda2(second)?, first.stationary(), second.stationary())?;
    Ok(BoundReport::new(second_eigenvalue_modulus(&w, None, REVERSIBILITY_TOL)?, bound))
}

/// `|λ₂(∏ Pᵢ)|` against [`bound_chain`].
pub fn check_chain(chains: &[ReversibleChain]) -> Result<BoundReport> {
    let w = product(chains.iter().map(|c| Ok(c.kernel().clone())))?;
    let lambdas = chains.iter().map(lambda2).collect::<Result<Vec<_>>>()?;
    let mus: Vec<ProbabilityVector> = chains.iter().map(|c| c.stationary().clone()).collect();
    let bound = bound_chain(&lambdas, &mus)?;
    Ok(BoundReport::new(second_eigenvalue_modulus(&w, None, REVERSIBILITY_TOL)?, bound))
}

/// `|λ₂(∏ tilt(P, uᵢ))|` against [`bound_main`].
pub fn check_main(chain: &ReversibleChain, us: &[PositiveVector]) -> Result<BoundReport> {
    let p = chain.kernel();
    let w = product(us.iter().map(|u| tilt(p, u, p.tol())))?;
    let bound = bound_main(lambda2(chain)?, us)?;
    Ok(BoundReport::new(second_eigenvalue_modulus(&w, None, REVERSIBILITY_TOL)?, bound))
}
