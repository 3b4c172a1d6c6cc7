//! Eigenvalues and singular values of small dense matrices, second-eigenvalue
//! extraction for stochastic matrices, and the second-eigenvalue bounds for
//! tilted and reversible products.

mod bounds;
mod jacobi;
mod qr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, StochasticMatrix};
use crate::reversible::{reversibility_defect, ProbabilityVector};

pub use bounds::{
    bound_chain, bound_main, bound_pair, bound_tilted, check_chain, check_main, check_pair, check_tilted,
    BoundReport, BOUND_SLACK,
};
pub use jacobi::symmetric_eigenvalues;

/// Default convergence tolerance for the eigensolvers.
pub const EIGEN_TOL: f64 = 1e-14;

/// The eigenvalue of a stochastic matrix closest to 1 must lie this close.
pub const UNIT_EIGENVALUE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    SymmetricJacobi,
    GeneralQr,
}

/// Eigenvalues sorted by descending modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
    method: SpectrumMethod,
}

impl Spectrum {
    fn new(mut eigenvalues: Vec<Complex64>, method: SpectrumMethod) -> Self {
        eigenvalues.sort_by(|a, b| {
            b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)).then(b.im.total_cmp(&a.im))
        });
        Self { eigenvalues, method }
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn method(&self) -> SpectrumMethod {
        self.method
    }

    pub fn max_imaginary(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn min_real(&self) -> f64 {
        self.eigenvalues.iter().fold(f64::INFINITY, |m, z| m.min(z.re))
    }

    /// Largest modulus after removing the eigenvalue closest to 1.
    pub fn second_modulus(&self) -> Result<f64> {
        let one = Complex64::new(1.0, 0.0);
        let (unit, distance) = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, z)| (k, (z - one).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::InvalidArgument("empty spectrum".into()))?;
        if distance > UNIT_EIGENVALUE_TOL {
            return Err(Error::NonStochasticDrift { distance, tol: UNIT_EIGENVALUE_TOL });
        }
        Ok(self
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != unit)
            .fold(0.0, |m, (_, z)| m.max(z.norm())))
    }
}

/// Full spectrum of a square matrix via Hessenberg reduction and shifted QR.
///
/// Deflation is decided at machine precision, so no tolerance is taken.
pub fn general_spectrum(m: &DenseMatrix) -> Result<Spectrum> {
    Ok(Spectrum::new(qr::eigenvalues(m)?, SpectrumMethod::GeneralQr))
}

/// Spectrum of a symmetric matrix via cyclic Jacobi.
pub fn symmetric_spectrum(s: &DenseMatrix, tol: f64) -> Result<Spectrum> {
    let values = symmetric_eigenvalues(s, tol)?;
    Ok(Spectrum::new(
        values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        SpectrumMethod::SymmetricJacobi,
    ))
}

/// Spectrum of a stochastic matrix. When `mu` certifies detailed balance
/// within `tol`, the symmetrized kernel goes through Jacobi; otherwise the
/// general QR route is used.
pub fn stochastic_spectrum(
    p: &StochasticMatrix,
    mu: Option<&ProbabilityVector>,
    tol: f64,
) -> Result<Spectrum> {
    p.require_square()?;
    if let Some(mu) = mu {
        if mu.iter().all(|&x| x > 0.0) && reversibility_defect(p, mu)? <= tol {
            let root: Vec<f64> = mu.iter().map(|m| m.sqrt()).collect();
            let inv_root: Vec<f64> = root.iter().map(|r| 1.0 / r).collect();
            let s = p.scale(Some(&root), Some(&inv_root))?;
            let t = s.transpose();
            let sym = DenseMatrix::from_raw(
                s.rows(),
                s.cols(),
                s.data().iter().zip(t.data()).map(|(a, b)| 0.5 * (a + b)).collect(),
            );
            return symmetric_spectrum(&sym, EIGEN_TOL);
        }
    }
    general_spectrum(p)
}

/// `|λ₂(P)|`: the largest modulus among the eigenvalues other than the one
/// closest to 1. Ties share the common modulus.
pub fn second_eigenvalue_modulus(
    p: &StochasticMatrix,
    mu: Option<&ProbabilityVector>,
    tol: f64,
) -> Result<f64> {
    stochastic_spectrum(p, mu, tol)?.second_modulus()
}

/// The two largest singular values `σ₁ ≥ σ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularPair {
    pub sigma1: f64,
    pub sigma2: f64,
}

impl SingularPair {
    pub fn product(&self) -> f64 {
        self.sigma1 * self.sigma2
    }
}

/// Two largest singular values from the eigenvalues of `MᵀM`.
pub fn top2_singular_values(m: &DenseMatrix, tol: f64) -> Result<SingularPair> {
    m.require_square()?;
    let gram = m.transpose().matmul(m)?;
    let values = symmetric_eigenvalues(&gram, tol)?;
    let sigma = |k: usize| values.get(k).map_or(0.0, |&x| x.max(0.0).sqrt());
    Ok(SingularPair { sigma1: sigma(0), sigma2: sigma(1) })
}
