//! Tilted matrices `D⁻¹(Au) A D(u)`, the factorization of products
//! `∏ Aᵢ D(uᵢ)` into one diagonal and one stochastic factor, and detection of
//! whether two stochastic matrices are tilts of one another.

use crate::error::{Error, Result};
use crate::matrix::{validate_stochastic, DenseMatrix, PositiveVector, StochasticMatrix};
use crate::structure::support;

/// The `u`-tilted matrix of a non-negative `a`: `D⁻¹(a·u) · a · D(u)`.
///
/// Works for rectangular `a`. Entries in `[-tol, 0)` are treated as zero.
pub fn tilt(a: &DenseMatrix, u: &PositiveVector, tol: f64) -> Result<StochasticMatrix> {
    if u.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "tilt vector has length {} but matrix has {} columns",
            u.len(),
            a.cols()
        )));
    }
    let mut out = a.clone();
    for i in 0..a.rows() {
        let row = out.row_mut(i);
        let mut any_positive = false;
        for (j, x) in row.iter_mut().enumerate() {
            if *x < -tol {
                return Err(Error::NegativeEntry { row: i, col: j, value: *x });
            }
            if *x <= 0.0 {
                *x = 0.0;
            } else {
                any_positive = true;
            }
        }
        if !any_positive {
            return Err(Error::ZeroRow { row: i });
        }
        let au: f64 = row.iter().zip(u.values()).map(|(x, w)| x * w).sum();
        for (x, w) in row.iter_mut().zip(u.values()) {
            *x = *x * w / au;
        }
    }
    validate_stochastic(out, tol)
}

/// `D(y) · a · D(x)`.
pub fn rank1_sandwich(y: &PositiveVector, a: &DenseMatrix, x: &PositiveVector) -> Result<DenseMatrix> {
    a.scale(Some(y), Some(x))
}

/// Outer product `y xᵀ`.
pub fn outer(y: &[f64], x: &[f64]) -> DenseMatrix {
    let data = y.iter().flat_map(|&a| x.iter().map(move |&b| a * b)).collect();
    DenseMatrix::from_raw(y.len(), x.len(), data)
}

/// Entrywise (Hadamard) product.
pub fn hadamard(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!("hadamard of {:?} and {:?}", a.shape(), b.shape())));
    }
    let data = a.data().iter().zip(b.data()).map(|(x, y)| x * y).collect();
    Ok(DenseMatrix::from_raw(a.rows(), a.cols(), data))
}

/// `∏ Aᵢ D(uᵢ) = D(scale) · kernel`.
///
/// The diagonal factor is stored as a unit-max vector together with the
/// natural log of the factor that was divided out, so long products neither
/// overflow nor underflow.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltFactorization {
    scale: PositiveVector,
    log_scale: f64,
    kernel: StochasticMatrix,
}

impl TiltFactorization {
    /// Diagonal factor normalized to max component 1.
    pub fn unit_scale(&self) -> &PositiveVector {
        &self.scale
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Full diagonal factor `u_{1:n}`. May overflow for very long products.
    pub fn scale(&self) -> Vec<f64> {
        let c = self.log_scale.exp();
        self.scale.iter().map(|s| s * c).collect()
    }

    pub fn kernel(&self) -> &StochasticMatrix {
        &self.kernel
    }

    /// `D(u_{1:n}) · P_{1:n}`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.kernel.scale(Some(&self.scale()), None).expect("scale length matches kernel rows")
    }
}

/// Writes `∏ Aᵢ D(uᵢ)` as `D(u_{1:n}) P_{1:n}` with `P_{1:n}` stochastic.
///
/// Runs the induction directly: with `w = A_{k+1} u_{k+1}` and
/// `z = P_{1:k} w`, the diagonal becomes `u_{1:k} ∘ z` and the kernel becomes
/// `tilt(P_{1:k}, w) · tilt(A_{k+1}, u_{k+1})`.
pub fn normalize_product(factors: &[(DenseMatrix, PositiveVector)], tol: f64) -> Result<TiltFactorization> {
    let ((a1, u1), rest) =
        factors.split_first().ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
    let m = a1.require_square()?;
    for (a, _) in rest {
        if a.shape() != (m, m) {
            return Err(Error::Dimension(format!("factor is {}x{}, expected {m}x{m}", a.rows(), a.cols())));
        }
    }

    let mut kernel = tilt(a1, u1, tol)?;
    let mut scale = a1.mul_vec(u1)?;
    let mut log_scale = renormalize(&mut scale);

    for (a, u) in rest {
        let tilted = tilt(a, u, tol)?;
        let w = PositiveVector::new(a.mul_vec(u)?)?;
        let z = kernel.mul_vec(&w)?;
        let bridge = tilt(&kernel, &w, tol)?;
        kernel = bridge.compose(&tilted)?;
        scale.iter_mut().zip(&z).for_each(|(s, z)| *s *= z);
        log_scale += renormalize(&mut scale);
    }

    Ok(TiltFactorization { scale: PositiveVector::new(scale)?, log_scale, kernel })
}

/// Divides `v` by its max and returns the log of that max.
fn renormalize(v: &mut [f64]) -> f64 {
    let m = v.iter().copied().fold(0.0, f64::max);
    v.iter_mut().for_each(|x| *x /= m);
    m.ln()
}

/// Why [`tilt_detect`] found no tilting vector.
#[derive(Debug, Clone, PartialEq)]
pub enum NoTiltReason {
    /// The log-ratio matrix is not of the form `aᵢ + bⱼ`; `residual` is the
    /// worst deviation.
    NotRankOne { residual: f64 },
    /// The support does not link all rows and columns, so the column factor
    /// is not pinned down.
    Disconnected,
    /// Candidate found but `tilt(p2, u)` misses `p1` by `error`.
    RoundTrip { error: f64 },
}

impl NoTiltReason {
    pub fn code(&self) -> &'static str {
        match self {
            NoTiltReason::NotRankOne { .. } => "not-rank-one",
            NoTiltReason::Disconnected => "disconnected-support",
            NoTiltReason::RoundTrip { .. } => "round-trip",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TiltDetection {
    Found(PositiveVector),
    Absent(NoTiltReason),
}

impl TiltDetection {
    pub fn vector(&self) -> Option<&PositiveVector> {
        match self {
            TiltDetection::Found(u) => Some(u),
            TiltDetection::Absent(_) => None,
        }
    }
}

/// Looks for `u > 0` with `p1 = D⁻¹(p2 u) p2 D(u)`.
///
/// On the common support, `log(p1/p2)` must split as `aᵢ + bⱼ`; the values are
/// propagated from `a₀ = 0` across the bipartite row/column support graph and
/// then checked on every supported entry. The returned `u = exp(b)` has max
/// component 1.
pub fn tilt_detect(p1: &StochasticMatrix, p2: &StochasticMatrix, tol: f64) -> Result<TiltDetection> {
    if p1.shape() != p2.shape() {
        return Err(Error::Dimension(format!("cannot compare {:?} with {:?}", p1.shape(), p2.shape())));
    }
    let (pat1, pat2) = (support(p1), support(p2));
    if let Some((row, col)) = pat1.first_difference(&pat2) {
        return Err(Error::PatternMismatch { row, col });
    }
    let (m, n) = p1.shape();
    let log_ratio = |i: usize, j: usize| (p1.get(i, j) / p2.get(i, j)).ln();

    let mut a = vec![f64::NAN; m];
    let mut b = vec![f64::NAN; n];
    a[0] = 0.0;
    // Nodes 0..m are rows, m..m+n are columns.
    let mut stack = vec![0usize];
    while let Some(node) = stack.pop() {
        if node < m {
            let i = node;
            for j in 0..n {
                if pat2.is_positive(i, j) && b[j].is_nan() {
                    b[j] = log_ratio(i, j) - a[i];
                    stack.push(m + j);
                }
            }
        } else {
            let j = node - m;
            for i in 0..m {
                if pat2.is_positive(i, j) && a[i].is_nan() {
                    a[i] = log_ratio(i, j) - b[j];
                    stack.push(i);
                }
            }
        }
    }
    if a.iter().chain(&b).any(|x| x.is_nan()) {
        return Ok(TiltDetection::Absent(NoTiltReason::Disconnected));
    }

    let mut residual = 0.0_f64;
    for i in 0..m {
        for j in (0..n).filter(|&j| pat2.is_positive(i, j)) {
            residual = residual.max((a[i] + b[j] - log_ratio(i, j)).abs());
        }
    }
    if residual > tol {
        return Ok(TiltDetection::Absent(NoTiltReason::NotRankOne { residual }));
    }

    let top = b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let u = PositiveVector::new(b.iter().map(|x| (x - top).exp()).collect())?;
    let error = tilt(p2, &u, p2.tol().max(tol))?.max_abs_diff(p1)?;
    if error > tol {
        return Ok(TiltDetection::Absent(NoTiltReason::RoundTrip { error }));
    }
    Ok(TiltDetection::Found(u))
}
