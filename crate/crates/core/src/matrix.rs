//! Dense row-major matrices, strictly positive vectors and certified
//! (rectangular) stochastic matrices.

use std::fmt;
use std::ops::{Deref, Index};

use crate::error::{Error, Result};

/// A dense real matrix stored row-major.
///
/// Every entry is finite and both dimensions are at least one.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of rows; ragged input is rejected.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.row_iter().map(|r| r.iter().sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `M x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self.row_iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }

    /// `yᵀ M` for a row vector `y`.
    pub fn vec_mul(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", y.len(), self.rows)));
        }
        let mut out = vec![0.0; self.cols];
        for (r, &w) in self.row_iter().zip(y) {
            for (o, &a) in out.iter_mut().zip(r) {
                *o += w * a;
            }
        }
        Ok(out)
    }

    /// `D(left) · M · D(right)`; either side may be omitted.
    pub fn scale(&self, left: Option<&[f64]>, right: Option<&[f64]>) -> Result<Self> {
        if let Some(l) = left {
            if l.len() != self.rows {
                return Err(Error::Dimension(format!(
                    "left diagonal of length {} against {} rows",
                    l.len(),
                    self.rows
                )));
            }
        }
        if let Some(r) = right {
            if r.len() != self.cols {
                return Err(Error::Dimension(format!(
                    "right diagonal of length {} against {} columns",
                    r.len(),
                    self.cols
                )));
            }
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let row = out.row_mut(i);
            if let Some(l) = left {
                row.iter_mut().for_each(|x| *x *= l[i]);
            }
            if let Some(r) = right {
                row.iter_mut().zip(r).for_each(|(x, s)| *x *= s);
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "cannot compare {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest `|M[i,j] - M[j,i]|`; infinite for non-square input.
    pub fn asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.row_iter() {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

/// A vector whose components are all finite and strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveVector(Vec<f64>);

impl PositiveVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension("empty vector".into()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value <= 0.0 {
                return Err(Error::NotPositive { index, value });
            }
        }
        Ok(Self(values))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::MAX, f64::min)
    }

    /// `max / min`, which is at least 1.
    pub fn spread(&self) -> f64 {
        self.max() / self.min()
    }

    /// Rescaled so that the largest component is exactly 1.
    pub fn max_normalized(&self) -> Self {
        let m = self.max();
        Self(self.0.iter().map(|x| x / m).collect())
    }
}

impl Deref for PositiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A matrix certified to be (rectangular) row-stochastic.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    matrix: DenseMatrix,
    tol: f64,
}

impl StochasticMatrix {
    /// Certification tolerance that was used to build this matrix.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn as_matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    /// Product of two stochastic matrices, re-certified at the looser of the
    /// two tolerances.
    pub fn compose(&self, rhs: &StochasticMatrix) -> Result<Self> {
        let product = self.matrix.matmul(&rhs.matrix)?;
        validate_stochastic(product, self.tol.max(rhs.tol))
    }

    /// `self^k`, with `k = 0` giving the identity.
    pub fn power(&self, k: usize) -> Result<Self> {
        let n = self.matrix.require_square()?;
        let mut acc = validate_stochastic(DenseMatrix::identity(n), self.tol)?;
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }
}

impl Deref for StochasticMatrix {
    type Target = DenseMatrix;

    fn deref(&self) -> &DenseMatrix {
        &self.matrix
    }
}

/// Certifies `m` as row-stochastic within `tol`.
///
/// Entries in `[-tol, 0)` are clamped to zero and every accepted row is
/// divided by its sum, so the certified matrix has row sums equal to 1 up to
/// a single rounding.
pub fn validate_stochastic(m: DenseMatrix, tol: f64) -> Result<StochasticMatrix> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut m = m;
    let cols = m.cols;
    for i in 0..m.rows {
        let row = m.row_mut(i);
        for (j, x) in row.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite { index: i * cols + j });
            }
            if *x < -tol {
                return Err(Error::NegativeEntry { row: i, col: j, value: *x });
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::RowSum { row: i, sum, tol });
        }
        row.iter_mut().for_each(|x| *x /= sum);
    }
    Ok(StochasticMatrix { matrix: m, tol })
}
