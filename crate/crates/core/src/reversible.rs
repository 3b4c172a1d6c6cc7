//! Stationary distributions, detailed balance and the closed forms for the
//! stationary distributions of tilted reversible chains.

use std::ops::Deref;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{validate_stochastic, DenseMatrix, PositiveVector, StochasticMatrix};
use crate::spectral::{general_spectrum, Spectrum};
use crate::structure::is_irreducible;
use crate::tilt::tilt;

/// Default absolute tolerance on the detailed-balance defect.
pub const REVERSIBILITY_TOL: f64 = 1e-9;

/// Tolerance for the internal checks on closed-form stationary vectors.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

/// Spectrum check for two-tilt products: imaginary parts and negative real
/// parts up to this size are attributed to rounding.
pub const SPECTRUM_TOL: f64 = 1e-9;

const PROBABILITY_SUM_TOL: f64 = 1e-12;
const POWER_ITERATION_CAP: usize = 200_000;

/// Non-negative vector summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_weights(&values)?;
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidArgument(format!("probability vector sums to {sum}")));
        }
        Ok(Self(values))
    }

    /// Divides non-negative weights by their sum.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        let sum: f64 = weights.iter().sum();
        if sum.is_nan() || sum <= 0.0 {
            return Err(Error::InvalidArgument("weights sum to zero".into()));
        }
        Ok(Self(weights.into_iter().map(|w| w / sum).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    /// `‖self - other‖_∞`.
    pub fn distance(&self, other: &ProbabilityVector) -> f64 {
        self.0.iter().zip(&other.0).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    fn require_positive(&self) -> Result<()> {
        match self.0.iter().position(|&x| x <= 0.0) {
            Some(index) => Err(Error::ZeroStationary { index }),
            None => Ok(()),
        }
    }
}

fn check_weights(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Dimension("empty vector".into()));
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value < 0.0 {
            return Err(Error::InvalidArgument(format!("component {index} = {value} is negative")));
        }
    }
    Ok(())
}

impl Deref for ProbabilityVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A square stochastic kernel with a stationary distribution under which it
/// satisfies detailed balance.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleChain {
    kernel: StochasticMatrix,
    stationary: ProbabilityVector,
    defect: f64,
}

impl ReversibleChain {
    /// Computes the stationary distribution of an irreducible `kernel` and
    /// certifies detailed balance within `tol`.
    pub fn new(kernel: StochasticMatrix, tol: f64) -> Result<Self> {
        let mu = stationary_distribution(&kernel, CLOSED_FORM_TOL)?;
        Self::with_stationary(kernel, mu, tol)
    }

    /// Certifies a supplied stationary distribution: both the stationarity
    /// residual and the detailed-balance defect must be within `tol`.
    pub fn with_stationary(
        kernel: StochasticMatrix,
        stationary: ProbabilityVector,
        tol: f64,
    ) -> Result<Self> {
        kernel.require_square()?;
        let residual = stationary_residual(&kernel, &stationary)?;
        if residual > tol {
            return Err(Error::StationaryResidual { residual, tol });
        }
        let defect = reversibility_defect(&kernel, &stationary)?;
        if defect > tol {
            return Err(Error::NotReversible { defect, tol });
        }
        Ok(Self { kernel, stationary, defect })
    }

    pub fn kernel(&self) -> &StochasticMatrix {
        &self.kernel
    }

    pub fn stationary(&self) -> &ProbabilityVector {
        &self.stationary
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn states(&self) -> usize {
        self.kernel.rows()
    }

    fn require_dim(&self, u: &PositiveVector) -> Result<()> {
        if u.len() != self.states() {
            return Err(Error::Dimension(format!(
                "vector of length {} for a chain on {} states",
                u.len(),
                self.states()
            )));
        }
        Ok(())
    }
}

/// `‖μᵀP - μᵀ‖_∞`.
pub fn stationary_residual(p: &DenseMatrix, mu: &[f64]) -> Result<f64> {
    let left = p.vec_mul(mu)?;
    Ok(left.iter().zip(mu).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}

/// Unique stationary distribution of an irreducible chain.
///
/// Solves `(Pᵀ - I) μ = 0` with the last equation replaced by `Σμ = 1` using
/// partially pivoted elimination. Falls back to power iteration on the lazy
/// chain `(P + I) / 2` when the elimination meets a tiny pivot.
pub fn stationary_distribution(p: &StochasticMatrix, tol: f64) -> Result<ProbabilityVector> {
    let n = p.require_square()?;
    if !is_irreducible(p)? {
        return Err(Error::NotIrreducible);
    }
    let mut system = p.transpose();
    for i in 0..n {
        system.set(i, i, system.get(i, i) - 1.0);
    }
    system.row_mut(n - 1).fill(1.0);
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;

    let direct = solve(system, rhs).and_then(|x| finish(p, x, tol));
    if let Some(mu) = direct {
        return Ok(mu);
    }
    power_iteration(p, tol)
}

fn finish(p: &StochasticMatrix, mut x: Vec<f64>, tol: f64) -> Option<ProbabilityVector> {
    x.iter_mut().for_each(|v| *v = v.max(0.0));
    let mu = ProbabilityVector::from_weights(x).ok()?;
    (stationary_residual(p, &mu).ok()? <= tol).then_some(mu)
}

fn power_iteration(p: &StochasticMatrix, tol: f64) -> Result<ProbabilityVector> {
    let n = p.rows();
    let mut mu = vec![1.0 / n as f64; n];
    for _ in 0..POWER_ITERATION_CAP {
        let step = p.vec_mul(&mu)?;
        let next: Vec<f64> = step.iter().zip(&mu).map(|(a, b)| 0.5 * (a + b)).collect();
        mu = next;
        let residual = stationary_residual(p, &mu)?;
        if residual <= tol {
            return ProbabilityVector::from_weights(mu);
        }
    }
    Err(Error::Convergence {
        method: "stationary power iteration",
        detail: format!("residual above {tol} after {POWER_ITERATION_CAP} steps"),
    })
}

/// Gaussian elimination with partial pivoting; `None` on a pivot below
/// `1e-12` relative to the largest entry.
fn solve(mut a: DenseMatrix, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.rows();
    let floor = 1e-12 * a.max_abs();
    for k in 0..n {
        let pivot_row = (k..n).max_by(|&i, &j| a.get(i, k).abs().total_cmp(&a.get(j, k).abs()))?;
        if a.get(pivot_row, k).abs() <= floor {
            return None;
        }
        if pivot_row != k {
            for j in 0..n {
                let t = a.get(k, j);
                a.set(k, j, a.get(pivot_row, j));
                a.set(pivot_row, j, t);
            }
            b.swap(k, pivot_row);
        }
        let pivot = a.get(k, k);
        for i in k + 1..n {
            let factor = a.get(i, k) / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                a.set(i, j, a.get(i, j) - factor * a.get(k, j));
            }
            b[i] -= factor * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let tail: f64 = (k + 1..n).map(|j| a.get(k, j) * x[j]).sum();
        x[k] = (b[k] - tail) / a.get(k, k);
    }
    Some(x)
}

/// `max_{i,j} |μᵢ Pᵢⱼ - μⱼ Pⱼᵢ|`.
pub fn reversibility_defect(p: &DenseMatrix, mu: &[f64]) -> Result<f64> {
    let n = p.require_square()?;
    if mu.len() != n {
        return Err(Error::Dimension(format!("distribution of length {} for {n} states", mu.len())));
    }
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((mu[i] * p.get(i, j) - mu[j] * p.get(j, i)).abs());
        }
    }
    Ok(worst)
}

/// Time reversal `D⁻¹(μ) Pᵀ D(μ)`; stochastic whenever `μ` is stationary.
pub fn time_reversal(p: &DenseMatrix, mu: &ProbabilityVector) -> Result<DenseMatrix> {
    p.require_square()?;
    mu.require_positive()?;
    let inv: Vec<f64> = mu.iter().map(|m| 1.0 / m).collect();
    p.transpose().scale(Some(&inv), Some(mu))
}

/// The `u`-tilt of a reversible chain, which is again reversible with
/// stationary distribution proportional to `u ∘ Pu ∘ μ_P`.
pub fn tilted_stationary(chain: &ReversibleChain, u: &PositiveVector) -> Result<ReversibleChain> {
    chain.require_dim(u)?;
    let p = chain.kernel();
    let tilted = tilt(p, u, p.tol())?;
    let pu = p.mul_vec(u)?;
    let weights = u.iter().zip(&pu).zip(chain.stationary().iter()).map(|((a, b), c)| a * b * c).collect();
    let mu = ProbabilityVector::from_weights(weights)?;
    ReversibleChain::with_stationary(tilted, mu, CLOSED_FORM_TOL)
}

/// Result of [`two_tilt_product`].
#[derive(Debug, Clone)]
pub struct TwoTiltProduct {
    pub chain: ReversibleChain,
    pub spectrum: Spectrum,
}

/// `W = tilt(P, u) · tilt(P, v)` with its closed-form stationary distribution
/// `∝ Pu ∘ μ_P ∘ v`. `W` is similar to a positive semi-definite matrix, so its
/// spectrum is checked to be real and non-negative up to [`SPECTRUM_TOL`].
pub fn two_tilt_product(
    chain: &ReversibleChain,
    u: &PositiveVector,
    v: &PositiveVector,
) -> Result<TwoTiltProduct> {
    chain.require_dim(u)?;
    chain.require_dim(v)?;
    let p = chain.kernel();
    let w = tilt(p, u, p.tol())?.compose(&tilt(p, v, p.tol())?)?;
    let pu = p.mul_vec(u)?;
    let weights =
        pu.iter().zip(chain.stationary().iter()).zip(v.iter()).map(|((a, b), c)| a * b * c).collect();
    let mu = ProbabilityVector::from_weights(weights)?;
    let spectrum = general_spectrum(&w)?;
    let max_imag = spectrum.max_imaginary();
    let min_real = spectrum.min_real();
    if max_imag > SPECTRUM_TOL || min_real < -SPECTRUM_TOL {
        return Err(Error::SpectrumNotPositive { max_imag, min_real });
    }
    Ok(TwoTiltProduct { chain: ReversibleChain::with_stationary(w, mu, CLOSED_FORM_TOL)?, spectrum })
}

/// `S = D^{1/2}(μ) P D^{-1/2}(μ)`, symmetric for a reversible chain and
/// similar to its kernel.
pub fn symmetrize(chain: &ReversibleChain) -> Result<DenseMatrix> {
    chain.stationary().require_positive()?;
    let root: Vec<f64> = chain.stationary().iter().map(|m| m.sqrt()).collect();
    let inv_root: Vec<f64> = root.iter().map(|r| 1.0 / r).collect();
    chain.kernel().scale(Some(&root), Some(&inv_root))
}

/// Random reversible chain from a symmetric weight matrix.
///
/// Weights are uniform on `(0, 1]`, symmetrized by averaging. Off-diagonal
/// weights below the `sparsity` quantile are zeroed except on a random
/// spanning tree, which keeps the chain irreducible; the diagonal stays
/// positive, which keeps it aperiodic. `P = D⁻¹(W1) W` and `μ ∝ W1`.
pub fn random_reversible(m: usize, seed: u64, sparsity: f64) -> Result<ReversibleChain> {
    if m == 0 {
        return Err(Error::InvalidArgument("chain needs at least one state".into()));
    }
    if !(0.0..1.0).contains(&sparsity) {
        return Err(Error::InvalidArgument(format!("sparsity must lie in [0, 1), got {sparsity}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..m * m).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let mut w = DenseMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            w.set(i, j, 0.5 * (raw[i * m + j] + raw[j * m + i]));
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let mut keep = vec![false; m * m];
    for k in 1..m {
        let parent = order[rng.gen_range(0..k)];
        let child = order[k];
        keep[child * m + parent] = true;
        keep[parent * m + child] = true;
    }

    let mut upper: Vec<f64> =
        (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).map(|(i, j)| w.get(i, j)).collect();
    if !upper.is_empty() {
        upper.sort_by(f64::total_cmp);
        let threshold = upper[((sparsity * upper.len() as f64) as usize).min(upper.len() - 1)];
        for i in 0..m {
            for j in i + 1..m {
                if w.get(i, j) < threshold && !keep[i * m + j] {
                    w.set(i, j, 0.0);
                    w.set(j, i, 0.0);
                }
            }
        }
    }

    let degree = w.row_sums();
    let inv: Vec<f64> = degree.iter().map(|d| 1.0 / d).collect();
    let kernel = validate_stochastic(w.scale(Some(&inv), None)?, 1e-12)?;
    let mu = ProbabilityVector::from_weights(degree)?;
    ReversibleChain::with_stationary(kernel, mu, 1e-12)
}
