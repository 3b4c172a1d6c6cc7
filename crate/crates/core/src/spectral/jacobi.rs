use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

const MAX_SWEEPS: usize = 100;

/// All eigenvalues of a symmetric matrix, sorted descending.
///
/// Cyclic Jacobi: each sweep rotates away every off-diagonal pair in row
/// order. Iteration stops once the off-diagonal Frobenius norm is at most
/// `tol · ‖S‖_F`.
pub fn symmetric_eigenvalues(s: &DenseMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = s.require_square()?;
    let asymmetry = s.asymmetry();
    if asymmetry > tol * s.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry, tol });
    }
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (s.get(i, j) + s.get(j, i));
        }
    }
    let mut values = jacobi_in_place(&mut a, n, tol)?;
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sum.sqrt()
}

pub(crate) fn jacobi_in_place(a: &mut [f64], n: usize, tol: f64) -> Result<Vec<f64>> {
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = tol * scale;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a, n) <= target {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                // Negligible against both diagonal entries: drop it.
                if (100.0 * apq).abs() <= f64::EPSILON * app.abs().min(aqq.abs()) {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
            }
        }
    }
    Err(Error::Convergence {
        method: "cyclic Jacobi",
        detail: format!("off-diagonal norm above {target} after {MAX_SWEEPS} sweeps"),
    })
}
