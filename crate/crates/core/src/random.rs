//! Seeded instance generators for tests, experiments and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::matrix::{validate_stochastic, DenseMatrix, PositiveVector, StochasticMatrix};

/// Components drawn uniformly from `[1, 1 + spread]`.
pub fn positive_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, spread: f64) -> PositiveVector {
    let values = (0..dim).map(|_| 1.0 + spread * rng.gen::<f64>()).collect();
    PositiveVector::new(values).expect("components are at least 1")
}

/// Non-negative matrix with uniform `(0, 1]` entries; each entry is zeroed
/// with probability `sparsity`, but every row keeps at least one positive
/// entry.
pub fn nonnegative_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    sparsity: f64,
) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen::<f64>() >= sparsity {
                m.set(i, j, 1.0 - rng.gen::<f64>());
            }
        }
        if m.row(i).iter().all(|&x| x == 0.0) {
            let j = rng.gen_range(0..cols);
            m.set(i, j, 1.0 - rng.gen::<f64>());
        }
    }
    m
}

/// Row-normalized [`nonnegative_matrix`].
pub fn stochastic_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    sparsity: f64,
) -> StochasticMatrix {
    let m = nonnegative_matrix(rng, rows, cols, sparsity);
    let inv: Vec<f64> = m.row_sums().iter().map(|s| 1.0 / s).collect();
    let scaled = m.scale(Some(&inv), None).expect("row scaling matches");
    validate_stochastic(scaled, 1e-12).expect("rows normalized")
}

/// Irreducible periodic chain: states fall into `classes` groups visited in
/// cyclic order, so every cycle length is a multiple of `classes`.
///
/// A Hamiltonian cycle through the groups keeps it irreducible; each other
/// admissible edge is added with probability `density`.
pub fn block_cyclic_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    classes: usize,
    class_size: usize,
    density: f64,
) -> StochasticMatrix {
    let n = classes * class_size;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let class_of = |state: usize| order.iter().position(|&s| s == state).unwrap() % classes;
    let mut m = DenseMatrix::zeros(n, n);
    for k in 0..n {
        m.set(order[k], order[(k + 1) % n], 1.0 - rng.gen::<f64>());
    }
    for i in 0..n {
        for j in 0..n {
            if class_of(j) == (class_of(i) + 1) % classes && m.get(i, j) == 0.0 && rng.gen::<f64>() < density
            {
                m.set(i, j, 1.0 - rng.gen::<f64>());
            }
        }
    }
    let inv: Vec<f64> = m.row_sums().iter().map(|s| 1.0 / s).collect();
    validate_stochastic(m.scale(Some(&inv), None).expect("row scaling matches"), 1e-12)
        .expect("rows normalized")
}
