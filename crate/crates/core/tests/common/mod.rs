#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tilted::matrix::DenseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.to_vec()).collect()
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn max_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn normalized(w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

// D⁻¹(Au) A D(u), entry by entry.
pub fn oracle_tilt(a: &[Vec<f64>], u: &[f64]) -> Vec<Vec<f64>> {
    a.iter()
        .map(|row| {
            let total: f64 = row.iter().zip(u).map(|(x, y)| x * y).sum();
            row.iter().zip(u).map(|(x, y)| x * y / total).collect()
        })
        .collect()
}

pub fn oracle_defect(p: &[Vec<f64>], mu: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..p.len() {
        for j in 0..p.len() {
            worst = worst.max((mu[i] * p[i][j] - mu[j] * p[j][i]).abs());
        }
    }
    worst
}
