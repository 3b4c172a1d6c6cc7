//! Zero-pattern analysis: irreducibility and aperiodicity depend only on
//! where a square non-negative matrix has positive entries.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, StochasticMatrix};

/// Entries at or below `PATTERN_RELATIVE_THRESHOLD * max|entry|` count as zero.
pub const PATTERN_RELATIVE_THRESHOLD: f64 = 1e-14;

/// Boolean support mask of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPattern {
    rows: usize,
    cols: usize,
    mask: Vec<bool>,
}

impl ZeroPattern {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_positive(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.cols + j]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// First position where the two masks disagree.
    pub fn first_difference(&self, other: &ZeroPattern) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        self.mask.iter().zip(&other.mask).position(|(a, b)| a != b).map(|k| (k / self.cols, k % self.cols))
    }

    fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.cols).filter(move |&j| self.is_positive(i, j))
    }

    fn predecessors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rows).filter(move |&i| self.is_positive(i, j))
    }

    /// Strong connectivity of the support digraph: every state is reachable
    /// from state 0 and reaches state 0.
    pub fn is_strongly_connected(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let forward = reach(self.rows, |i| self.successors(i).collect());
        if forward.iter().any(|r| !r) {
            return Ok(false);
        }
        let backward = reach(self.rows, |j| self.predecessors(j).collect());
        Ok(backward.iter().all(|&r| r))
    }

    /// Period of an irreducible support digraph: the gcd of all cycle lengths.
    pub fn period(&self) -> Result<usize> {
        if !self.is_strongly_connected()? {
            return Err(Error::NotIrreducible);
        }
        let n = self.rows;
        let mut level = vec![usize::MAX; n];
        level[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in self.successors(i) {
                if level[j] == usize::MAX {
                    level[j] = level[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        // Every edge i -> j closes a walk of length level[i] + 1 - level[j]
        // relative to the BFS tree; the gcd of these is the period.
        let mut g = 0usize;
        for i in 0..n {
            for j in self.successors(i) {
                let d = (level[i] + 1).abs_diff(level[j]);
                g = gcd(g, d);
            }
        }
        Ok(g)
    }
}

fn reach(n: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for j in next(i) {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `mask[i,j] = M[i,j] > threshold`.
pub fn zero_pattern(m: &DenseMatrix, threshold: f64) -> ZeroPattern {
    ZeroPattern { rows: m.rows(), cols: m.cols(), mask: m.data().iter().map(|&x| x > threshold).collect() }
}

/// Zero pattern with the scale-relative cutoff used for structural questions.
pub fn support(m: &DenseMatrix) -> ZeroPattern {
    zero_pattern(m, PATTERN_RELATIVE_THRESHOLD * m.max_abs())
}

pub fn is_irreducible(p: &StochasticMatrix) -> Result<bool> {
    support(p).is_strongly_connected()
}

/// Aperiodicity of an irreducible chain; reducible input is an error.
pub fn is_aperiodic(p: &StochasticMatrix) -> Result<bool> {
    Ok(support(p).period()? == 1)
}
