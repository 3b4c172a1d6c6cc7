//! Tilted stochastic matrices.
//!
//! The `u`-tilt of a non-negative matrix `A` is `D⁻¹(Au) A D(u)`: scale the
//! columns by `u`, then renormalize the rows. This crate builds tilts,
//! factors products `∏ Aᵢ D(uᵢ)` into a diagonal times a stochastic matrix,
//! computes stationary distributions of tilted reversible chains in closed
//! form, and evaluates upper bounds on the second eigenvalue modulus of
//! tilted and reversible products.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod harness;
pub mod io;
pub mod matrix;
pub mod random;
pub mod reversible;
pub mod spectral;
pub mod structure;
pub mod tilt;

pub use error::{Error, Result};
pub use matrix::{validate_stochastic, DenseMatrix, PositiveVector, StochasticMatrix};
pub use reversible::{ProbabilityVector, ReversibleChain};
pub use structure::ZeroPattern;
pub use tilt::{TiltDetection, TiltFactorization};
