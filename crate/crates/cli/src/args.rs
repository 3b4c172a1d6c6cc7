use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tilted", version, about = "Tilted stochastic matrices from the command line")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Numerical tolerance (must be positive)
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Write results here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tilt a non-negative matrix by a positive vector
    Tilt {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Factor a product of A_i D(u_i) into a diagonal times a stochastic matrix
    NormalizeProduct {
        /// Factor matrices, in product order
        #[arg(long = "matrix", required = true)]
        matrices: Vec<PathBuf>,
        /// One vector per matrix
        #[arg(long = "vector", required = true)]
        vectors: Vec<PathBuf>,
    },
    /// Stationary distribution of an irreducible stochastic matrix
    Stationary {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Detailed-balance defect under the stationary distribution
    CheckReversible {
        #[arg(long)]
        matrix: PathBuf,
        /// Use this distribution instead of solving for it
        #[arg(long)]
        stationary: Option<PathBuf>,
    },
    /// Eigenvalues and second-eigenvalue modulus
    Spectral {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Evaluate a second-eigenvalue bound against the observed value
    Bounds {
        #[arg(long, value_enum)]
        kind: BoundKind,
        /// Reversible chains; `pair` takes two, `chain` one or more
        #[arg(long = "matrix", required = true)]
        matrices: Vec<PathBuf>,
        /// Tilting vectors; `tilted` takes one, `main` one or more
        #[arg(long = "vector")]
        vectors: Vec<PathBuf>,
    },
    /// Look for u with P1 = tilt(P2, u)
    TiltDetect {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        against: PathBuf,
    },
    /// Distance of tilted products from rank one, step by step
    Converge {
        #[arg(long)]
        matrix: PathBuf,
        /// Explicit tilting schedule; the last vector repeats
        #[arg(long = "vector")]
        vectors: Vec<PathBuf>,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Random schedule u_i = 1 + spread * decay^i * U(0,1), used when no vectors are given
        #[arg(long, default_value_t = 0.0)]
        spread: f64,
        #[arg(long, default_value_t = 0.5)]
        decay: f64,
    },
    /// Randomized scan of products of many tilts
    ConjectureScan {
        #[arg(long, default_value_t = 2)]
        m_min: usize,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Tilting vector components are drawn from [1, 1 + spread]
        #[arg(long, default_value_t = 2.0)]
        spread: f64,
    },
    /// Generate a random instance
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Rows, or states for square kinds
        #[arg(long, default_value_t = 4)]
        rows: usize,
        /// Columns for rectangular kinds (defaults to rows)
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        sparsity: f64,
        /// Vector components are drawn from [1, 1 + spread]
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
        /// Number of cyclic classes for `periodic`; must divide the state count
        #[arg(long, default_value_t = 2)]
        classes: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    Tilted,
    Pair,
    Chain,
    Main,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Reversible,
    Stochastic,
    Nonnegative,
    Periodic,
    Vector,
}
