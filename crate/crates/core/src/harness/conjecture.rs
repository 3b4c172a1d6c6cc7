use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::format_number;
use crate::matrix::PositiveVector;
use crate::random::positive_vector;
use crate::reversible::{
    random_reversible, reversibility_defect, stationary_distribution, ProbabilityVector,
};
use crate::tilt::tilt;

/// Label attached to every scan report: the candidate stationary form is a
/// hypothesis extrapolated from the one- and two-factor cases.
pub const CANDIDATE_LABEL: &str = "hypothesis: mu ~ (P u_1) * mu_P * u_n";

/// Sparsity of the random base chains drawn by the scan.
pub const SCAN_SPARSITY: f64 = 0.3;

const STATIONARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureTrial {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    /// Detailed-balance defect of the product under its own stationary vector.
    pub defect: f64,
    /// `‖μ - candidate‖_∞`.
    pub candidate_residual: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed mixed from the scan seed and the trial coordinates.
pub fn trial_seed(base_seed: u64, m: usize, n: usize, trial: usize) -> u64 {
    [m as u64, n as u64, trial as u64].iter().fold(splitmix64(base_seed), |h, &x| splitmix64(h ^ x))
}

/// One trial: a random reversible `P`, vectors `u_1..u_n`, and the product
/// `∏ tilt(P, uᵢ)` checked for detailed balance and against the candidate
/// stationary form.
pub fn run_trial(m: usize, n: usize, seed: u64, u_spread: f64) -> Result<ConjectureTrial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chain = random_reversible(m, rng.gen(), SCAN_SPARSITY)?;
    let p = chain.kernel();
    let us: Vec<PositiveVector> = (0..n).map(|_| positive_vector(&mut rng, m, u_spread)).collect();

    let mut product = tilt(p, &us[0], p.tol())?;
    for u in &us[1..] {
        product = product.compose(&tilt(p, u, p.tol())?)?;
    }
    let mu = stationary_distribution(&product, STATIONARY_TOL)?;
    let defect = reversibility_defect(&product, &mu)?;

    let pu_first = p.mul_vec(&us[0])?;
    let last = &us[n - 1];
    let weights = pu_first
        .iter()
        .zip(chain.stationary().iter())
        .zip(last.iter())
        .map(|((a, b), c)| a * b * c)
        .collect();
    let candidate = ProbabilityVector::from_weights(weights)?;

    Ok(ConjectureTrial { m, n, seed, defect, candidate_residual: mu.distance(&candidate) })
}

/// Runs `trials_per_cell` trials for every `(m, n)` in the ranges. Trials run
/// in parallel; the result is ordered by `(m, n, trial)`.
pub fn conjecture_scan(
    m_range: RangeInclusive<usize>,
    n_range: RangeInclusive<usize>,
    trials_per_cell: usize,
    base_seed: u64,
    u_spread: f64,
) -> Result<Vec<ConjectureTrial>> {
    if trials_per_cell == 0 {
        return Err(Error::InvalidArgument("need at least one trial per cell".into()));
    }
    if *m_range.start() == 0 || *n_range.start() == 0 {
        return Err(Error::InvalidArgument("state and factor counts start at 1".into()));
    }
    if u_spread.is_nan() || u_spread < 0.0 || u_spread.is_infinite() {
        return Err(Error::InvalidArgument(format!("bad spread {u_spread}")));
    }
    let cells: Vec<(usize, usize, usize)> = m_range
        .flat_map(|m| n_range.clone().map(move |n| (m, n)))
        .flat_map(|(m, n)| (0..trials_per_cell).map(move |t| (m, n, t)))
        .collect();
    cells.par_iter().map(|&(m, n, t)| run_trial(m, n, trial_seed(base_seed, m, n, t), u_spread)).collect()
}

/// CSV with columns `m,n,seed,defect,candidate_residual`.
pub fn trials_to_csv(trials: &[ConjectureTrial]) -> String {
    let mut out = String::from("m,n,seed,defect,candidate_residual\n");
    for t in trials {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            t.m,
            t.n,
            t.seed,
            format_number(t.defect),
            format_number(t.candidate_residual)
        ));
    }
    out
}

#[derive(Serialize)]
struct LabeledTrial<'a> {
    #[serde(flatten)]
    trial: &'a ConjectureTrial,
    candidate: &'static str,
}

/// One JSON object per line, each carrying [`CANDIDATE_LABEL`].
pub fn trials_to_jsonl(trials: &[ConjectureTrial]) -> String {
    trials
        .iter()
        .map(|trial| {
            let mut line = serde_json::to_string(&LabeledTrial { trial, candidate: CANDIDATE_LABEL })
                .expect("trial serializes");
            line.push('\n');
            line
        })
        .collect()
}
