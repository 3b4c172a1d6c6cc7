use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use tilted::harness::{conjecture_scan, converge_demo, trials_to_csv, trials_to_jsonl};
use tilted::io::{format_matrix, format_number, format_vector, parse_matrix, parse_vector, Format};
use tilted::random::{block_cyclic_matrix, nonnegative_matrix, positive_vector, stochastic_matrix};
use tilted::reversible::{random_reversible, reversibility_defect, stationary_distribution};
use tilted::spectral::{
    check_chain, check_main, check_pair, check_tilted, general_spectrum, stochastic_spectrum, BoundReport,
};
use tilted::structure::is_irreducible;
use tilted::tilt::{normalize_product, tilt, tilt_detect, TiltDetection};
use tilted::{
    validate_stochastic, DenseMatrix, PositiveVector, ProbabilityVector, ReversibleChain, StochasticMatrix,
};

use crate::args::{BoundKind, Command, GenKind, Global, OutputFormat};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: tilted::Error },
    #[error(transparent)]
    Domain(#[from] tilted::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
            CliError::Input { source, .. } => source.code(),
            CliError::Domain(e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Ctx {
    tol: f64,
    seed: u64,
    format: Format,
}

impl Ctx {
    fn structured(&self) -> bool {
        self.format == Format::Structured
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_matrix(path: &Path) -> Result<DenseMatrix> {
    parse_matrix(&read(path)?).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

fn load_values(path: &Path) -> Result<Vec<f64>> {
    parse_vector(&read(path)?).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

fn load_positive(path: &Path) -> Result<PositiveVector> {
    Ok(PositiveVector::new(load_values(path)?)?)
}

fn load_stochastic(path: &Path, ctx: &Ctx) -> Result<StochasticMatrix> {
    Ok(validate_stochastic(load_matrix(path)?, ctx.tol)?)
}

fn load_chain(path: &Path, ctx: &Ctx) -> Result<ReversibleChain> {
    Ok(ReversibleChain::new(load_stochastic(path, ctx)?, ctx.tol)?)
}

fn json_line(value: serde_json::Value) -> String {
    let mut s = value.to_string();
    s.push('\n');
    s
}

fn csv_record(key: &str, values: &[f64]) -> String {
    let mut line = key.to_string();
    for v in values {
        line.push(',');
        line.push_str(&format_number(*v));
    }
    line.push('\n');
    line
}

/// Runs one subcommand and returns what it prints.
pub fn run(global: &Global, command: &Command) -> Result<String> {
    if !(global.tol > 0.0 && global.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", global.tol)));
    }
    let ctx = Ctx {
        tol: global.tol,
        seed: global.seed,
        format: match global.format {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Structured => Format::Structured,
        },
    };
    match command {
        Command::Tilt { matrix, vector } => {
            let a = load_matrix(matrix)?;
            let u = load_positive(vector)?;
            Ok(format_matrix(tilt(&a, &u, ctx.tol)?.as_matrix(), ctx.format))
        }
        Command::NormalizeProduct { matrices, vectors } => normalize(&ctx, matrices, vectors),
        Command::Stationary { matrix } => {
            let p = load_stochastic(matrix, &ctx)?;
            Ok(format_vector(&stationary_distribution(&p, ctx.tol)?, ctx.format))
        }
        Command::CheckReversible { matrix, stationary } => {
            check_reversible(&ctx, matrix, stationary.as_deref())
        }
        Command::Spectral { matrix } => spectral(&ctx, matrix),
        Command::Bounds { kind, matrices, vectors } => bounds(&ctx, *kind, matrices, vectors),
        Command::TiltDetect { matrix, against } => detect(&ctx, matrix, against),
        Command::Converge { matrix, vectors, steps, spread, decay } => {
            converge(&ctx, matrix, vectors, *steps, *spread, *decay)
        }
        Command::ConjectureScan { m_min, m_max, n_min, n_max, trials, spread } => {
            if m_min > m_max || n_min > n_max {
                return Err(CliError::Usage("empty state or factor range".into()));
            }
            let report = conjecture_scan(*m_min..=*m_max, *n_min..=*n_max, *trials, ctx.seed, *spread)?;
            Ok(if ctx.structured() { trials_to_jsonl(&report) } else { trials_to_csv(&report) })
        }
        Command::Gen { kind, rows, cols, sparsity, spread, classes } => {
            generate(&ctx, *kind, *rows, cols.unwrap_or(*rows), *sparsity, *spread, *classes)
        }
    }
}

fn normalize(ctx: &Ctx, matrices: &[PathBuf], vectors: &[PathBuf]) -> Result<String> {
    if matrices.len() != vectors.len() {
        return Err(CliError::Usage(format!("{} matrices but {} vectors", matrices.len(), vectors.len())));
    }
    let factors = matrices
        .iter()
        .zip(vectors)
        .map(|(m, v)| Ok((load_matrix(m)?, load_positive(v)?)))
        .collect::<Result<Vec<_>>>()?;
    let f = normalize_product(&factors, ctx.tol)?;
    if ctx.structured() {
        let k = f.kernel();
        return Ok(json_line(json!({
            "log_scale": f.log_scale(),
            "unit_scale": f.unit_scale().values(),
            "kernel": { "rows": k.rows(), "cols": k.cols(), "data": k.data() },
        })));
    }
    let mut out = csv_record("log_scale", &[f.log_scale()]);
    out.push_str(&csv_record("unit_scale", f.unit_scale()));
    for row in f.kernel().row_iter() {
        out.push_str(&csv_record("kernel", row));
    }
    Ok(out)
}

fn check_reversible(ctx: &Ctx, matrix: &Path, stationary: Option<&Path>) -> Result<String> {
    let p = load_stochastic(matrix, ctx)?;
    let mu = match stationary {
        Some(path) => ProbabilityVector::new(load_values(path)?)?,
        None => stationary_distribution(&p, ctx.tol)?,
    };
    let defect = reversibility_defect(&p, &mu)?;
    let reversible = defect <= ctx.tol;
    if ctx.structured() {
        return Ok(json_line(json!({
            "defect": defect,
            "reversible": reversible,
            "stationary": mu.values(),
        })));
    }
    Ok(format!(
        "{}reversible,{reversible}\n{}",
        csv_record("defect", &[defect]),
        csv_record("stationary", &mu)
    ))
}

fn spectral(ctx: &Ctx, matrix: &Path) -> Result<String> {
    let m = load_matrix(matrix)?;
    let (spectrum, lambda2) = match validate_stochastic(m.clone(), ctx.tol) {
        Ok(p) if p.is_square() => {
            let mu = if is_irreducible(&p)? { Some(stationary_distribution(&p, ctx.tol)?) } else { None };
            let spectrum = stochastic_spectrum(&p, mu.as_ref(), ctx.tol)?;
            let lambda2 = spectrum.second_modulus()?;
            (spectrum, Some(lambda2))
        }
        _ => (general_spectrum(&m)?, None),
    };
    if ctx.structured() {
        let eigenvalues: Vec<[f64; 2]> = spectrum.eigenvalues().iter().map(|z| [z.re, z.im]).collect();
        return Ok(json_line(json!({
            "method": spectrum.method(),
            "lambda2": lambda2,
            "eigenvalues": eigenvalues,
        })));
    }
    let method = serde_json::to_value(spectrum.method()).expect("method serializes");
    let mut out = format!("method,{}\n", method.as_str().unwrap_or_default());
    if let Some(l) = lambda2 {
        out.push_str(&csv_record("lambda2", &[l]));
    }
    for z in spectrum.eigenvalues() {
        out.push_str(&csv_record("eigenvalue", &[z.re, z.im]));
    }
    Ok(out)
}

fn bounds(ctx: &Ctx, kind: BoundKind, matrices: &[PathBuf], vectors: &[PathBuf]) -> Result<String> {
    let chains = matrices.iter().map(|m| load_chain(m, ctx)).collect::<Result<Vec<_>>>()?;
    let us = vectors.iter().map(|v| load_positive(v)).collect::<Result<Vec<_>>>()?;
    let report: BoundReport = match kind {
        BoundKind::Tilted => match (chains.as_slice(), us.as_slice()) {
            ([chain], [u]) => check_tilted(chain, u)?,
            _ => return Err(CliError::Usage("tilted bound takes one matrix and one vector".into())),
        },
        BoundKind::Pair => match chains.as_slice() {
            [a, b] if us.is_empty() => check_pair(a, b)?,
            _ => return Err(CliError::Usage("pair bound takes two matrices and no vectors".into())),
        },
        BoundKind::Chain if us.is_empty() => check_chain(&chains)?,
        BoundKind::Chain => return Err(CliError::Usage("chain bound takes no vectors".into())),
        BoundKind::Main => match chains.as_slice() {
            [chain] if !us.is_empty() => check_main(chain, &us)?,
            _ => return Err(CliError::Usage("main bound takes one matrix and at least one vector".into())),
        },
    };
    if ctx.structured() {
        return Ok(json_line(serde_json::to_value(report).expect("report serializes")));
    }
    Ok(format!(
        "{}{}satisfied,{}\n{}",
        csv_record("observed_lambda2", &[report.observed_lambda2]),
        csv_record("bound", &[report.bound_value]),
        report.satisfied,
        csv_record("slack", &[report.slack])
    ))
}

fn detect(ctx: &Ctx, matrix: &Path, against: &Path) -> Result<String> {
    let p1 = load_stochastic(matrix, ctx)?;
    let p2 = load_stochastic(against, ctx)?;
    let found = tilt_detect(&p1, &p2, ctx.tol)?;
    Ok(match (&found, ctx.structured()) {
        (TiltDetection::Found(u), true) => json_line(json!({ "found": true, "u": u.values() })),
        (TiltDetection::Absent(reason), true) => {
            json_line(json!({ "found": false, "reason": reason.code() }))
        }
        (TiltDetection::Found(u), false) => format!("found,true\n{}", csv_record("u", u)),
        (TiltDetection::Absent(reason), false) => {
            format!("found,false\nreason,{}\n", reason.code())
        }
    })
}

fn converge(
    ctx: &Ctx,
    matrix: &Path,
    vectors: &[PathBuf],
    steps: usize,
    spread: f64,
    decay: f64,
) -> Result<String> {
    let chain = load_chain(matrix, ctx)?;
    let mut schedule = vectors.iter().map(|v| load_positive(v)).collect::<Result<Vec<_>>>()?;
    if schedule.is_empty() && spread > 0.0 {
        if !(0.0..1.0).contains(&decay) {
            return Err(CliError::Usage(format!("--decay must lie in [0, 1), got {decay}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let m = chain.states();
        schedule = (0..steps)
            .map(|i| {
                let amplitude = spread * decay.powi(i as i32 + 1);
                PositiveVector::new((0..m).map(|_| 1.0 + amplitude * rng.gen::<f64>()).collect())
            })
            .collect::<tilted::Result<Vec<_>>>()?;
    }
    let report = converge_demo(&chain, &schedule, steps)?;
    if ctx.structured() {
        return Ok(json_line(serde_json::to_value(&report).expect("report serializes")));
    }
    Ok(format!(
        "# predicted_rate,{}\n# fitted_rate,{}\n{}",
        format_number(report.predicted_rate),
        format_number(report.fitted_rate),
        report.to_csv()
    ))
}

fn generate(
    ctx: &Ctx,
    kind: GenKind,
    rows: usize,
    cols: usize,
    sparsity: f64,
    spread: f64,
    classes: usize,
) -> Result<String> {
    if rows == 0 || cols == 0 {
        return Err(CliError::Usage("dimensions must be positive".into()));
    }
    if !(0.0..1.0).contains(&sparsity) {
        return Err(CliError::Usage(format!("--sparsity must lie in [0, 1), got {sparsity}")));
    }
    if !(spread >= 0.0 && spread.is_finite()) {
        return Err(CliError::Usage(format!("--spread must be non-negative, got {spread}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let matrix = match kind {
        GenKind::Reversible => random_reversible(rows, ctx.seed, sparsity)?.kernel().as_matrix().clone(),
        GenKind::Stochastic => stochastic_matrix(&mut rng, rows, cols, sparsity).into_matrix(),
        GenKind::Nonnegative => nonnegative_matrix(&mut rng, rows, cols, sparsity),
        GenKind::Periodic => {
            if classes < 2 || !rows.is_multiple_of(classes) {
                return Err(CliError::Usage(format!(
                    "--classes must be at least 2 and divide {rows}, got {classes}"
                )));
            }
            block_cyclic_matrix(&mut rng, classes, rows / classes, 1.0 - sparsity).into_matrix()
        }
        GenKind::Vector => return Ok(format_vector(&positive_vector(&mut rng, rows, spread), ctx.format)),
    };
    Ok(format_matrix(&matrix, ctx.format))
}
