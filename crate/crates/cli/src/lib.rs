//! Command implementations behind the `submax` binary: instance solving,
//! query-scaling benchmarks, and statistical verification suites. The binary
//! is a thin argument-parsing shell over these functions so integration
//! tests can drive them directly.

pub mod report;
pub mod scaling;
pub mod suites;

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

use submax::opt::{maximize, MaximizeConfig};
use submax::rounding::BoostConfig;
use submax::{Counted, CountedValue, MatroidInstance, QueryLedger, SubmodularInstance};

/// Environment variable overriding the boosted rounding's budget constant.
pub const ENV_BUDGET_CONSTANT: &str = "SUBMAX_BUDGET_CONSTANT";
/// Environment variable overriding the marginal-estimation sample count.
pub const ENV_SAMPLES_PER_ESTIMATE: &str = "SUBMAX_SAMPLES_PER_ESTIMATE";

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or structurally broken input (exit code 2).
    #[error("{0}")]
    Malformed(String),
    /// Well-formed input that cannot be run (exit code 3).
    #[error("{0}")]
    Infeasible(String),
    /// A verification suite ran and failed (exit code 1).
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))
}

/// Config errors (bad epsilon and friends) are infeasible, not malformed.
fn infeasible(e: submax::Error) -> CliError {
    CliError::Infeasible(e.to_string())
}

fn malformed(e: submax::Error) -> CliError {
    CliError::Malformed(e.to_string())
}

/// Reads the environment overrides into a pipeline config.
pub fn config_from_env() -> CliResult<MaximizeConfig> {
    let mut config = MaximizeConfig::default();
    if let Ok(raw) = std::env::var(ENV_BUDGET_CONSTANT) {
        let c: f64 = raw.parse().map_err(|_| {
            CliError::Infeasible(format!("{ENV_BUDGET_CONSTANT}={raw} is not a number"))
        })?;
        if c.is_nan() || c < 0.0 {
            return Err(CliError::Infeasible(format!(
                "{ENV_BUDGET_CONSTANT} must be non-negative"
            )));
        }
        config.boost = BoostConfig { budget_constant: c };
    }
    if let Ok(raw) = std::env::var(ENV_SAMPLES_PER_ESTIMATE) {
        let s: usize = raw.parse().map_err(|_| {
            CliError::Infeasible(format!("{ENV_SAMPLES_PER_ESTIMATE}={raw} is not a count"))
        })?;
        if s == 0 {
            return Err(CliError::Infeasible(format!(
                "{ENV_SAMPLES_PER_ESTIMATE} must be positive"
            )));
        }
        config.samples_per_estimate = Some(s);
    }
    Ok(config)
}

/// Loads instances, runs the maximization pipeline, and writes the report.
pub fn cmd_solve(
    matroid_path: &Path,
    objective_path: &Path,
    epsilon: f64,
    seed: u64,
    out_path: &Path,
) -> CliResult<report::SolveReport> {
    let matroid = MatroidInstance::from_json(&read_file(matroid_path)?).map_err(malformed)?;
    let objective = SubmodularInstance::from_json(&read_file(objective_path)?, {
        use submax::IndependenceOracle;
        matroid.n()
    })
    .map_err(malformed)?;

    let config = config_from_env()?;
    let ledger = QueryLedger::new();
    let m = Counted::with_ledger(matroid, Arc::clone(&ledger));
    let f = CountedValue::with_ledger(objective, Arc::clone(&ledger));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (solution, run) = maximize(&f, &m, epsilon, &config, &mut rng).map_err(infeasible)?;

    let report = report::SolveReport::new(seed, epsilon, &solution, &run);
    report.write(out_path)?;
    Ok(report)
}
