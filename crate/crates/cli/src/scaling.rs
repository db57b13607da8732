//! Query-scaling benchmark: classic versus cycle-driven swap rounding on
//! graphic matroids of complete graphs `K_{r+1}` (rank `r`, `n = r(r+1)/2`
//! elements), whose exchange digraphs are rich enough to exercise both cycle
//! search paths.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use submax::matroid::random_basis;
use submax::rounding::{fast_swap_round, swap_round, ConvexCombination};
use submax::stats::{log_log_slope, median};
use submax::{Counted, GraphicMatroid};

use crate::{CliError, CliResult};

pub const SCALING_SCHEMA: &str = "bench-scaling/v1";
pub const SCALING_COLUMNS: &str = "r,t,algorithm,trial,independence_queries,wall_time_ns";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    Classic,
    Fast,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Classic => "classic",
            Algorithm::Fast => "fast",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScalingRecord {
    pub r: usize,
    pub t: usize,
    pub algorithm: Algorithm,
    pub trial: usize,
    pub independence_queries: u64,
    pub wall_time_ns: u64,
}

#[derive(Debug, Clone)]
pub struct ScalingConfig {
    pub r_grid: Vec<usize>,
    pub t: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ScalingConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.r_grid.len() < 3 {
            return Err(CliError::Infeasible(format!(
                "r-grid has {} points; at least 3 are needed to fit a slope",
                self.r_grid.len()
            )));
        }
        if self.r_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Infeasible(
                "r-grid must be strictly increasing".into(),
            ));
        }
        if self.r_grid[0] < 2 {
            return Err(CliError::Infeasible(
                "ranks below 2 have no merge work".into(),
            ));
        }
        if self.trials == 0 {
            return Err(CliError::Infeasible(
                "at least one trial is required".into(),
            ));
        }
        if self.t == 0 {
            return Err(CliError::Infeasible(
                "at least one basis per point is required".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ScalingOutcome {
    pub records: Vec<ScalingRecord>,
    /// Fitted log-log slope per algorithm over all trial points.
    pub slopes: Vec<(Algorithm, f64)>,
    /// Median query count per algorithm at the largest grid rank.
    pub medians_at_max_r: Vec<(Algorithm, f64)>,
}

fn trial_seed(seed: u64, r: usize, trial: usize) -> u64 {
    seed.wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((trial as u64).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// One trial: draw `t` random spanning trees of `K_{r+1}` and round the same
/// equal-weight combination with both engines on fresh ledgers.
fn run_trial(
    graph: &GraphicMatroid,
    r: usize,
    t: usize,
    trial: usize,
    seed: u64,
) -> CliResult<Vec<ScalingRecord>> {
    let base_seed = trial_seed(seed, r, trial);
    let gen = Counted::new(graph);
    let mut basis_rng = ChaCha8Rng::seed_from_u64(base_seed);
    let bases: Vec<_> = (0..t)
        .map(|_| random_basis(&gen, &mut basis_rng))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Infeasible(e.to_string()))?;
    let x =
        ConvexCombination::equal_weight(bases).map_err(|e| CliError::Infeasible(e.to_string()))?;

    let mut records = Vec::with_capacity(2);
    for algorithm in [Algorithm::Classic, Algorithm::Fast] {
        let m = Counted::new(graph);
        let mut rng =
            ChaCha8Rng::seed_from_u64(base_seed ^ (algorithm as u64).wrapping_add(0xA5A5_5A5A));
        let start = Instant::now();
        let rounded = match algorithm {
            Algorithm::Classic => swap_round(&x, &m, &mut rng),
            Algorithm::Fast => fast_swap_round(&x, &m, &mut rng),
        }
        .map_err(|e| CliError::Infeasible(e.to_string()))?;
        let wall_time_ns = start.elapsed().as_nanos() as u64;
        debug_assert_eq!(rounded.len(), r);
        records.push(ScalingRecord {
            r,
            t,
            algorithm,
            trial,
            independence_queries: m.ledger().independence_queries(),
            wall_time_ns,
        });
    }
    Ok(records)
}

/// Runs the whole grid; trials are independent and run on a worker pool,
/// with per-trial seeds derived from the base seed so the records are
/// reproducible regardless of scheduling.
pub fn run_scaling(config: &ScalingConfig) -> CliResult<ScalingOutcome> {
    config.validate()?;
    let points: Vec<(usize, usize)> = config
        .r_grid
        .iter()
        .flat_map(|&r| (0..config.trials).map(move |trial| (r, trial)))
        .collect();

    let graphs: Vec<(usize, GraphicMatroid)> = config
        .r_grid
        .iter()
        .map(|&r| {
            GraphicMatroid::complete(r + 1)
                .map(|g| (r, g))
                .map_err(|e| CliError::Infeasible(e.to_string()))
        })
        .collect::<CliResult<_>>()?;

    let nested: Vec<Vec<ScalingRecord>> = points
        .par_iter()
        .map(|&(r, trial)| {
            let graph = &graphs.iter().find(|(gr, _)| *gr == r).expect("grid rank").1;
            run_trial(graph, r, config.t, trial, config.seed)
        })
        .collect::<CliResult<_>>()?;

    let mut records: Vec<ScalingRecord> = nested.into_iter().flatten().collect();
    records.sort_by_key(|rec| (rec.r, rec.algorithm, rec.trial));

    let max_r = *config.r_grid.last().expect("validated nonempty");
    let mut slopes = Vec::new();
    let mut medians_at_max_r = Vec::new();
    for algorithm in [Algorithm::Classic, Algorithm::Fast] {
        let points: Vec<(f64, f64)> = records
            .iter()
            .filter(|rec| rec.algorithm == algorithm && rec.independence_queries > 0)
            .map(|rec| (rec.r as f64, rec.independence_queries as f64))
            .collect();
        if points.len() >= 2 {
            slopes.push((algorithm, log_log_slope(&points)));
        }
        let at_max: Vec<f64> = records
            .iter()
            .filter(|rec| rec.algorithm == algorithm && rec.r == max_r)
            .map(|rec| rec.independence_queries as f64)
            .collect();
        medians_at_max_r.push((algorithm, median(&at_max)));
    }

    Ok(ScalingOutcome {
        records,
        slopes,
        medians_at_max_r,
    })
}

/// Writes the schema line, the header, one row per record, and the fitted
/// slope summary as trailing comment lines.
pub fn write_csv(outcome: &ScalingOutcome, max_r: usize, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "# schema {SCALING_SCHEMA}")?;
    writeln!(w, "{SCALING_COLUMNS}")?;
    for rec in &outcome.records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            rec.r,
            rec.t,
            rec.algorithm.name(),
            rec.trial,
            rec.independence_queries,
            rec.wall_time_ns
        )?;
    }
    for (algorithm, slope) in &outcome.slopes {
        writeln!(w, "# slope {} {slope:.6}", algorithm.name())?;
    }
    for (algorithm, med) in &outcome.medians_at_max_r {
        writeln!(
            w,
            "# median_queries r={max_r} {} {med:.1}",
            algorithm.name()
        )?;
    }
    Ok(())
}

pub fn cmd_bench_scaling(config: &ScalingConfig, out_path: &Path) -> CliResult<ScalingOutcome> {
    let outcome = run_scaling(config)?;
    let file = std::fs::File::create(out_path)
        .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", out_path.display())))?;
    let max_r = *config.r_grid.last().expect("validated nonempty");
    write_csv(&outcome, max_r, std::io::BufWriter::new(file))
        .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", out_path.display())))?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        let mut cfg = ScalingConfig {
            r_grid: vec![4, 8],
            t: 2,
            trials: 1,
            seed: 0,
        };
        assert!(cfg.validate().is_err());
        cfg.r_grid = vec![4, 8, 8];
        assert!(cfg.validate().is_err());
        cfg.r_grid = vec![4, 8, 16];
        assert!(cfg.validate().is_ok());
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn single_basis_point_has_no_merge_work() {
        let cfg = ScalingConfig {
            r_grid: vec![3, 4, 5],
            t: 1,
            trials: 2,
            seed: 11,
        };
        let outcome = run_scaling(&cfg).unwrap();
        assert!(outcome.records.iter().all(|r| r.independence_queries == 0));
        assert!(outcome.slopes.is_empty());
    }

    #[test]
    fn records_are_deterministic_in_queries() {
        let cfg = ScalingConfig {
            r_grid: vec![4, 6, 8],
            t: 3,
            trials: 2,
            seed: 5,
        };
        let a = run_scaling(&cfg).unwrap();
        let b = run_scaling(&cfg).unwrap();
        let qa: Vec<u64> = a.records.iter().map(|r| r.independence_queries).collect();
        let qb: Vec<u64> = b.records.iter().map(|r| r.independence_queries).collect();
        assert_eq!(qa, qb);
        assert_eq!(a.records.len(), 3 * 2 * 2);
        assert!(qa.iter().any(|&q| q > 0));
    }
}
