use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use submax_cli::scaling::{cmd_bench_scaling, ScalingConfig};
use submax_cli::suites::{run_suite, Suite};
use submax_cli::{cmd_solve, CliError};

/// Monotone submodular maximization under a matroid constraint, with
/// instrumented oracle-query accounting.
///
/// Environment: SUBMAX_BUDGET_CONSTANT overrides the boosted rounding's
/// query budget constant; SUBMAX_SAMPLES_PER_ESTIMATE overrides the
/// marginal-estimation sample count.
#[derive(Parser)]
#[command(name = "submax", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a matroid-constrained instance and write a JSON report.
    Solve {
        /// Matroid instance JSON path.
        #[arg(long)]
        matroid: PathBuf,
        /// Objective instance JSON path.
        #[arg(long)]
        objective: PathBuf,
        /// Accuracy parameter in (0, 1); split between relaxation and
        /// rounding.
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output report path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Benchmark rounding query counts on complete-graph graphic matroids.
    BenchScaling {
        /// Comma-separated strictly increasing ranks, e.g. 50,100,200,400.
        #[arg(
            long = "r-grid",
            value_delimiter = ',',
            default_value = "50,100,200,400"
        )]
        r_grid: Vec<usize>,
        /// Bases per combination.
        #[arg(long, default_value_t = 4)]
        t: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a statistical verification suite.
    Verify {
        /// martingale | marginals | rounding-guarantee | cycle-validity
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 20000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            matroid,
            objective,
            epsilon,
            seed,
            out,
        } => {
            let report = cmd_solve(&matroid, &objective, epsilon, seed, &out)?;
            println!(
                "solved: value {} with {} elements; report at {}",
                report.value,
                report.solution.len(),
                out.display()
            );
            Ok(())
        }
        Command::BenchScaling {
            r_grid,
            t,
            trials,
            seed,
            out,
        } => {
            let config = ScalingConfig {
                r_grid,
                t,
                trials,
                seed,
            };
            let outcome = cmd_bench_scaling(&config, &out)?;
            for (algorithm, slope) in &outcome.slopes {
                println!("slope {} {slope:.4}", algorithm.name());
            }
            for (algorithm, med) in &outcome.medians_at_max_r {
                println!(
                    "median_queries r={} {} {med:.1}",
                    config.r_grid.last().expect("validated"),
                    algorithm.name()
                );
            }
            println!("records at {}", out.display());
            Ok(())
        }
        Command::Verify {
            suite,
            trials,
            seed,
        } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, trials, seed)?;
            print!("{}", report.render());
            if report.pass() {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!(
                    "suite {} failed",
                    suite.name()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
