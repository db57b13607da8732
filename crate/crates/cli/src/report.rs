//! Machine-readable solve reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use submax::opt::MaximizeReport;
use submax::{ElementSet, PhaseCounts};

use crate::{CliError, CliResult};

pub const SOLVE_SCHEMA: &str = "solve-report/v1";

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema: &'static str,
    pub seed: u64,
    pub epsilon: f64,
    pub solution: Vec<usize>,
    pub value: f64,
    pub queries: QueriesReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct QueriesReport {
    pub phases: BTreeMap<String, PhaseCounts>,
    pub total: PhaseCounts,
}

impl SolveReport {
    pub fn new(seed: u64, epsilon: f64, solution: &ElementSet, run: &MaximizeReport) -> Self {
        SolveReport {
            schema: SOLVE_SCHEMA,
            seed,
            epsilon,
            solution: solution.to_vec(),
            value: run.value,
            queries: QueriesReport {
                phases: run.phases.clone(),
                total: run.totals,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", path.display())))
    }
}
