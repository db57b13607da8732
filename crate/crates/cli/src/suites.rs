//! Statistical verification suites. Each suite replays one distributional
//! guarantee of the rounding engines at a configurable trial count and
//! reports per-check z-scores (3-standard-error tolerances) or exact
//! pass/fail counts.

use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use submax::fixtures::{coverage_12, k6_disjoint_tree_pair, partition_12, triangle};
use submax::matroid::random_basis;
use submax::multilinear::{multilinear_exact, FractionalPoint};
use submax::rounding::{
    fast_swap_round, find_directed_cycle, swap_round, update_with_cycle, ConvexCombination,
    ExchangeDigraphView,
};
use submax::stats::{mean, std_error, z_score};
use submax::{Counted, CountedValue, ElementSet, GraphicMatroid, QueryLedger, ValueOracle};

use crate::{CliError, CliResult};

pub const VERIFY_SCHEMA: &str = "verify-report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Martingale,
    Marginals,
    RoundingGuarantee,
    CycleValidity,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Martingale => "martingale",
            Suite::Marginals => "marginals",
            Suite::RoundingGuarantee => "rounding-guarantee",
            Suite::CycleValidity => "cycle-validity",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "martingale" => Ok(Suite::Martingale),
            "marginals" => Ok(Suite::Marginals),
            "rounding-guarantee" => Ok(Suite::RoundingGuarantee),
            "cycle-validity" => Ok(Suite::CycleValidity),
            other => Err(CliError::Malformed(format!(
                "unknown suite {other}; expected martingale|marginals|rounding-guarantee|cycle-validity"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    /// z-score for CLT checks, raw failure count for exact checks.
    pub statistic: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = format!("# schema {VERIFY_SCHEMA}\n");
        out.push_str(&format!(
            "suite {} trials {}\n",
            self.suite.name(),
            self.trials
        ));
        for check in &self.checks {
            out.push_str(&format!(
                "check {} statistic {:.4} {}\n",
                check.name,
                check.statistic,
                if check.pass { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "verdict {}\n",
            if self.pass() { "pass" } else { "FAIL" }
        ));
        out
    }
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> CliResult<SuiteReport> {
    if trials == 0 {
        return Err(CliError::Infeasible(
            "at least one trial is required".into(),
        ));
    }
    let checks = match suite {
        Suite::Martingale => martingale_checks(trials, seed),
        Suite::Marginals => marginals_checks(trials, seed),
        Suite::RoundingGuarantee => rounding_guarantee_checks(trials, seed),
        Suite::CycleValidity => cycle_validity_checks(trials, seed),
    }?;
    Ok(SuiteReport {
        suite,
        trials,
        checks,
    })
}

/// One cycle update step preserves the weighted expectation
/// `E[b1 1_{B1'} + b2 1_{B2'}] = b1 1_{B1} + b2 1_{B2}` coordinate-wise.
fn martingale_checks(trials: usize, seed: u64) -> CliResult<Vec<Check>> {
    let (graph, b1, b2) = k6_disjoint_tree_pair();
    let m = Counted::new(graph);
    let (beta1, beta2) = (0.3, 0.7);
    let n = b1.universe();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<Vec<f64>> = (0..n).map(|_| Vec::with_capacity(trials)).collect();
    for _ in 0..trials {
        let view = ExchangeDigraphView::new(&m, &b1, &b2)
            .map_err(|e| CliError::Infeasible(e.to_string()))?;
        let cycle = find_directed_cycle(&view, 2, &mut rng)
            .map_err(|e| CliError::Infeasible(e.to_string()))?;
        let (nb1, nb2) = update_with_cycle(beta1, b1.clone(), beta2, b2.clone(), &cycle, &mut rng)
            .map_err(|e| CliError::Infeasible(e.to_string()))?;
        for (v, bucket) in samples.iter_mut().enumerate() {
            let mut val = 0.0;
            if nb1.contains(v) {
                val += beta1;
            }
            if nb2.contains(v) {
                val += beta2;
            }
            bucket.push(val);
        }
    }
    let mut checks = Vec::with_capacity(n);
    for (v, bucket) in samples.iter().enumerate() {
        let expected = beta1 * f64::from(u8::from(b1.contains(v)))
            + beta2 * f64::from(u8::from(b2.contains(v)));
        let z = z_score(bucket, expected);
        checks.push(Check {
            name: format!("coordinate-{v}"),
            statistic: z,
            pass: z.abs() <= 3.0,
        });
    }
    Ok(checks)
}

/// Element inclusion frequencies of both rounding engines match the
/// fractional point.
fn marginals_checks(trials: usize, seed: u64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();

    // triangle: x = (1/2) 1_{01} + (1/2) 1_{12}
    let tri = Counted::new(triangle());
    let x_tri = ConvexCombination::equal_weight(vec![
        ElementSet::from_indices(3, &[0, 1]).expect("fixture"),
        ElementSet::from_indices(3, &[1, 2]).expect("fixture"),
    ])
    .expect("fixture");
    checks.extend(marginal_checks_for(
        "triangle-classic",
        trials,
        seed,
        &x_tri,
        |rng| swap_round(&x_tri, &tri, rng),
    )?);
    checks.extend(marginal_checks_for(
        "triangle-fast",
        trials,
        seed + 1,
        &x_tri,
        |rng| fast_swap_round(&x_tri, &tri, rng),
    )?);

    // K6 disjoint tree pair, 0.4/0.6 weights
    let (graph, b1, b2) = k6_disjoint_tree_pair();
    let k6 = Counted::new(graph);
    let x_k6 = ConvexCombination::new(vec![(0.4, b1), (0.6, b2)]).expect("fixture");
    checks.extend(marginal_checks_for(
        "k6-classic",
        trials,
        seed + 2,
        &x_k6,
        |rng| swap_round(&x_k6, &k6, rng),
    )?);
    checks.extend(marginal_checks_for(
        "k6-fast",
        trials,
        seed + 3,
        &x_k6,
        |rng| fast_swap_round(&x_k6, &k6, rng),
    )?);
    Ok(checks)
}

fn marginal_checks_for(
    label: &str,
    trials: usize,
    seed: u64,
    x: &ConvexCombination,
    mut round: impl FnMut(&mut ChaCha8Rng) -> submax::Result<ElementSet>,
) -> CliResult<Vec<Check>> {
    let n = x.universe();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inclusion: Vec<Vec<f64>> = (0..n).map(|_| Vec::with_capacity(trials)).collect();
    for _ in 0..trials {
        let s = round(&mut rng).map_err(|e| CliError::Infeasible(e.to_string()))?;
        for (v, bucket) in inclusion.iter_mut().enumerate() {
            bucket.push(f64::from(u8::from(s.contains(v))));
        }
    }
    let point = x.point();
    Ok(inclusion
        .iter()
        .enumerate()
        .map(|(v, bucket)| {
            let z = z_score(bucket, point[v]);
            Check {
                name: format!("{label}-element-{v}"),
                statistic: z,
                pass: z.abs() <= 3.0,
            }
        })
        .collect())
}

/// `E[f(S)] >= F(x)`: the empirical mean of `f` over rounded bases must not
/// fall more than three standard errors below the exact multilinear value.
fn rounding_guarantee_checks(trials: usize, seed: u64) -> CliResult<Vec<Check>> {
    let ledger = QueryLedger::new();
    let m = Counted::with_ledger(partition_12(), Arc::clone(&ledger));
    let f = CountedValue::with_ledger(coverage_12(), Arc::clone(&ledger));

    let mut basis_rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<ElementSet> = (0..4)
        .map(|_| random_basis(&m, &mut basis_rng))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Infeasible(e.to_string()))?;
    let x =
        ConvexCombination::equal_weight(bases).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let point = FractionalPoint::new(x.point()).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let fx = multilinear_exact(&f, &point).map_err(|e| CliError::Infeasible(e.to_string()))?;

    let mut checks = Vec::new();
    for (label, fast) in [("classic", false), ("fast", true)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + u64::from(fast));
        let mut values = Vec::with_capacity(trials);
        for _ in 0..trials {
            let s = if fast {
                fast_swap_round(&x, &m, &mut rng)
            } else {
                swap_round(&x, &m, &mut rng)
            }
            .map_err(|e| CliError::Infeasible(e.to_string()))?;
            values.push(f.value(&s));
        }
        let z = (mean(&values) - fx) / std_error(&values).max(f64::EPSILON);
        checks.push(Check {
            name: format!("{label}-mean-f-vs-F(x)"),
            statistic: z,
            pass: z >= -3.0,
        });
    }
    Ok(checks)
}

/// Every cycle the sampled search returns must survive full per-edge oracle
/// validation; the statistic is the failure count and anything nonzero
/// fails.
fn cycle_validity_checks(trials: usize, seed: u64) -> CliResult<Vec<Check>> {
    let graph = GraphicMatroid::complete(8).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let m = Counted::new(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut produced = 0usize;
    while produced < trials {
        let b1 = random_basis(&m, &mut rng).map_err(|e| CliError::Infeasible(e.to_string()))?;
        let b2 = random_basis(&m, &mut rng).map_err(|e| CliError::Infeasible(e.to_string()))?;
        if b1 == b2 {
            continue;
        }
        produced += 1;
        let view = ExchangeDigraphView::new(&m, &b1, &b2)
            .map_err(|e| CliError::Infeasible(e.to_string()))?;
        match find_directed_cycle(&view, 2, &mut rng) {
            Ok(cycle) => {
                if cycle.validate(&view).is_err() {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    Ok(vec![Check {
        name: "validated-cycles".into(),
        statistic: failures as f64,
        pass: failures == 0,
    }])
}
