//! The end-to-end maximization pipeline: continuous greedy over the base
//! polytope, then boosted swap rounding. Splitting the accuracy parameter
//! between the phases (`eps/2` each by default) yields a `(1 - 1/e - eps)`
//! approximation in expectation.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ledger::{Counted, CountedValue, PhaseCounts, QueryLedger};
use crate::matroid::{greedy_basis, IndependenceOracle};
use crate::rounding::{swap_round_boosted, BoostConfig, ConvexCombination};
use crate::set::ElementSet;
use crate::submodular::ValueOracle;

/// Largest ground set for which [`brute_force_opt`] is allowed.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Builds a convex combination of `⌈1/epsilon⌉` equal-weight bases by the
/// continuous greedy.
///
/// Each step estimates every element's marginal at the current fractional
/// point `y` — `E[f(R ∪ v) - f(R \ v)]` over `samples_per_estimate` common
/// draws `R ~ y` — and takes the greedy basis in descending estimated
/// weight (ties toward smaller indices), then advances `y` by `1/k` toward
/// that basis. Requires `f` monotone; `epsilon` must lie in `(0, 1]`.
pub fn continuous_greedy<F: ValueOracle, M: IndependenceOracle, R: Rng>(
    f: &CountedValue<F>,
    m: &Counted<M>,
    epsilon: f64,
    samples_per_estimate: usize,
    rng: &mut R,
) -> Result<ConvexCombination> {
    if epsilon.is_nan() || epsilon <= 0.0 || epsilon > 1.0 {
        return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1]")));
    }
    if samples_per_estimate == 0 {
        return Err(Error::invalid(
            "at least one sample per estimate is required",
        ));
    }
    let n = f.n();
    if n != m.n() {
        return Err(Error::invalid("objective and matroid ground sets differ"));
    }
    let k = (1.0 / epsilon).ceil() as usize;
    let step = 1.0 / k as f64;
    let mut y = vec![0.0f64; n];
    let mut bases = Vec::with_capacity(k);
    for _ in 0..k {
        let weights = estimate_marginals(f, &y, samples_per_estimate, rng);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            weights[b]
                .partial_cmp(&weights[a])
                .expect("finite marginals")
                .then(a.cmp(&b))
        });
        let basis = greedy_basis(m, &order)?;
        for v in &basis {
            y[v] = (y[v] + step).min(1.0);
        }
        bases.push(basis);
    }
    ConvexCombination::equal_weight(bases)
}

/// Marginal estimates at `y` with common random numbers: the same draws
/// `R ~ y` serve every element, which cuts the variance of comparisons
/// without biasing any single estimate. `samples * (n + 1)` value queries.
fn estimate_marginals<F: ValueOracle, R: Rng>(
    f: &CountedValue<F>,
    y: &[f64],
    samples: usize,
    rng: &mut R,
) -> Vec<f64> {
    let n = y.len();
    let mut gains = vec![0.0f64; n];
    for _ in 0..samples {
        let mut r_set = ElementSet::empty(n);
        for (v, &p) in y.iter().enumerate() {
            if rng.random::<f64>() < p {
                r_set.insert(v);
            }
        }
        let base = f.value(&r_set);
        for (v, gain) in gains.iter_mut().enumerate() {
            if r_set.contains(v) {
                *gain += base - f.value(&r_set.without(v));
            } else {
                *gain += f.value(&r_set.with(v)) - base;
            }
        }
    }
    for g in &mut gains {
        *g /= samples as f64;
    }
    gains
}

/// Exact `max { f(T) : T independent }` by depth-first enumeration of the
/// independent sets, pruning dependent branches (downward closure makes
/// every superset of a dependent set dependent). Ties resolve to the first
/// maximizer in lexicographic order.
pub fn brute_force_opt<F: ValueOracle, M: IndependenceOracle>(
    f: &CountedValue<F>,
    m: &Counted<M>,
) -> Result<(ElementSet, f64)> {
    let n = f.n();
    if n != m.n() {
        return Err(Error::invalid("objective and matroid ground sets differ"));
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "brute force enumerates independent subsets of {n} elements; limit is {BRUTE_FORCE_LIMIT}"
        )));
    }
    let mut best_set = ElementSet::empty(n);
    let mut best_value = f.value(&best_set);
    let mut current = ElementSet::empty(n);
    descend(f, m, 0, &mut current, &mut best_set, &mut best_value);
    Ok((best_set, best_value))
}

fn descend<F: ValueOracle, M: IndependenceOracle>(
    f: &CountedValue<F>,
    m: &Counted<M>,
    next: usize,
    current: &mut ElementSet,
    best_set: &mut ElementSet,
    best_value: &mut f64,
) {
    for v in next..f.n() {
        current.insert(v);
        if m.is_independent(current) {
            let value = f.value(current);
            if value > *best_value {
                *best_value = value;
                *best_set = current.clone();
            }
            descend(f, m, v + 1, current, best_set, best_value);
        }
        current.remove(v);
    }
}

/// Pipeline configuration; the defaults follow the analysis (equal epsilon
/// split, concentration-style sampling) with a cap that keeps desk-scale
/// runs cheap.
#[derive(Debug, Clone)]
pub struct MaximizeConfig {
    /// Fraction of `epsilon` spent on the relaxation; the rest goes to
    /// rounding.
    pub epsilon_split: f64,
    /// Overrides the sampling formula when set.
    pub samples_per_estimate: Option<usize>,
    /// Cap on the `200 ln(n) / eps^2` sampling formula.
    pub samples_cap: usize,
    pub boost: BoostConfig,
}

impl Default for MaximizeConfig {
    fn default() -> Self {
        MaximizeConfig {
            epsilon_split: 0.5,
            samples_per_estimate: None,
            samples_cap: 4096,
            boost: BoostConfig::default(),
        }
    }
}

impl MaximizeConfig {
    pub fn samples_for(&self, n: usize, eps_relaxation: f64) -> usize {
        if let Some(s) = self.samples_per_estimate {
            return s.max(1);
        }
        let formula = (200.0 * (n as f64).ln() / (eps_relaxation * eps_relaxation)).ceil();
        (formula as usize).clamp(1, self.samples_cap)
    }
}

/// What a pipeline run did, with per-phase query deltas.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MaximizeReport {
    pub value: f64,
    pub epsilon_relaxation: f64,
    pub epsilon_rounding: f64,
    /// Term count handed to the rounding phase.
    pub t: usize,
    pub samples_per_estimate: usize,
    pub phases: BTreeMap<String, PhaseCounts>,
    pub totals: PhaseCounts,
}

/// Runs continuous greedy with `epsilon_split * epsilon`, then boosted swap
/// rounding with the remainder. Targets `(1 - 1/e - epsilon) * OPT` in
/// expectation.
pub fn maximize<F: ValueOracle, M: IndependenceOracle, R: Rng>(
    f: &CountedValue<F>,
    m: &Counted<M>,
    epsilon: f64,
    config: &MaximizeConfig,
    rng: &mut R,
) -> Result<(ElementSet, MaximizeReport)> {
    if epsilon.is_nan() || epsilon <= 0.0 || epsilon >= 1.0 {
        return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1)")));
    }
    if config.epsilon_split.is_nan() || config.epsilon_split <= 0.0 || config.epsilon_split >= 1.0 {
        return Err(Error::invalid(
            "epsilon split must lie strictly between 0 and 1",
        ));
    }
    let eps_relax = epsilon * config.epsilon_split;
    let eps_round = epsilon - eps_relax;
    let samples = config.samples_for(f.n(), eps_relax);

    let ledgers = LedgerPair::new(m.ledger(), f.ledger());
    let before = ledgers.snapshot();

    ledgers.set_phase("relaxation");
    let x = continuous_greedy(f, m, eps_relax, samples, rng)?;
    ledgers.set_phase("rounding");
    let basis = swap_round_boosted(&x, m, eps_round, &config.boost, rng)?;
    ledgers.set_phase("report");
    let value = f.value(&basis);
    ledgers.clear_phase();

    let after = ledgers.snapshot();
    let report = MaximizeReport {
        value,
        epsilon_relaxation: eps_relax,
        epsilon_rounding: eps_round,
        t: x.t(),
        samples_per_estimate: samples,
        phases: diff_phases(&before.1, &after.1),
        totals: diff_counts(before.0, after.0),
    };
    Ok((basis, report))
}

/// The matroid and value ledgers, deduplicated when they are the same
/// allocation so shared ledgers are not counted twice.
struct LedgerPair {
    ledgers: Vec<Arc<QueryLedger>>,
}

impl LedgerPair {
    fn new(a: &Arc<QueryLedger>, b: &Arc<QueryLedger>) -> Self {
        let mut ledgers = vec![Arc::clone(a)];
        if !Arc::ptr_eq(a, b) {
            ledgers.push(Arc::clone(b));
        }
        LedgerPair { ledgers }
    }

    fn set_phase(&self, name: &str) {
        for l in &self.ledgers {
            l.set_phase(name);
        }
    }

    fn clear_phase(&self) {
        for l in &self.ledgers {
            l.clear_phase();
        }
    }

    fn snapshot(&self) -> (PhaseCounts, BTreeMap<String, PhaseCounts>) {
        let mut totals = PhaseCounts::default();
        let mut phases: BTreeMap<String, PhaseCounts> = BTreeMap::new();
        for l in &self.ledgers {
            let t = l.totals();
            totals.independence += t.independence;
            totals.rank += t.rank;
            totals.value += t.value;
            for (name, c) in l.phases() {
                let entry = phases.entry(name).or_default();
                entry.independence += c.independence;
                entry.rank += c.rank;
                entry.value += c.value;
            }
        }
        (totals, phases)
    }
}

fn diff_counts(before: PhaseCounts, after: PhaseCounts) -> PhaseCounts {
    PhaseCounts {
        independence: after.independence - before.independence,
        rank: after.rank - before.rank,
        value: after.value - before.value,
    }
}

fn diff_phases(
    before: &BTreeMap<String, PhaseCounts>,
    after: &BTreeMap<String, PhaseCounts>,
) -> BTreeMap<String, PhaseCounts> {
    let mut out = BTreeMap::new();
    for (name, &a) in after {
        let b = before.get(name).copied().unwrap_or_default();
        out.insert(name.clone(), diff_counts(b, a));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{PartitionMatroid, UniformMatroid};
    use crate::submodular::{CoverageFunction, FacilityLocation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn modular(weights: Vec<f64>) -> FacilityLocation {
        // a diagonal facility-location matrix is a modular function
        let n = weights.len();
        let rows = (0..n)
            .map(|c| {
                let mut row = vec![0.0; n];
                row[c] = weights[c];
                row
            })
            .collect();
        FacilityLocation::new(rows).unwrap()
    }

    #[test]
    fn eps_one_gives_single_greedy_basis() {
        let f = CountedValue::new(modular(vec![4.0, 1.0, 3.0, 2.0]));
        let m = Counted::new(UniformMatroid::new(4, 2).unwrap());
        let x = continuous_greedy(&f, &m, 1.0, 8, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(x.t(), 1);
        assert_eq!(x.terms()[0].1.to_vec(), vec![0, 2]);
    }

    #[test]
    fn modular_weights_concentrate_on_the_top_basis() {
        // the partial-derivative marginal of a modular function is its
        // weight no matter where y sits, so every iteration picks the top-r
        let f = CountedValue::new(modular(vec![5.0, 1.0, 4.0, 2.0, 3.0]));
        let m = Counted::new(UniformMatroid::new(5, 2).unwrap());
        let x = continuous_greedy(&f, &m, 0.25, 16, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(x.t(), 4);
        for (_, b) in x.terms() {
            assert_eq!(b.to_vec(), vec![0, 2]);
        }
        let point = x.point();
        assert!((point[0] - 1.0).abs() < 1e-12);
        assert!((point[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn greedy_output_is_always_a_valid_combination() {
        let f = CountedValue::new(
            CoverageFunction::new(6, &[vec![0, 1], vec![1, 2], vec![3], vec![4, 5]]).unwrap(),
        );
        let m = Counted::new(PartitionMatroid::new(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap());
        let x = continuous_greedy(&f, &m, 0.5, 32, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(x.t(), 2);
        x.validate_bases(&m, 2).unwrap();
        assert!(continuous_greedy(&f, &m, 0.0, 32, &mut ChaCha8Rng::seed_from_u64(3)).is_err());
        assert!(continuous_greedy(&f, &m, 1.5, 32, &mut ChaCha8Rng::seed_from_u64(3)).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let f = CountedValue::new(modular(vec![1.0, 1.0, 1.0, 1.0]));
        let m = Counted::new(UniformMatroid::new(4, 2).unwrap());
        let (_, v) = brute_force_opt(&f, &m).unwrap();
        assert_eq!(v, 2.0);

        // coverage {1,2}, {2,3}, {3,4} under U(3,2): {A, C} covers 4 points
        let cov = CountedValue::new(
            CoverageFunction::new(5, &[vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap(),
        );
        let m3 = Counted::new(UniformMatroid::new(3, 2).unwrap());
        let (s, v) = brute_force_opt(&cov, &m3).unwrap();
        assert_eq!(s.to_vec(), vec![0, 2]);
        assert_eq!(v, 4.0);
    }

    #[test]
    fn brute_force_is_gated() {
        let f = CountedValue::new(modular(vec![1.0; 21]));
        let m = Counted::new(UniformMatroid::new(21, 2).unwrap());
        assert!(matches!(brute_force_opt(&f, &m), Err(Error::TooLarge(_))));
    }

    #[test]
    fn maximize_finds_the_top_modular_basis() {
        let f = CountedValue::new(modular(vec![5.0, 1.0, 4.0, 2.0]));
        let m = Counted::new(UniformMatroid::new(4, 2).unwrap());
        let cfg = MaximizeConfig {
            samples_per_estimate: Some(32),
            ..MaximizeConfig::default()
        };
        let (s, report) = maximize(&f, &m, 0.2, &cfg, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(s.to_vec(), vec![0, 2]);
        assert_eq!(report.value, 9.0);
        assert_eq!(report.t, 10); // ceil(1 / (0.2 / 2))
    }

    #[test]
    fn rank_zero_matroid_yields_the_empty_set() {
        // a loops-only graphic matroid has rank zero; the pipeline must
        // settle on the empty set without dividing by a zero rank anywhere
        let m = Counted::new(
            crate::matroid::GraphicMatroid::new(2, vec![(0, 0), (1, 1), (0, 0)]).unwrap(),
        );
        let f = CountedValue::new(modular(vec![1.0, 2.0, 3.0]));
        let cfg = MaximizeConfig {
            samples_per_estimate: Some(4),
            ..MaximizeConfig::default()
        };
        let (s, report) = maximize(&f, &m, 0.5, &cfg, &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
        assert!(s.is_empty());
        assert_eq!(report.value, 0.0);
    }

    #[test]
    fn report_phases_sum_to_totals() {
        let ledger = QueryLedger::new();
        let f = CountedValue::with_ledger(
            CoverageFunction::new(6, &[vec![0, 1], vec![1, 2], vec![3], vec![4, 5]]).unwrap(),
            Arc::clone(&ledger),
        );
        let m = Counted::with_ledger(
            PartitionMatroid::new(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap(),
            Arc::clone(&ledger),
        );
        let cfg = MaximizeConfig {
            samples_per_estimate: Some(16),
            ..MaximizeConfig::default()
        };
        let (_, report) = maximize(&f, &m, 0.4, &cfg, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let phase_sum: u64 = report.phases.values().map(|c| c.total()).sum();
        assert_eq!(phase_sum, report.totals.total());
        assert_eq!(report.totals, ledger.totals());
        assert!(report.phases.contains_key("relaxation"));
        assert!(report.phases.contains_key("rounding"));
    }
}
