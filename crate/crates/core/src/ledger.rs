//! Query accounting.
//!
//! The cost model of everything in this crate is the number of oracle
//! queries, so counting has a single choke point: algorithms only accept
//! oracles wrapped in [`Counted`] (matroids) or [`CountedValue`] (set
//! functions), and each wrapped call increments exactly one counter of the
//! shared [`QueryLedger`] exactly once. Counters are atomic so read-only
//! oracles can be shared across trial threads; phase bookkeeping assumes the
//! single-threaded algorithm loop that owns the ledger.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::matroid::{IndependenceOracle, RankOracle};
use crate::set::ElementSet;
use crate::submodular::ValueOracle;

/// Counts of the three oracle kinds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct PhaseCounts {
    pub independence: u64,
    pub rank: u64,
    pub value: u64,
}

impl PhaseCounts {
    pub fn total(&self) -> u64 {
        self.independence + self.rank + self.value
    }
}

#[derive(Default)]
struct PhaseState {
    current: Option<String>,
    by_phase: BTreeMap<String, PhaseCounts>,
}

/// Monotone counters for independence, rank, and value oracle queries, plus
/// optional per-phase attribution.
#[derive(Default)]
pub struct QueryLedger {
    independence: AtomicU64,
    rank: AtomicU64,
    value: AtomicU64,
    phases: Mutex<PhaseState>,
}

impl QueryLedger {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    /// Starts attributing subsequent queries to `name`.
    pub fn set_phase(&self, name: &str) {
        let mut st = self.phases.lock().unwrap();
        st.current = Some(name.to_string());
        st.by_phase.entry(name.to_string()).or_default();
    }

    /// Stops per-phase attribution; totals keep counting.
    pub fn clear_phase(&self) {
        self.phases.lock().unwrap().current = None;
    }

    fn bump(&self, total: &AtomicU64, pick: impl Fn(&mut PhaseCounts) -> &mut u64) {
        total.fetch_add(1, Ordering::Relaxed);
        let mut st = self.phases.lock().unwrap();
        if let Some(name) = st.current.clone() {
            *pick(st.by_phase.get_mut(&name).expect("phase registered")) += 1;
        }
    }

    pub fn count_independence(&self) {
        self.bump(&self.independence, |c| &mut c.independence);
    }

    pub fn count_rank(&self) {
        self.bump(&self.rank, |c| &mut c.rank);
    }

    pub fn count_value(&self) {
        self.bump(&self.value, |c| &mut c.value);
    }

    pub fn independence_queries(&self) -> u64 {
        self.independence.load(Ordering::Relaxed)
    }

    pub fn rank_queries(&self) -> u64 {
        self.rank.load(Ordering::Relaxed)
    }

    pub fn value_queries(&self) -> u64 {
        self.value.load(Ordering::Relaxed)
    }

    pub fn totals(&self) -> PhaseCounts {
        PhaseCounts {
            independence: self.independence_queries(),
            rank: self.rank_queries(),
            value: self.value_queries(),
        }
    }

    /// Per-phase counts recorded so far.
    pub fn phases(&self) -> BTreeMap<String, PhaseCounts> {
        self.phases.lock().unwrap().by_phase.clone()
    }
}

/// A matroid oracle wrapped with a ledger. Algorithms in this crate accept
/// only wrapped oracles, so no query can escape the count.
pub struct Counted<M> {
    inner: M,
    ledger: Arc<QueryLedger>,
}

impl<M> Counted<M> {
    pub fn new(inner: M) -> Self {
        Counted {
            inner,
            ledger: QueryLedger::new(),
        }
    }

    pub fn with_ledger(inner: M, ledger: Arc<QueryLedger>) -> Self {
        Counted { inner, ledger }
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }
}

impl<M: IndependenceOracle> IndependenceOracle for Counted<M> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        self.ledger.count_independence();
        self.inner.is_independent(s)
    }
}

impl<M: RankOracle> RankOracle for Counted<M> {
    fn rank_of(&self, s: &ElementSet) -> usize {
        self.ledger.count_rank();
        self.inner.rank_of(s)
    }
}

/// A value oracle wrapped with a ledger.
pub struct CountedValue<F> {
    inner: F,
    ledger: Arc<QueryLedger>,
}

impl<F> CountedValue<F> {
    pub fn new(inner: F) -> Self {
        CountedValue {
            inner,
            ledger: QueryLedger::new(),
        }
    }

    pub fn with_ledger(inner: F, ledger: Arc<QueryLedger>) -> Self {
        CountedValue { inner, ledger }
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: ValueOracle> ValueOracle for CountedValue<F> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        self.ledger.count_value();
        self.inner.value(s)
    }
}

/// A memoizing decorator for independence oracles. Useful when the same
/// query recurs, but excluded from benchmark modes: ledgers must reflect the
/// algorithm's query pattern, so wrap as `Counted<Memoized<M>>` if you want
/// algorithm counts with cached evaluation underneath.
pub struct Memoized<M> {
    inner: M,
    cache: Mutex<std::collections::HashMap<ElementSet, bool>>,
}

impl<M> Memoized<M> {
    pub fn new(inner: M) -> Self {
        Memoized {
            inner,
            cache: Mutex::new(std::collections::HashMap::new()),
        }
    }
}

impl<M: IndependenceOracle> IndependenceOracle for Memoized<M> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        let mut cache = self.cache.lock().unwrap();
        if let Some(&hit) = cache.get(s) {
            return hit;
        }
        let ans = self.inner.is_independent(s);
        cache.insert(s.clone(), ans);
        ans
    }
}
