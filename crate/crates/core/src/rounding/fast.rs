//! Swap rounding driven by directed cycles of the exchange digraph.
//!
//! For bases `B1, B2` the bipartite digraph `D(B1, B2)` has vertex set
//! `B1 Δ B2` and an edge `u -> v` (`u ∈ B1 \ B2`, `v ∈ B2 \ B1`) when
//! `B1 + v - u` is independent, plus an edge `v -> u` when `B2 + u - v` is
//! independent. A length-two cycle is exactly a strongly exchangeable pair;
//! the classic merge spends `O(r)` queries to find one. Here we instead find
//! a directed cycle of *arbitrary* length cheaply and resolve one uniformly
//! random swap along it, which preserves the same per-step expectation
//! `E[β1 1_{B1'} + β2 1_{B2'}] = β1 1_{B1} + β2 1_{B2}`.
//!
//! Cycle finding samples `⌈2 sqrt(r ln(rt))⌉` vertices per side (natural
//! log; capped at the side size, duplicates dropped), locates one incoming
//! edge per sampled vertex with a binary search, and walks predecessor links
//! backwards until a vertex repeats. A sampled vertex with no incoming edge
//! inside the sample has low indegree with high probability, in which case a
//! length-two cycle through it is found directly
//! ([`find_cycle_low_indegree`]). One cycle costs
//! `O(sqrt(r) log^{3/2}(rt))` queries w.h.p., one merge `O(r^{3/2}
//! log^{3/2}(rt))`, a full rounding pass `O(r^{3/2} t log^{3/2}(rt))` with
//! probability at least `1 - (rt)^{-1}`.
//!
//! Randomness discipline: each operation draws from the injected generator
//! in a fixed documented order — cycle search draws the left samples then
//! the right samples; a cycle update draws the branch coin and then the
//! swap index. Replaying a seed replays the run.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exchange::find_exchange_element;
use crate::ledger::Counted;
use crate::matroid::{greedy_basis, IndependenceOracle};
use crate::rounding::classic::check_weights;
use crate::rounding::ConvexCombination;
use crate::set::ElementSet;

/// Default constant in the boosted rounding's per-attempt query budget
/// `C * r^{3/2} * t * ⌈ln(rt)⌉^{3/2}`. Generous enough that aborts are rare
/// at the scales this crate targets; override via [`BoostConfig`].
pub const DEFAULT_BUDGET_CONSTANT: f64 = 64.0;

/// Measured per-cycle-search budget constant: a search uses at most
/// `C * s * (⌈log2 max(s, 2)⌉ + 2)` independence queries with `s` the
/// per-side sample size, except with probability on the order of
/// `(rt)^{-2}` (a sampled vertex of high indegree may make the fallback
/// scan long).
pub const CYCLE_SEARCH_BUDGET_CONSTANT: f64 = 4.0;

/// A read-only view of the exchange digraph `D(B1, B2)`.
pub struct ExchangeDigraphView<'a, M> {
    m: &'a Counted<M>,
    pub b1: &'a ElementSet,
    pub b2: &'a ElementSet,
}

impl<'a, M: IndependenceOracle> ExchangeDigraphView<'a, M> {
    pub fn new(m: &'a Counted<M>, b1: &'a ElementSet, b2: &'a ElementSet) -> Result<Self> {
        if b1.universe() != m.n() || b2.universe() != m.n() {
            return Err(Error::invalid("bases do not match the oracle's ground set"));
        }
        if b1.len() != b2.len() {
            return Err(Error::invalid("bases must have equal cardinality"));
        }
        Ok(ExchangeDigraphView { m, b1, b2 })
    }

    fn side_of(&self, v: usize) -> Option<Side> {
        match (self.b1.contains(v), self.b2.contains(v)) {
            (true, false) => Some(Side::Left),
            (false, true) => Some(Side::Right),
            _ => None,
        }
    }

    /// Whether the directed edge `from -> to` is present; one independence
    /// query. The endpoints must lie on opposite sides of `B1 Δ B2`.
    pub fn edge_exists(&self, from: usize, to: usize) -> Result<bool> {
        let from_side = match (self.side_of(from), self.side_of(to)) {
            (Some(f), Some(t)) if f != t => f,
            _ => {
                return Err(Error::invalid(format!(
                    "edge ({from}, {to}) does not cross the symmetric difference"
                )))
            }
        };
        // swap "to" for "from" inside the basis that owns "from"
        let owner = match from_side {
            Side::Left => self.b1,
            Side::Right => self.b2,
        };
        Ok(self.m.is_independent(&owner.with(to).without(from)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// A directed cycle `u_0, v_0, u_1, v_1, ..., v_{l-1}` of `D(B1, B2)`,
/// alternating `u_i ∈ B1 \ B2` and `v_i ∈ B2 \ B1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedCycle {
    seq: Vec<usize>,
}

impl DirectedCycle {
    /// Wraps an alternating vertex sequence; `seq[0]` must lie in
    /// `B1 \ B2` and the length must be even and positive. Edge validity is
    /// the producer's contract — re-check with [`DirectedCycle::validate`].
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        if seq.is_empty() || !seq.len().is_multiple_of(2) {
            return Err(Error::invalid(
                "cycle must alternate sides, length 2l with l >= 1",
            ));
        }
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("cycle vertices must be distinct"));
        }
        Ok(DirectedCycle { seq })
    }

    /// Half-length `l`.
    pub fn half_len(&self) -> usize {
        self.seq.len() / 2
    }

    pub fn vertices(&self) -> &[usize] {
        &self.seq
    }

    /// `u_i ∈ B1 \ B2`, in traversal order.
    pub fn left_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.seq.iter().step_by(2).copied()
    }

    /// `v_i ∈ B2 \ B1`, in traversal order.
    pub fn right_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.seq.iter().skip(1).step_by(2).copied()
    }

    /// Consecutive directed edges, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.seq.len();
        (0..n).map(move |i| (self.seq[i], self.seq[(i + 1) % n]))
    }

    /// Checks sides, distinctness and all `2l` edges against the oracle
    /// (`2l` independence queries).
    pub fn validate<M: IndependenceOracle>(&self, view: &ExchangeDigraphView<'_, M>) -> Result<()> {
        for (i, &v) in self.seq.iter().enumerate() {
            let expect = if i % 2 == 0 { Side::Left } else { Side::Right };
            if view.side_of(v) != Some(expect) {
                return Err(Error::invalid(format!("vertex {v} on the wrong side")));
            }
        }
        for (from, to) in self.edges() {
            if !view.edge_exists(from, to)? {
                return Err(Error::invalid(format!(
                    "edge ({from}, {to}) fails its oracle check"
                )));
            }
        }
        Ok(())
    }

    /// Rotates so the cycle starts at its smallest left-side vertex.
    fn canonicalize(mut self) -> Self {
        let (offset, _) = self
            .seq
            .iter()
            .step_by(2)
            .enumerate()
            .min_by_key(|&(_, v)| v)
            .expect("cycle is nonempty");
        self.seq.rotate_left(2 * offset);
        self
    }
}

/// Search diagnostics; see [`find_directed_cycle_with_stats`].
#[derive(Debug, Clone, Default)]
pub struct CycleSearchStats {
    /// Sampled vertex that had no incoming edge within the sample, if the
    /// search fell back to the direct length-two hunt.
    pub fallback_vertex: Option<usize>,
    /// Unique sampled vertices per side.
    pub sampled_left: usize,
    pub sampled_right: usize,
}

/// Finds a length-two cycle through `a` by repeatedly binary-searching an
/// incoming neighbor and testing the reverse edge directly; rejected
/// neighbors are excluded and the strong basis exchange property guarantees
/// termination. With `d` the indegree of `a`, this costs `O(d log r)`
/// queries.
pub fn find_cycle_low_indegree<M: IndependenceOracle>(
    view: &ExchangeDigraphView<'_, M>,
    a: usize,
) -> Result<DirectedCycle> {
    let side = view
        .side_of(a)
        .ok_or_else(|| Error::invalid(format!("vertex {a} is not in the symmetric difference")))?;
    // the basis a new partner would leave, and the basis that hosts the
    // binary search for incoming edges of a
    let (host, other) = match side {
        Side::Left => (view.b2, view.b1),
        Side::Right => (view.b1, view.b2),
    };
    let mut candidates = host.difference(other);
    loop {
        let Some(partner) = find_exchange_element(view.m, host, a, &candidates)? else {
            return Err(Error::invalid(
                "no exchange partner exists; inputs are not bases of the oracle's matroid",
            ));
        };
        if view.m.is_independent(&other.with(partner).without(a)) {
            let seq = match side {
                Side::Left => vec![a, partner],
                Side::Right => vec![partner, a],
            };
            return DirectedCycle::new(seq);
        }
        candidates.remove(partner);
    }
}

/// Finds a directed cycle in `D(B1, B2)`; `t` is the term count of the
/// enclosing rounding instance and only enters the sample-size formula.
/// See the module docs for the procedure and its query bound.
pub fn find_directed_cycle<M: IndependenceOracle, R: Rng>(
    view: &ExchangeDigraphView<'_, M>,
    t: usize,
    rng: &mut R,
) -> Result<DirectedCycle> {
    find_directed_cycle_with_stats(view, t, rng).map(|(c, _)| c)
}

/// [`find_directed_cycle`] plus search diagnostics, for instrumentation.
pub fn find_directed_cycle_with_stats<M: IndependenceOracle, R: Rng>(
    view: &ExchangeDigraphView<'_, M>,
    t: usize,
    rng: &mut R,
) -> Result<(DirectedCycle, CycleSearchStats)> {
    if t < 2 {
        return Err(Error::invalid("term count t must be at least 2"));
    }
    if view.b1 == view.b2 {
        return Err(Error::invalid(
            "bases coincide; the exchange digraph is empty",
        ));
    }

    let rank = view.b1.len();
    let sample_size = (2.0 * ((rank as f64) * ((rank * t) as f64).ln()).sqrt()).ceil() as usize;

    let left_side = view.b1.difference(view.b2).to_vec();
    let right_side = view.b2.difference(view.b1).to_vec();
    let left = sample_side(&left_side, sample_size, rng);
    let right = sample_side(&right_side, sample_size, rng);
    let stats = CycleSearchStats {
        fallback_vertex: None,
        sampled_left: left.len(),
        sampled_right: right.len(),
    };

    let left_set = subset_of(view.b1.universe(), &left);
    let right_set = subset_of(view.b2.universe(), &right);

    // one binary search per sampled vertex for an incoming edge inside the
    // sample; pred[x] = the incoming neighbor found
    let mut pred: HashMap<usize, usize> = HashMap::with_capacity(left.len() + right.len());
    let mut orphans: Vec<usize> = Vec::new();
    for &u in &left {
        match find_exchange_element(view.m, view.b2, u, &right_set)? {
            Some(v) => {
                pred.insert(u, v);
            }
            None => orphans.push(u),
        }
    }
    for &v in &right {
        match find_exchange_element(view.m, view.b1, v, &left_set)? {
            Some(u) => {
                pred.insert(v, u);
            }
            None => orphans.push(v),
        }
    }

    if let Some(&a) = orphans.iter().min() {
        let cycle = find_cycle_low_indegree(view, a)?;
        return Ok((
            cycle,
            CycleSearchStats {
                fallback_vertex: Some(a),
                ..stats
            },
        ));
    }

    // every sampled vertex has a predecessor: walk predecessor links until a
    // vertex repeats, then reverse the repeated segment into a forward cycle
    let start = left[0].min(right[0]);
    let mut position: HashMap<usize, usize> = HashMap::new();
    let mut path: Vec<usize> = Vec::new();
    let mut current = start;
    loop {
        if let Some(&first) = position.get(&current) {
            let mut seq: Vec<usize> = path[first..].to_vec();
            seq.reverse();
            if view.b2.contains(seq[0]) {
                seq.rotate_left(1);
            }
            let cycle = DirectedCycle::new(seq)?.canonicalize();
            return Ok((cycle, stats));
        }
        position.insert(current, path.len());
        path.push(current);
        current = pred[&current];
    }
}

/// Uniform draws with replacement, duplicates dropped, ascending order. A
/// request of at least the side size degenerates to the whole side.
fn sample_side<R: Rng>(side: &[usize], draws: usize, rng: &mut R) -> Vec<usize> {
    if draws >= side.len() {
        return side.to_vec();
    }
    let mut picked: Vec<usize> = (0..draws)
        .map(|_| side[rng.random_range(0..side.len())])
        .collect();
    picked.sort_unstable();
    picked.dedup();
    picked
}

fn subset_of(universe: usize, members: &[usize]) -> ElementSet {
    let mut s = ElementSet::empty(universe);
    for &v in members {
        s.insert(v);
    }
    s
}

/// Resolves one uniformly random swap along a directed cycle.
///
/// With probability `beta2 / (beta1 + beta2)`: `b1 <- b1 + v_i - u_i` for a
/// uniform `i`; otherwise `b2 <- b2 + u_{i+1} - v_i` for a uniform `i`
/// (indices mod `l`). Either way exactly one basis changes by one swap and
/// `|b1 Δ b2|` shrinks by two. Draws the branch coin first, then the index.
pub fn update_with_cycle<R: Rng>(
    beta1: f64,
    b1: ElementSet,
    beta2: f64,
    b2: ElementSet,
    cycle: &DirectedCycle,
    rng: &mut R,
) -> Result<(ElementSet, ElementSet)> {
    check_weights(beta1, beta2)?;
    for u in cycle.left_vertices() {
        if !b1.contains(u) || b2.contains(u) {
            return Err(Error::invalid(format!(
                "cycle vertex {u} is not in b1 \\ b2"
            )));
        }
    }
    for v in cycle.right_vertices() {
        if !b2.contains(v) || b1.contains(v) {
            return Err(Error::invalid(format!(
                "cycle vertex {v} is not in b2 \\ b1"
            )));
        }
    }
    let us: Vec<usize> = cycle.left_vertices().collect();
    let vs: Vec<usize> = cycle.right_vertices().collect();
    let l = cycle.half_len();
    if rng.random::<f64>() < beta2 / (beta1 + beta2) {
        let i = rng.random_range(0..l);
        Ok((b1.with(vs[i]).without(us[i]), b2))
    } else {
        let i = rng.random_range(0..l);
        Ok((b1, b2.with(us[(i + 1) % l]).without(vs[i])))
    }
}

struct QueryBudget<'a> {
    ledger: &'a crate::ledger::QueryLedger,
    start: u64,
    limit: u64,
}

impl QueryBudget<'_> {
    fn exhausted(&self) -> bool {
        self.ledger.independence_queries() - self.start > self.limit
    }
}

#[allow(clippy::too_many_arguments)]
fn fast_merge_inner<M: IndependenceOracle, R: Rng>(
    beta1: f64,
    mut b1: ElementSet,
    beta2: f64,
    mut b2: ElementSet,
    m: &Counted<M>,
    t: usize,
    rng: &mut R,
    budget: Option<&QueryBudget<'_>>,
) -> Result<Option<ElementSet>> {
    check_weights(beta1, beta2)?;
    if t < 2 {
        return Err(Error::invalid("term count t must be at least 2"));
    }
    let r = b1.len();
    let mut watchdog = 10 * r * r + 16;
    while b1 != b2 {
        if let Some(b) = budget {
            if b.exhausted() {
                return Ok(None);
            }
        }
        if watchdog == 0 {
            return Err(Error::NoProgress(
                "merge failed to converge; oracle is not a matroid".into(),
            ));
        }
        watchdog -= 1;
        let cycle = {
            let view = ExchangeDigraphView::new(m, &b1, &b2)?;
            find_directed_cycle(&view, t, rng)?
        };
        (b1, b2) = update_with_cycle(beta1, b1, beta2, b2, &cycle, rng)?;
    }
    Ok(Some(b1))
}

/// Merges two bases using directed-cycle updates until they coincide.
/// `t` is the term count of the enclosing rounding instance (sample-size
/// parameter). Identical bases return immediately with zero queries.
pub fn fast_merge_bases<M: IndependenceOracle, R: Rng>(
    beta1: f64,
    b1: ElementSet,
    beta2: f64,
    b2: ElementSet,
    m: &Counted<M>,
    t: usize,
    rng: &mut R,
) -> Result<ElementSet> {
    fast_merge_inner(beta1, b1, beta2, b2, m, t, rng, None).map(|b| b.expect("no budget in place"))
}

fn fast_swap_round_capped<M: IndependenceOracle, R: Rng>(
    x: &ConvexCombination,
    m: &Counted<M>,
    rng: &mut R,
    budget: Option<&QueryBudget<'_>>,
) -> Result<Option<ElementSet>> {
    let terms = x.terms();
    let t = terms.len();
    let (mut gamma, mut current) = (terms[0].0, terms[0].1.clone());
    for (beta, basis) in &terms[1..] {
        match fast_merge_inner(gamma, current, *beta, basis.clone(), m, t, rng, budget)? {
            Some(merged) => current = merged,
            None => return Ok(None),
        }
        gamma += beta;
    }
    Ok(Some(current))
}

/// Rounds a convex combination of bases to a single basis by folding
/// [`fast_merge_bases`] left to right with accumulated weights.
pub fn fast_swap_round<M: IndependenceOracle, R: Rng>(
    x: &ConvexCombination,
    m: &Counted<M>,
    rng: &mut R,
) -> Result<ElementSet> {
    fast_swap_round_capped(x, m, rng, None).map(|b| b.expect("no budget in place"))
}

/// Knobs for [`swap_round_boosted`].
#[derive(Debug, Clone, Copy)]
pub struct BoostConfig {
    /// Constant `C` in the per-attempt query budget
    /// `C * r^{3/2} * t * ⌈ln(rt)⌉^{3/2}`.
    pub budget_constant: f64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            budget_constant: DEFAULT_BUDGET_CONSTANT,
        }
    }
}

impl BoostConfig {
    /// Per-attempt independence query budget for an instance of rank `r`
    /// with `t` terms.
    pub fn attempt_budget(&self, r: usize, t: usize) -> u64 {
        let rt = (r * t) as f64;
        let budget =
            self.budget_constant * (r as f64).powf(1.5) * t as f64 * rt.ln().ceil().powf(1.5);
        budget.ceil() as u64
    }
}

/// Rounding with failures traded for an approximation factor: runs
/// budget-capped [`fast_swap_round`] up to `q = ⌈log_{1/(rt)} eps⌉` times
/// and returns the first surviving basis; if every attempt exceeds its
/// budget, falls back to the greedy basis in identity order. The output `S`
/// satisfies `E[f(S)] ≥ (1 - eps) F(x)` and the total query count stays in
/// `O(r^{3/2} t log^{3/2}(rt / eps))`.
pub fn swap_round_boosted<M: IndependenceOracle, R: Rng>(
    x: &ConvexCombination,
    m: &Counted<M>,
    epsilon: f64,
    config: &BoostConfig,
    rng: &mut R,
) -> Result<ElementSet> {
    if epsilon.is_nan() || epsilon <= 0.0 || epsilon >= 1.0 {
        return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1)")));
    }
    let t = x.t();
    let r = x.basis_size();
    if t == 1 || r == 0 {
        return Ok(x.terms()[0].1.clone());
    }
    let rt = (r * t) as f64;
    let q = ((1.0 / epsilon).ln() / rt.ln()).ceil().max(1.0) as usize;
    let limit = config.attempt_budget(r, t);
    for _ in 0..q {
        let budget = QueryBudget {
            ledger: m.ledger(),
            start: m.ledger().independence_queries(),
            limit,
        };
        if let Some(basis) = fast_swap_round_capped(x, m, rng, Some(&budget))? {
            return Ok(basis);
        }
    }
    let identity: Vec<usize> = (0..m.n()).collect();
    greedy_basis(m, &identity)
}
