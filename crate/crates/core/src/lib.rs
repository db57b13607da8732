//! Monotone submodular maximization under a general matroid constraint.
//!
//! The pipeline is the usual two-phase one: solve the continuous relaxation
//! (maximize the multilinear extension over the matroid base polytope) with a
//! continuous greedy, then round the fractional point to a single basis by
//! randomized swap rounding. Two rounding engines are provided:
//!
//! * [`rounding::swap_round`] — the classic merge that repeatedly finds a
//!   strongly exchangeable pair by a linear scan, `O(r^2 t)` independence
//!   queries for `t` bases of rank `r`;
//! * [`rounding::fast_swap_round`] — a merge driven by directed cycles of an
//!   exchange digraph, found by vertex sampling plus binary search,
//!   `O(r^{3/2} t · polylog)` independence queries with high probability, and
//!   a boosted wrapper [`rounding::swap_round_boosted`] that retries
//!   budget-capped runs to trade failure probability for an `(1 - eps)`
//!   factor.
//!
//! Every oracle call is routed through a counting wrapper ([`Counted`],
//! [`CountedValue`]) so experiments can report exact per-phase query ledgers.

pub mod error;
pub mod exchange;
pub mod fixtures;
pub mod ledger;
pub mod matroid;
pub mod multilinear;
pub mod opt;
pub mod rounding;
pub mod set;
pub mod stats;
pub mod submodular;

pub use error::{Error, Result};
pub use ledger::{Counted, CountedValue, PhaseCounts, QueryLedger};
pub use matroid::{
    greedy_basis, random_basis, AnyMatroid, GraphicMatroid, IndependenceOracle, LinearMatroidGf2,
    MatroidInstance, PartitionMatroid, RankOracle, UniformMatroid,
};
pub use rounding::{ConvexCombination, DirectedCycle, ExchangeDigraphView, ExchangePair};
pub use set::{ElementSet, GroundSet};
pub use submodular::{SubmodularInstance, ValueOracle};
