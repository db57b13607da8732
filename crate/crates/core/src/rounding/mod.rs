//! Randomized swap rounding of a point in the matroid base polytope.
//!
//! The input point is always represented explicitly as a convex combination
//! of bases ([`ConvexCombination`]); membership in the base polytope is
//! witnessed by that decomposition. [`classic`] merges bases with
//! length-two exchanges found by linear scan; [`fast`] merges with directed
//! cycles of the exchange digraph found by sampling plus binary search.

pub mod classic;
pub mod fast;

pub use classic::{merge_bases, swap_round, update_via_strong_basis_exchange};
pub use fast::{
    fast_merge_bases, fast_swap_round, find_cycle_low_indegree, find_directed_cycle,
    find_directed_cycle_with_stats, swap_round_boosted, update_with_cycle, BoostConfig,
    CycleSearchStats, DirectedCycle, ExchangeDigraphView, CYCLE_SEARCH_BUDGET_CONSTANT,
    DEFAULT_BUDGET_CONSTANT,
};

pub use crate::exchange::ExchangePair;

use crate::error::{Error, Result};
use crate::ledger::Counted;
use crate::matroid::IndependenceOracle;
use crate::set::ElementSet;

/// Weight tolerance for "the coefficients sum to one".
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// A point `x = Σ β_i 1_{B_i}` in the base polytope, kept as its list of
/// weighted bases.
#[derive(Debug, Clone)]
pub struct ConvexCombination {
    terms: Vec<(f64, ElementSet)>,
}

impl ConvexCombination {
    /// Validates weights (positive, summing to one) and shapes (equal
    /// universes and cardinalities). Whether each set is a basis depends on
    /// the matroid; check with [`ConvexCombination::validate_bases`].
    pub fn new(terms: Vec<(f64, ElementSet)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid(
                "a convex combination needs at least one term",
            ));
        }
        if terms
            .iter()
            .any(|(beta, _)| beta.is_nan() || *beta <= 0.0 || beta.is_infinite())
        {
            return Err(Error::invalid("all weights must be positive and finite"));
        }
        let total: f64 = terms.iter().map(|(beta, _)| beta).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        let universe = terms[0].1.universe();
        let size = terms[0].1.len();
        for (_, b) in &terms {
            if b.universe() != universe {
                return Err(Error::invalid("bases live in different ground sets"));
            }
            if b.len() != size {
                return Err(Error::invalid("bases have different cardinalities"));
            }
        }
        Ok(ConvexCombination { terms })
    }

    /// Equal weights `1/t` over the given bases.
    pub fn equal_weight(bases: Vec<ElementSet>) -> Result<Self> {
        let t = bases.len();
        if t == 0 {
            return Err(Error::invalid(
                "a convex combination needs at least one term",
            ));
        }
        let beta = 1.0 / t as f64;
        Self::new(bases.into_iter().map(|b| (beta, b)).collect())
    }

    /// Number of terms `t`.
    pub fn t(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(f64, ElementSet)] {
        &self.terms
    }

    /// Common cardinality of the bases (the matroid rank for valid input).
    pub fn basis_size(&self) -> usize {
        self.terms[0].1.len()
    }

    pub fn universe(&self) -> usize {
        self.terms[0].1.universe()
    }

    /// The induced fractional point `x_v = Σ_{i : v ∈ B_i} β_i`.
    pub fn point(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.universe()];
        for (beta, basis) in &self.terms {
            for v in basis {
                x[v] += beta;
            }
        }
        x
    }

    /// Checks every term against the oracle: independent and of cardinality
    /// `rank`, i.e. a basis. Costs one query per term.
    pub fn validate_bases<M: IndependenceOracle>(&self, m: &Counted<M>, rank: usize) -> Result<()> {
        for (_, b) in &self.terms {
            if b.universe() != m.n() {
                return Err(Error::invalid(
                    "combination universe does not match the matroid",
                ));
            }
            if b.len() != rank {
                return Err(Error::invalid(format!(
                    "term of size {} is not a basis of a rank-{rank} matroid",
                    b.len()
                )));
            }
            if !m.is_independent(b) {
                return Err(Error::invalid(format!("term {b:?} is not independent")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, members: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, members).unwrap()
    }

    #[test]
    fn validates_weights_and_shapes() {
        let b1 = set(3, &[0, 1]);
        let b2 = set(3, &[1, 2]);
        assert!(ConvexCombination::new(vec![(0.5, b1.clone()), (0.5, b2.clone())]).is_ok());
        assert!(ConvexCombination::new(vec![(0.5, b1.clone()), (0.6, b2.clone())]).is_err());
        assert!(ConvexCombination::new(vec![(1.0, b1.clone()), (0.0, b2.clone())]).is_err());
        assert!(ConvexCombination::new(vec![(0.5, b1.clone()), (0.5, set(3, &[2]))]).is_err());
        assert!(ConvexCombination::new(vec![]).is_err());
    }

    #[test]
    fn induced_point_sums_to_rank() {
        let x = ConvexCombination::equal_weight(vec![set(3, &[0, 1]), set(3, &[1, 2])]).unwrap();
        let point = x.point();
        assert!((point[0] - 0.5).abs() < 1e-12);
        assert!((point[1] - 1.0).abs() < 1e-12);
        assert!((point[2] - 0.5).abs() < 1e-12);
        let total: f64 = point.iter().sum();
        assert!((total - x.basis_size() as f64).abs() < 1e-9);
        assert!(point.iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v)));
    }
}
