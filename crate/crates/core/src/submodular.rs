//! Monotone submodular value oracles.
//!
//! Shipped families: set coverage, facility location, a concave function of
//! cardinality, and explicit tables for small ground sets. Monotonicity and
//! submodularity are enumeration-checked by the test suites on small
//! instances rather than enforced per call.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Answers `f(S)` for a set function over `0..n`.
pub trait ValueOracle {
    fn n(&self) -> usize;

    /// `f(s)`. Panics if `s` was built over a different universe.
    fn value(&self, s: &ElementSet) -> f64;
}

impl<F: ValueOracle + ?Sized> ValueOracle for &F {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn value(&self, s: &ElementSet) -> f64 {
        (**self).value(s)
    }
}

/// `f(S) = |union of the members' point sets|`.
#[derive(Debug, Clone)]
pub struct CoverageFunction {
    universe: usize,
    // one bitmask over the covered universe per element
    masks: Vec<Vec<u64>>,
}

impl CoverageFunction {
    pub fn new(universe: usize, sets: &[Vec<usize>]) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::malformed("coverage instance has no sets"));
        }
        let words = universe.div_ceil(64).max(1);
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            let mut mask = vec![0u64; words];
            for &p in set {
                if p >= universe {
                    return Err(Error::malformed(format!(
                        "covered point {p} outside universe of size {universe}"
                    )));
                }
                mask[p / 64] |= 1 << (p % 64);
            }
            masks.push(mask);
        }
        Ok(CoverageFunction { universe, masks })
    }
}

impl ValueOracle for CoverageFunction {
    fn n(&self) -> usize {
        self.masks.len()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        assert_eq!(s.universe(), self.n());
        let words = self.universe.div_ceil(64).max(1);
        let mut covered = vec![0u64; words];
        for e in s {
            for (c, m) in covered.iter_mut().zip(&self.masks[e]) {
                *c |= m;
            }
        }
        covered.iter().map(|w| w.count_ones() as f64).sum()
    }
}

/// `f(S) = Σ_clients max_{i ∈ S} w[client][i]`, zero on the empty set.
/// Weights must be non-negative for monotonicity.
#[derive(Debug, Clone)]
pub struct FacilityLocation {
    // weights[client][element]
    weights: Vec<Vec<f64>>,
}

impl FacilityLocation {
    pub fn new(weights: Vec<Vec<f64>>) -> Result<Self> {
        if weights.is_empty() || weights[0].is_empty() {
            return Err(Error::malformed(
                "facility location needs clients and elements",
            ));
        }
        let n = weights[0].len();
        if weights.iter().any(|row| row.len() != n) {
            return Err(Error::malformed("weight rows have unequal lengths"));
        }
        if weights
            .iter()
            .flatten()
            .any(|w| w.is_nan() || *w < 0.0 || w.is_infinite())
        {
            return Err(Error::malformed("weights must be finite and non-negative"));
        }
        Ok(FacilityLocation { weights })
    }
}

impl ValueOracle for FacilityLocation {
    fn n(&self) -> usize {
        self.weights[0].len()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        assert_eq!(s.universe(), self.n());
        if s.is_empty() {
            return 0.0;
        }
        self.weights
            .iter()
            .map(|row| s.iter().map(|e| row[e]).fold(0.0, f64::max))
            .sum()
    }
}

/// `f(S) = min(|S|, cap)`.
#[derive(Debug, Clone)]
pub struct ConcaveCardinality {
    n: usize,
    cap: usize,
}

impl ConcaveCardinality {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::malformed("ground set must be nonempty"));
        }
        Ok(ConcaveCardinality { n, cap })
    }
}

impl ValueOracle for ConcaveCardinality {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, s: &ElementSet) -> f64 {
        assert_eq!(s.universe(), self.n);
        s.len().min(self.cap) as f64
    }
}

/// `f(S) = values[bitmask(S)]`; the table length fixes `n = log2(len)`.
#[derive(Debug, Clone)]
pub struct TableFunction {
    n: usize,
    values: Vec<f64>,
}

impl TableFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let len = values.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::malformed(format!(
                "table length {len} is not a power of two of a nonempty ground set"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::malformed("table values must be finite"));
        }
        Ok(TableFunction {
            n: len.trailing_zeros() as usize,
            values,
        })
    }
}

impl ValueOracle for TableFunction {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, s: &ElementSet) -> f64 {
        assert_eq!(s.universe(), self.n);
        let mask: usize = s.iter().map(|v| 1usize << v).sum();
        self.values[mask]
    }
}

/// On-disk objective description.
///
/// ```json
/// {"type":"coverage","universe":4,"sets":[[0,1],[1,2],[2,3]]}
/// {"type":"facility_location","weights":[[1.0,0.0],[0.5,2.0]]}
/// {"type":"concave_card","cap":2}
/// {"type":"table","values":[0.0,1.0,1.0,1.5]}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubmodularInstance {
    Coverage {
        universe: usize,
        sets: Vec<Vec<usize>>,
    },
    FacilityLocation {
        weights: Vec<Vec<f64>>,
    },
    ConcaveCard {
        cap: usize,
    },
    Table {
        values: Vec<f64>,
    },
}

impl SubmodularInstance {
    /// Builds the oracle. `ground_size` fixes `n` for the kinds that do not
    /// carry it themselves and must agree with the kinds that do.
    pub fn build(&self, ground_size: usize) -> Result<AnySubmodular> {
        let oracle = match self {
            SubmodularInstance::Coverage { universe, sets } => {
                AnySubmodular::Coverage(CoverageFunction::new(*universe, sets)?)
            }
            SubmodularInstance::FacilityLocation { weights } => {
                AnySubmodular::FacilityLocation(FacilityLocation::new(weights.clone())?)
            }
            SubmodularInstance::ConcaveCard { cap } => {
                AnySubmodular::ConcaveCard(ConcaveCardinality::new(ground_size, *cap)?)
            }
            SubmodularInstance::Table { values } => {
                AnySubmodular::Table(TableFunction::new(values.clone())?)
            }
        };
        if oracle.n() != ground_size {
            return Err(Error::malformed(format!(
                "objective is over {} elements but the ground set has {ground_size}",
                oracle.n()
            )));
        }
        Ok(oracle)
    }

    pub fn from_json(text: &str, ground_size: usize) -> Result<AnySubmodular> {
        let inst: SubmodularInstance =
            serde_json::from_str(text).map_err(|e| Error::malformed(e.to_string()))?;
        inst.build(ground_size)
    }
}

/// Any shipped objective kind, dispatching value calls.
#[derive(Debug, Clone)]
pub enum AnySubmodular {
    Coverage(CoverageFunction),
    FacilityLocation(FacilityLocation),
    ConcaveCard(ConcaveCardinality),
    Table(TableFunction),
}

impl ValueOracle for AnySubmodular {
    fn n(&self) -> usize {
        match self {
            AnySubmodular::Coverage(f) => f.n(),
            AnySubmodular::FacilityLocation(f) => f.n(),
            AnySubmodular::ConcaveCard(f) => f.n(),
            AnySubmodular::Table(f) => f.n(),
        }
    }

    fn value(&self, s: &ElementSet) -> f64 {
        match self {
            AnySubmodular::Coverage(f) => f.value(s),
            AnySubmodular::FacilityLocation(f) => f.value(s),
            AnySubmodular::ConcaveCard(f) => f.value(s),
            AnySubmodular::Table(f) => f.value(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::CountedValue;

    fn set(n: usize, members: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, members).unwrap()
    }

    #[test]
    fn coverage_counts_the_union() {
        // A covers {0,1}, B covers {1,2}
        let f = CountedValue::new(CoverageFunction::new(3, &[vec![0, 1], vec![1, 2]]).unwrap());
        assert_eq!(f.value(&set(2, &[0, 1])), 3.0);
        assert_eq!(f.value(&ElementSet::empty(2)), 0.0);
        assert_eq!(f.ledger().value_queries(), 2);
    }

    #[test]
    fn concave_cardinality_caps() {
        let f = ConcaveCardinality::new(3, 2).unwrap();
        assert_eq!(f.value(&set(3, &[0, 1, 2])), 2.0);
        assert_eq!(f.value(&set(3, &[0])), 1.0);
    }

    #[test]
    fn facility_location_takes_row_maxima() {
        let f = FacilityLocation::new(vec![vec![1.0, 3.0], vec![2.0, 0.5]]).unwrap();
        assert_eq!(f.value(&set(2, &[0])), 3.0);
        assert_eq!(f.value(&set(2, &[0, 1])), 5.0);
        assert_eq!(f.value(&ElementSet::empty(2)), 0.0);
    }

    #[test]
    fn table_indexes_by_mask() {
        let f = TableFunction::new(vec![0.0, 1.0, 2.0, 2.5]).unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.value(&set(2, &[1])), 2.0);
        assert_eq!(f.value(&set(2, &[0, 1])), 2.5);
        assert!(TableFunction::new(vec![0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn instance_json() {
        let f = SubmodularInstance::from_json(
            r#"{"type":"coverage","universe":3,"sets":[[0,1],[1,2]]}"#,
            2,
        )
        .unwrap();
        assert_eq!(f.value(&set(2, &[0, 1])), 3.0);
        assert!(SubmodularInstance::from_json(r#"{"type":"concave_card","cap":2}"#, 5).is_ok());
        // ground-set mismatch
        assert!(SubmodularInstance::from_json(
            r#"{"type":"coverage","universe":3,"sets":[[0,1],[1,2]]}"#,
            7,
        )
        .is_err());
    }
}
