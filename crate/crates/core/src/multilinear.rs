//! The multilinear extension `F(x) = E[f(R(x))]`, where `R(x)` includes each
//! element `v` independently with probability `x_v`. Exact evaluation
//! enumerates all subsets and is gated to small ground sets; the Monte Carlo
//! estimator works at any size and reports its standard error.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ledger::CountedValue;
use crate::set::ElementSet;
use crate::submodular::ValueOracle;

/// Largest ground set for which exact enumeration is allowed.
pub const EXACT_ENUMERATION_LIMIT: usize = 20;

/// A point in `[0, 1]^V`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint {
    coords: Vec<f64>,
}

impl FractionalPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("point over an empty ground set"));
        }
        if coords.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::invalid("coordinates must lie in [0, 1]"));
        }
        Ok(FractionalPoint { coords })
    }

    pub fn indicator(s: &ElementSet) -> Self {
        let mut coords = vec![0.0; s.universe()];
        for v in s {
            coords[v] = 1.0;
        }
        FractionalPoint { coords }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// One draw of the random set `R(x)`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> ElementSet {
        let mut s = ElementSet::empty(self.coords.len());
        for (v, &p) in self.coords.iter().enumerate() {
            if rng.random::<f64>() < p {
                s.insert(v);
            }
        }
        s
    }
}

/// Exact `F(x)` by enumerating all `2^n` subsets (so `2^n` value queries).
pub fn multilinear_exact<F: ValueOracle>(f: &CountedValue<F>, x: &FractionalPoint) -> Result<f64> {
    let n = f.n();
    if x.n() != n {
        return Err(Error::invalid("point dimension does not match the oracle"));
    }
    if n > EXACT_ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!(
            "exact multilinear evaluation enumerates 2^{n} subsets; limit is 2^{EXACT_ENUMERATION_LIMIT}"
        )));
    }
    let coords = x.coords();
    let mut total = 0.0;
    for mask in 0u64..(1u64 << n) {
        let mut prob = 1.0;
        let mut s = ElementSet::empty(n);
        for (v, &p) in coords.iter().enumerate() {
            if mask >> v & 1 == 1 {
                prob *= p;
                s.insert(v);
            } else {
                prob *= 1.0 - p;
            }
        }
        if prob > 0.0 {
            total += prob * f.value(&s);
        }
    }
    Ok(total)
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Estimates `F(x)` as the mean of `f` over independent draws of `R(x)`.
pub fn multilinear_estimate<F: ValueOracle, R: Rng>(
    f: &CountedValue<F>,
    x: &FractionalPoint,
    samples: usize,
    rng: &mut R,
) -> Result<Estimate> {
    if x.n() != f.n() {
        return Err(Error::invalid("point dimension does not match the oracle"));
    }
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let values: Vec<f64> = (0..samples).map(|_| f.value(&x.sample(rng))).collect();
    Ok(Estimate {
        mean: crate::stats::mean(&values),
        std_error: crate::stats::std_error(&values),
        samples,
    })
}
