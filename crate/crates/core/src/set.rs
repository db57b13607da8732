//! Ground sets and element sets.
//!
//! Elements are dense indices `0..n`. [`ElementSet`] is a fixed-universe
//! bitset: all set algebra used by the exchange arguments (`+v`, `-v`,
//! symmetric difference) is cheap and iteration is always in ascending index
//! order, which keeps every tie-break in the library deterministic.

use crate::error::{Error, Result};

/// A ground set of `n` elements identified by the indices `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid(
                "ground set must contain at least one element",
            ));
        }
        Ok(GroundSet { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All element indices in ascending order.
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n
    }
}

/// A subset of a ground set of fixed size `n`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: Vec<u64>,
    universe: usize,
    len: usize,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    /// Builds a set from indices, rejecting duplicates and out-of-range
    /// members.
    pub fn from_indices(universe: usize, members: &[usize]) -> Result<Self> {
        let mut s = Self::empty(universe);
        for &v in members {
            if v >= universe {
                return Err(Error::invalid(format!(
                    "element {v} out of range for ground set of size {universe}"
                )));
            }
            if !s.insert(v) {
                return Err(Error::invalid(format!("duplicate element {v}")));
            }
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "element {v} outside universe {}",
            self.universe
        );
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Inserts `v`; returns whether it was newly added.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "element {v} outside universe {}",
            self.universe
        );
        let w = &mut self.words[v / 64];
        let mask = 1u64 << (v % 64);
        if *w & mask != 0 {
            return false;
        }
        *w |= mask;
        self.len += 1;
        true
    }

    /// Removes `v`; returns whether it was present.
    pub fn remove(&mut self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "element {v} outside universe {}",
            self.universe
        );
        let w = &mut self.words[v / 64];
        let mask = 1u64 << (v % 64);
        if *w & mask == 0 {
            return false;
        }
        *w &= !mask;
        self.len -= 1;
        true
    }

    /// `self + v`.
    pub fn with(&self, v: usize) -> Self {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    /// `self - v`.
    pub fn without(&self, v: usize) -> Self {
        let mut s = self.clone();
        s.remove(v);
        s
    }

    /// Ascending iteration over members.
    pub fn iter(&self) -> SetIter<'_> {
        SetIter {
            set: self,
            word_idx: 0,
            current: if self.words.is_empty() {
                0
            } else {
                self.words[0]
            },
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_universe(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "set operation across different universes"
        );
    }

    fn binary_op(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        self.check_universe(other);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        ElementSet {
            words,
            universe: self.universe,
            len,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.binary_op(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.binary_op(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.binary_op(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.binary_op(other, |a, b| a ^ b)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & b == 0)
    }

    /// Smallest member, if any.
    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct SetIter<'a> {
    set: &'a ElementSet,
    word_idx: usize,
    current: u64,
}

impl Iterator for SetIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.set.words.len() {
                return None;
            }
            self.current = self.set.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * 64 + bit)
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = SetIter<'a>;

    fn into_iter(self) -> SetIter<'a> {
        self.iter()
    }
}
