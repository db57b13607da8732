//! Classic swap rounding.
//!
//! Two bases are merged by repeatedly locating a strongly exchangeable pair
//! `(u, v)` with a linear scan and resolving it with a weighted coin: `B1`
//! absorbs `v` with probability `β2 / (β1 + β2)`, otherwise `B2` absorbs `u`.
//! Each resolution removes one element from `B1 \ B2` and one from
//! `B2 \ B1`, so a merge finishes in `|B1 \ B2|` rounds and
//! `O(r)` queries per round: `O(r^2)` per merge, `O(r^2 t)` for a full
//! rounding pass. The per-step expectation `E[β1 1_{B1'} + β2 1_{B2'}] =
//! β1 1_{B1} + β2 1_{B2}` is what makes the output basis `S` satisfy
//! `E[f(S)] ≥ F(x)` for every submodular `f`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exchange::{find_strong_exchange_pair, ExchangePair};
use crate::ledger::Counted;
use crate::matroid::IndependenceOracle;
use crate::rounding::ConvexCombination;
use crate::set::ElementSet;

/// Measured bound: a merge of bases with difference `d = |b1 \ b2|` uses at
/// most `C * r * d` independence queries, `C` this constant (each round
/// scans at most `r` candidates at two queries apiece).
pub const MERGE_QUERY_CONSTANT: u64 = 2;

/// Resolves one strongly exchangeable pair with a weighted coin.
///
/// With probability `beta2 / (beta1 + beta2)` returns `(b1 + v - u, b2)`,
/// otherwise `(b1, b2 + u - v)`. Either branch removes both `u` and `v` from
/// the symmetric difference. The pair is checked structurally
/// (`u ∈ b1 \ b2`, `v ∈ b2 \ b1`); its two independence conditions are the
/// caller's contract.
pub fn update_via_strong_basis_exchange<R: Rng>(
    beta1: f64,
    b1: ElementSet,
    beta2: f64,
    b2: ElementSet,
    pair: ExchangePair,
    rng: &mut R,
) -> Result<(ElementSet, ElementSet)> {
    check_weights(beta1, beta2)?;
    let ExchangePair { u, v } = pair;
    if !b1.contains(u) || b2.contains(u) {
        return Err(Error::invalid(format!(
            "pair element {u} is not in b1 \\ b2"
        )));
    }
    if !b2.contains(v) || b1.contains(v) {
        return Err(Error::invalid(format!(
            "pair element {v} is not in b2 \\ b1"
        )));
    }
    if rng.random::<f64>() < beta2 / (beta1 + beta2) {
        Ok((b1.with(v).without(u), b2))
    } else {
        let b2 = b2.with(u).without(v);
        Ok((b1, b2))
    }
}

/// Merges two bases into one, weighted by `beta1 : beta2`.
///
/// Picks the smallest element of `b1 \ b2` each round, finds its strongly
/// exchangeable partner by scan, and resolves. `|b1 \ b2|` strictly
/// decreases every round; identical bases return immediately with zero
/// queries.
pub fn merge_bases<M: IndependenceOracle, R: Rng>(
    beta1: f64,
    mut b1: ElementSet,
    beta2: f64,
    mut b2: ElementSet,
    m: &Counted<M>,
    rng: &mut R,
) -> Result<ElementSet> {
    check_weights(beta1, beta2)?;
    if b1.universe() != m.n() || b2.universe() != m.n() {
        return Err(Error::invalid("bases do not match the oracle's ground set"));
    }
    let initial_difference = b1.difference(&b2).len();
    let mut rounds = 0usize;
    while b1 != b2 {
        if rounds > initial_difference {
            return Err(Error::NoProgress(
                "merge failed to converge; oracle is not a matroid".into(),
            ));
        }
        let u = b1.difference(&b2).min().expect("b1 != b2 and |b1| = |b2|");
        let pair = find_strong_exchange_pair(m, &b1, &b2, u)?;
        (b1, b2) = update_via_strong_basis_exchange(beta1, b1, beta2, b2, pair, rng)?;
        rounds += 1;
    }
    // every resolution removes one element from each one-sided difference
    debug_assert_eq!(rounds, initial_difference);
    Ok(b1)
}

/// Rounds a convex combination of bases to a single basis by folding
/// [`merge_bases`] left to right with accumulated weights.
pub fn swap_round<M: IndependenceOracle, R: Rng>(
    x: &ConvexCombination,
    m: &Counted<M>,
    rng: &mut R,
) -> Result<ElementSet> {
    let terms = x.terms();
    let (mut gamma, mut current) = (terms[0].0, terms[0].1.clone());
    for (beta, basis) in &terms[1..] {
        current = merge_bases(gamma, current, *beta, basis.clone(), m, rng)?;
        gamma += beta;
    }
    Ok(current)
}

pub(crate) fn check_weights(beta1: f64, beta2: f64) -> Result<()> {
    if beta1.is_nan()
        || beta2.is_nan()
        || beta1 < 0.0
        || beta2 < 0.0
        || beta1.is_infinite()
        || beta2.is_infinite()
    {
        return Err(Error::invalid("weights must be non-negative and finite"));
    }
    if beta1 + beta2 <= 0.0 {
        return Err(Error::invalid("weights must not both be zero"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::GraphicMatroid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(n: usize, members: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, members).unwrap()
    }

    fn triangle() -> Counted<GraphicMatroid> {
        Counted::new(GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap())
    }

    #[test]
    fn zero_beta2_always_updates_b2() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (b1, b2) = update_via_strong_basis_exchange(
                1.0,
                set(3, &[0, 1]),
                0.0,
                set(3, &[1, 2]),
                ExchangePair { u: 0, v: 2 },
                &mut rng,
            )
            .unwrap();
            assert_eq!(b1.to_vec(), vec![0, 1]);
            assert_eq!(b2.to_vec(), vec![0, 1]);
        }
    }

    #[test]
    fn heads_merges_triangle_bases() {
        // beta2 = 1 forces heads: b1 <- b1 + v - u = b2
        let (b1, b2) = update_via_strong_basis_exchange(
            0.0,
            set(3, &[0, 1]),
            1.0,
            set(3, &[1, 2]),
            ExchangePair { u: 0, v: 2 },
            &mut ChaCha8Rng::seed_from_u64(2),
        )
        .unwrap();
        assert_eq!(b1, b2);
        assert_eq!(b1.to_vec(), vec![1, 2]);
    }

    #[test]
    fn branch_frequencies_are_fair() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 20_000;
        let mut heads = 0usize;
        for _ in 0..trials {
            let (b1, _) = update_via_strong_basis_exchange(
                0.5,
                set(3, &[0, 1]),
                0.5,
                set(3, &[1, 2]),
                ExchangePair { u: 0, v: 2 },
                &mut rng,
            )
            .unwrap();
            if b1.contains(2) {
                heads += 1;
            }
        }
        let freq = heads as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "heads frequency {freq}");
    }

    #[test]
    fn invalid_pair_is_rejected() {
        let bad = update_via_strong_basis_exchange(
            0.5,
            set(3, &[0, 1]),
            0.5,
            set(3, &[1, 2]),
            ExchangePair { u: 1, v: 2 }, // u is common to both bases
            &mut ChaCha8Rng::seed_from_u64(4),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn merge_identical_bases_is_free() {
        let m = triangle();
        let b = set(3, &[0, 1]);
        let merged = merge_bases(
            0.5,
            b.clone(),
            0.5,
            b.clone(),
            &m,
            &mut ChaCha8Rng::seed_from_u64(5),
        )
        .unwrap();
        assert_eq!(merged, b);
        assert_eq!(m.ledger().independence_queries(), 0);
    }

    #[test]
    fn merge_triangle_reaches_an_input_basis() {
        // one swap merges {0,1} and {1,2}; the result is always one of them
        let m = triangle();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let merged =
                merge_bases(0.5, set(3, &[0, 1]), 0.5, set(3, &[1, 2]), &m, &mut rng).unwrap();
            let got = merged.to_vec();
            assert!(got == vec![0, 1] || got == vec![1, 2], "got {got:?}");
        }
    }

    #[test]
    fn merge_round_count_matches_difference() {
        // |b1 Δ b2| = 2k needs exactly k resolutions; count via query bound
        let m = Counted::new(GraphicMatroid::complete(6).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b1 = crate::matroid::random_basis(&m, &mut rng).unwrap();
        let b2 = crate::matroid::random_basis(&m, &mut rng).unwrap();
        let d = b1.difference(&b2).len() as u64;
        let before = m.ledger().independence_queries();
        merge_bases(0.4, b1.clone(), 0.6, b2.clone(), &m, &mut rng).unwrap();
        let used = m.ledger().independence_queries() - before;
        let r = b1.len() as u64;
        assert!(
            used <= MERGE_QUERY_CONSTANT * r * d,
            "used {used} queries for d = {d}"
        );
    }

    #[test]
    fn universe_mismatch_is_an_input_error() {
        let m = triangle();
        let b1 = ElementSet::from_indices(4, &[0, 1]).unwrap();
        let b2 = ElementSet::from_indices(4, &[1, 2]).unwrap();
        let bad = merge_bases(0.5, b1, 0.5, b2, &m, &mut ChaCha8Rng::seed_from_u64(10));
        assert!(bad.is_err());
    }

    #[test]
    fn single_term_swap_round_is_identity() {
        let m = triangle();
        let x = ConvexCombination::new(vec![(1.0, set(3, &[0, 1]))]).unwrap();
        let s = swap_round(&x, &m, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(s.to_vec(), vec![0, 1]);
        assert_eq!(m.ledger().independence_queries(), 0);
    }

    #[test]
    fn identical_terms_round_to_that_basis() {
        let m = triangle();
        let b = set(3, &[1, 2]);
        let x = ConvexCombination::equal_weight(vec![b.clone(), b.clone(), b.clone()]).unwrap();
        let s = swap_round(&x, &m, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(s, b);
    }
}
