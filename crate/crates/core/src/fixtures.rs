//! Reference instances used by the verification suites, the benchmark
//! driver, and the test suites: fixed fixtures plus seeded generators of
//! small random instances. Everything here is deterministic given the seed.

use rand::Rng;

use crate::error::Result;
use crate::matroid::{
    AnyMatroid, GraphicMatroid, LinearMatroidGf2, PartitionMatroid, UniformMatroid,
};
use crate::set::ElementSet;
use crate::submodular::{
    AnySubmodular, ConcaveCardinality, CoverageFunction, FacilityLocation, TableFunction,
};

/// The cycle graph on three vertices: edges 0=(0,1), 1=(1,2), 2=(0,2).
pub fn triangle() -> GraphicMatroid {
    GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2)]).expect("static fixture")
}

/// Lexicographic index of edge `(a, b)` in [`GraphicMatroid::complete`]'s
/// edge order, `a < b < m`.
pub fn complete_edge_index(m: usize, a: usize, b: usize) -> usize {
    assert!(a < b && b < m, "edge ({a},{b}) not in K_{m}");
    a * (2 * m - a - 1) / 2 + (b - a - 1)
}

fn edge_set(m: usize, edges: &[(usize, usize)]) -> ElementSet {
    let n = m * (m - 1) / 2;
    let indices: Vec<usize> = edges
        .iter()
        .map(|&(a, b)| complete_edge_index(m, a.min(b), a.max(b)))
        .collect();
    ElementSet::from_indices(n, &indices).expect("static fixture")
}

/// Two edge-disjoint spanning trees of `K_6` (both Hamiltonian paths), so
/// their exchange digraph has ten vertices and hosts long cycles.
pub fn k6_disjoint_tree_pair() -> (GraphicMatroid, ElementSet, ElementSet) {
    let m = GraphicMatroid::complete(6).expect("static fixture");
    let b1 = edge_set(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
    let b2 = edge_set(6, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 5)]);
    (m, b1, b2)
}

/// A star and a Hamiltonian path of `K_m` (sharing one edge): the path tree
/// gives the star's long edges large indegree in the exchange digraph, which
/// exercises the sampled cycle search's tail behavior.
pub fn star_path_pair(m: usize) -> Result<(GraphicMatroid, ElementSet, ElementSet)> {
    let g = GraphicMatroid::complete(m)?;
    let star: Vec<(usize, usize)> = (1..m).map(|j| (0, j)).collect();
    let path: Vec<(usize, usize)> = (0..m - 1).map(|j| (j, j + 1)).collect();
    Ok((g, edge_set(m, &star), edge_set(m, &path)))
}

/// A twelve-element coverage objective over 24 points, paired with
/// [`partition_12`]; overlaps inside each part make the per-part choice
/// matter.
pub fn coverage_12() -> CoverageFunction {
    let sets: Vec<Vec<usize>> = vec![
        vec![0, 1, 2, 3, 4, 5],
        vec![0, 1, 2, 6, 7],
        vec![8, 9],
        vec![10, 11, 12, 13],
        vec![10, 11, 14, 15],
        vec![16],
        vec![17, 18, 19],
        vec![17, 20],
        vec![21],
        vec![22, 23, 0],
        vec![22, 5, 6],
        vec![23, 12],
    ];
    CoverageFunction::new(24, &sets).expect("static fixture")
}

/// Four parts of three elements, one pick per part: rank 4.
pub fn partition_12() -> PartitionMatroid {
    PartitionMatroid::new(
        &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11]],
        &[1, 1, 1, 1],
    )
    .expect("static fixture")
}

/// A random small matroid of a random kind, with `2 <= n <= max_n`
/// elements. Graphic instances may carry parallel edges.
pub fn random_small_matroid<R: Rng>(rng: &mut R, max_n: usize) -> AnyMatroid {
    let max_n = max_n.max(2);
    match rng.random_range(0..4u8) {
        0 => {
            let n = rng.random_range(2..=max_n);
            let r = rng.random_range(1..=n);
            AnyMatroid::Uniform(UniformMatroid::new(n, r).expect("generated in range"))
        }
        1 => {
            let n = rng.random_range(2..=max_n);
            let part_count = rng.random_range(1..=n);
            let mut parts: Vec<Vec<usize>> = vec![Vec::new(); part_count];
            for v in 0..n {
                parts[rng.random_range(0..part_count)].push(v);
            }
            parts.retain(|p| !p.is_empty());
            let caps: Vec<usize> = parts
                .iter()
                .map(|p| rng.random_range(1..=p.len().max(1)))
                .collect();
            AnyMatroid::Partition(
                PartitionMatroid::new(&parts, &caps).expect("generated partition"),
            )
        }
        2 => {
            let vertices = rng.random_range(3..=6);
            let n = rng.random_range(2..=max_n);
            let edges: Vec<(usize, usize)> = (0..n)
                .map(|_| {
                    let a = rng.random_range(0..vertices - 1);
                    let b = rng.random_range(a + 1..vertices);
                    (a, b)
                })
                .collect();
            AnyMatroid::Graphic(GraphicMatroid::new(vertices, edges).expect("generated graph"))
        }
        _ => {
            let n = rng.random_range(2..=max_n);
            let rows = rng.random_range(1..=5);
            let matrix: Vec<Vec<u8>> = (0..rows)
                .map(|_| (0..n).map(|_| rng.random_range(0..2u8)).collect())
                .collect();
            AnyMatroid::LinearGf2(LinearMatroidGf2::new(&matrix).expect("generated matrix"))
        }
    }
}

/// A random small monotone submodular oracle over exactly `n` elements.
/// Table instances are built as coverage functions evaluated exhaustively,
/// which keeps them genuinely monotone and submodular.
pub fn random_small_submodular<R: Rng>(rng: &mut R, n: usize) -> AnySubmodular {
    match rng.random_range(0..4u8) {
        0 => {
            let universe = rng.random_range(1..=2 * n + 2);
            let sets: Vec<Vec<usize>> = (0..n)
                .map(|_| {
                    (0..universe)
                        .filter(|_| rng.random::<f64>() < 0.4)
                        .collect()
                })
                .collect();
            AnySubmodular::Coverage(CoverageFunction::new(universe, &sets).expect("generated"))
        }
        1 => {
            let clients = rng.random_range(1..=4);
            let weights: Vec<Vec<f64>> = (0..clients)
                .map(|_| (0..n).map(|_| rng.random_range(0.0..5.0)).collect())
                .collect();
            AnySubmodular::FacilityLocation(FacilityLocation::new(weights).expect("generated"))
        }
        2 => AnySubmodular::ConcaveCard(
            ConcaveCardinality::new(n, rng.random_range(0..=n)).expect("generated"),
        ),
        _ => {
            let universe = rng.random_range(1..=n + 3);
            let sets: Vec<Vec<usize>> = (0..n)
                .map(|_| {
                    (0..universe)
                        .filter(|_| rng.random::<f64>() < 0.5)
                        .collect()
                })
                .collect();
            let cover = CoverageFunction::new(universe, &sets).expect("generated");
            let values: Vec<f64> = (0..1usize << n)
                .map(|mask| {
                    let members: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                    use crate::submodular::ValueOracle;
                    cover.value(&ElementSet::from_indices(n, &members).expect("mask members"))
                })
                .collect();
            AnySubmodular::Table(TableFunction::new(values).expect("generated table"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::Counted;
    use crate::matroid::IndependenceOracle;
    use crate::submodular::ValueOracle;

    #[test]
    fn edge_index_matches_complete_enumeration() {
        let g = GraphicMatroid::complete(7).unwrap();
        for (idx, &(a, b)) in g.edges().iter().enumerate() {
            assert_eq!(complete_edge_index(7, a, b), idx);
        }
    }

    #[test]
    fn k6_pair_is_two_disjoint_spanning_trees() {
        let (g, b1, b2) = k6_disjoint_tree_pair();
        let m = Counted::new(g);
        assert_eq!(b1.len(), 5);
        assert_eq!(b2.len(), 5);
        assert!(b1.is_disjoint_from(&b2));
        assert!(m.is_independent(&b1));
        assert!(m.is_independent(&b2));
    }

    #[test]
    fn star_path_pair_shares_one_edge() {
        let (g, b1, b2) = star_path_pair(8).unwrap();
        let m = Counted::new(g);
        assert!(m.is_independent(&b1));
        assert!(m.is_independent(&b2));
        assert_eq!(b1.intersection(&b2).len(), 1);
    }

    #[test]
    fn coverage_12_matches_the_partition() {
        let f = coverage_12();
        let m = partition_12();
        assert_eq!(f.n(), 12);
        assert_eq!(m.n(), 12);
    }
}
