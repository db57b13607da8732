//! Matroid oracles.
//!
//! A matroid `(V, I)` is accessed only through queries: [`IndependenceOracle`]
//! answers `S in I?`, [`RankOracle`] answers `rank(S)`. The concrete matroids
//! here cover distinct exchange-structure regimes for testing and
//! benchmarking: uniform, partition, graphic (union-find per query), and
//! linear over GF(2) (Gaussian elimination per query). Oracles are pure and
//! stateless per query; nothing is cached, so ledgers reflect the algorithm
//! rather than memoization.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::Counted;
use crate::set::{ElementSet, GroundSet};

/// Answers independence queries over a fixed ground set.
///
/// Implementations must satisfy the matroid axioms: downward closure
/// (subsets of independent sets are independent) and augmentation (a smaller
/// independent set extends from a larger one). The test suites check both by
/// enumeration on small instances.
pub trait IndependenceOracle {
    /// Ground set size. Every queried set must use this universe.
    fn n(&self) -> usize;

    /// Whether `s` is independent.
    ///
    /// Panics if `s` was built over a different universe; out-of-range
    /// members are impossible to express in an [`ElementSet`].
    fn is_independent(&self, s: &ElementSet) -> bool;

    fn ground(&self) -> GroundSet {
        GroundSet::new(self.n()).expect("oracle over empty ground set")
    }
}

/// Answers rank queries (size of a largest independent subset).
pub trait RankOracle: IndependenceOracle {
    fn rank_of(&self, s: &ElementSet) -> usize;
}

impl<M: IndependenceOracle + ?Sized> IndependenceOracle for &M {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        (**self).is_independent(s)
    }
}

impl<M: RankOracle + ?Sized> RankOracle for &M {
    fn rank_of(&self, s: &ElementSet) -> usize {
        (**self).rank_of(s)
    }
}

/// `U(n, r)`: independent iff cardinality at most `r`.
#[derive(Debug, Clone)]
pub struct UniformMatroid {
    n: usize,
    r: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        GroundSet::new(n)?;
        if r > n {
            return Err(Error::malformed(format!(
                "rank {r} exceeds ground set size {n}"
            )));
        }
        Ok(UniformMatroid { n, r })
    }
}

impl IndependenceOracle for UniformMatroid {
    fn n(&self) -> usize {
        self.n
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        assert_eq!(s.universe(), self.n);
        s.len() <= self.r
    }
}

impl RankOracle for UniformMatroid {
    fn rank_of(&self, s: &ElementSet) -> usize {
        assert_eq!(s.universe(), self.n);
        s.len().min(self.r)
    }
}

/// Ground set partitioned into classes with per-class capacities.
#[derive(Debug, Clone)]
pub struct PartitionMatroid {
    part_of: Vec<usize>,
    capacities: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(parts: &[Vec<usize>], capacities: &[usize]) -> Result<Self> {
        if parts.len() != capacities.len() {
            return Err(Error::malformed(format!(
                "{} parts but {} capacities",
                parts.len(),
                capacities.len()
            )));
        }
        let n: usize = parts.iter().map(|p| p.len()).sum();
        GroundSet::new(n)?;
        let mut part_of = vec![usize::MAX; n];
        for (idx, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= n {
                    return Err(Error::malformed(format!("element {v} out of range")));
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::malformed(format!(
                        "element {v} appears in two parts"
                    )));
                }
                part_of[v] = idx;
            }
        }
        if part_of.contains(&usize::MAX) {
            return Err(Error::malformed("parts do not cover the ground set"));
        }
        Ok(PartitionMatroid {
            part_of,
            capacities: capacities.to_vec(),
        })
    }

    fn counts(&self, s: &ElementSet) -> Vec<usize> {
        let mut counts = vec![0usize; self.capacities.len()];
        for v in s {
            counts[self.part_of[v]] += 1;
        }
        counts
    }
}

impl IndependenceOracle for PartitionMatroid {
    fn n(&self) -> usize {
        self.part_of.len()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        assert_eq!(s.universe(), self.n());
        self.counts(s)
            .iter()
            .zip(&self.capacities)
            .all(|(&c, &cap)| c <= cap)
    }
}

impl RankOracle for PartitionMatroid {
    fn rank_of(&self, s: &ElementSet) -> usize {
        assert_eq!(s.universe(), self.n());
        self.counts(s)
            .iter()
            .zip(&self.capacities)
            .map(|(&c, &cap)| c.min(cap))
            .sum()
    }
}

/// Elements are edges of a graph; independent sets are forests. A fresh
/// union-find is built per query to keep the oracle stateless.
#[derive(Debug, Clone)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        GroundSet::new(edges.len())?;
        for &(a, b) in &edges {
            if a >= vertices || b >= vertices {
                return Err(Error::malformed(format!(
                    "edge ({a},{b}) out of range for {vertices} vertices"
                )));
            }
        }
        Ok(GraphicMatroid { vertices, edges })
    }

    /// All `m(m-1)/2` edges of the complete graph `K_m` in lexicographic
    /// order; rank `m - 1`.
    pub fn complete(m: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(m * (m.saturating_sub(1)) / 2);
        for a in 0..m {
            for b in (a + 1)..m {
                edges.push((a, b));
            }
        }
        Self::new(m, edges)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    /// Size of the spanning forest of the member edges; `None` early-exits
    /// as soon as a cycle closes.
    fn forest_scan(&self, s: &ElementSet, stop_on_cycle: bool) -> Option<usize> {
        let mut uf = UnionFind::new(self.vertices);
        let mut forest = 0;
        for e in s {
            let (a, b) = self.edges[e];
            if uf.unite(a, b) {
                forest += 1;
            } else if stop_on_cycle {
                return None;
            }
        }
        Some(forest)
    }
}

impl IndependenceOracle for GraphicMatroid {
    fn n(&self) -> usize {
        self.edges.len()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        assert_eq!(s.universe(), self.n());
        self.forest_scan(s, true).is_some()
    }
}

impl RankOracle for GraphicMatroid {
    fn rank_of(&self, s: &ElementSet) -> usize {
        assert_eq!(s.universe(), self.n());
        self.forest_scan(s, false).expect("rank scan never aborts")
    }
}

/// Elements are columns of a 0/1 matrix; independence is linear independence
/// over GF(2), decided by Gaussian elimination per query.
#[derive(Debug, Clone)]
pub struct LinearMatroidGf2 {
    // column-major, each column packed into ceil(rows/64) words
    columns: Vec<Vec<u64>>,
}

impl LinearMatroidGf2 {
    pub fn new(matrix: &[Vec<u8>]) -> Result<Self> {
        let rows = matrix.len();
        if rows == 0 {
            return Err(Error::malformed("matrix has no rows"));
        }
        let n = matrix[0].len();
        GroundSet::new(n)?;
        if matrix.iter().any(|row| row.len() != n) {
            return Err(Error::malformed("matrix rows have unequal lengths"));
        }
        if matrix.iter().flatten().any(|&x| x > 1) {
            return Err(Error::malformed("matrix entries must be 0 or 1"));
        }
        let words = rows.div_ceil(64);
        let mut columns = vec![vec![0u64; words]; n];
        for (i, row) in matrix.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x == 1 {
                    columns[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(LinearMatroidGf2 { columns })
    }

    fn gf2_rank(&self, s: &ElementSet) -> usize {
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut rank = 0;
        for j in s {
            let mut col = self.columns[j].clone();
            for b in &basis {
                let pivot = first_set_word_bit(b).expect("basis vectors are nonzero");
                if col[pivot.0] >> pivot.1 & 1 == 1 {
                    for (c, bw) in col.iter_mut().zip(b) {
                        *c ^= bw;
                    }
                }
            }
            if col.iter().any(|&w| w != 0) {
                basis.push(col);
                rank += 1;
            }
        }
        rank
    }
}

fn first_set_word_bit(words: &[u64]) -> Option<(usize, u32)> {
    words
        .iter()
        .position(|&w| w != 0)
        .map(|i| (i, words[i].trailing_zeros()))
}

impl IndependenceOracle for LinearMatroidGf2 {
    fn n(&self) -> usize {
        self.columns.len()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        assert_eq!(s.universe(), self.n());
        self.gf2_rank(s) == s.len()
    }
}

impl RankOracle for LinearMatroidGf2 {
    fn rank_of(&self, s: &ElementSet) -> usize {
        assert_eq!(s.universe(), self.n());
        self.gf2_rank(s)
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn root(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    fn unite(&mut self, a: usize, b: usize) -> bool {
        let ra = self.root(a as u32);
        let rb = self.root(b as u32);
        if ra == rb {
            return false;
        }
        self.parent[ra as usize] = rb;
        true
    }
}

/// Scans `order` and keeps every element whose addition stays independent.
///
/// `order` must be a permutation of the ground set. The result is a basis and
/// the scan always issues exactly `n` independence queries.
pub fn greedy_basis<M: IndependenceOracle>(m: &Counted<M>, order: &[usize]) -> Result<ElementSet> {
    let n = m.n();
    if order.len() != n {
        return Err(Error::invalid(format!(
            "order has {} entries for ground set of size {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return Err(Error::invalid(
                "order is not a permutation of the ground set",
            ));
        }
        seen[v] = true;
    }
    let mut basis = ElementSet::empty(n);
    for &v in order {
        basis.insert(v);
        if !m.is_independent(&basis) {
            basis.remove(v);
        }
    }
    Ok(basis)
}

/// A greedy basis over a uniformly random permutation drawn from `rng`.
pub fn random_basis<M: IndependenceOracle, R: Rng>(
    m: &Counted<M>,
    rng: &mut R,
) -> Result<ElementSet> {
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.shuffle(rng);
    greedy_basis(m, &order)
}

/// On-disk matroid description.
///
/// ```json
/// {"type":"uniform","n":4,"rank":2}
/// {"type":"partition","n":4,"parts":[[0,1],[2,3]],"capacities":[1,1]}
/// {"type":"graphic","n":3,"edges":[[0,1],[1,2],[0,2]]}
/// {"type":"linear_gf2","n":3,"matrix":[[1,0,1],[0,1,1]]}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidInstance {
    Uniform {
        n: usize,
        rank: usize,
    },
    Partition {
        n: usize,
        parts: Vec<Vec<usize>>,
        capacities: Vec<usize>,
    },
    Graphic {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
    LinearGf2 {
        n: usize,
        matrix: Vec<Vec<u8>>,
    },
}

impl MatroidInstance {
    pub fn build(&self) -> Result<AnyMatroid> {
        match self {
            MatroidInstance::Uniform { n, rank } => {
                Ok(AnyMatroid::Uniform(UniformMatroid::new(*n, *rank)?))
            }
            MatroidInstance::Partition {
                n,
                parts,
                capacities,
            } => {
                let m = PartitionMatroid::new(parts, capacities)?;
                if m.n() != *n {
                    return Err(Error::malformed(format!(
                        "parts cover {} elements but n = {n}",
                        m.n()
                    )));
                }
                Ok(AnyMatroid::Partition(m))
            }
            MatroidInstance::Graphic { n, edges } => {
                if edges.len() != *n {
                    return Err(Error::malformed(format!(
                        "{} edges but n = {n}",
                        edges.len()
                    )));
                }
                let vertices = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
                Ok(AnyMatroid::Graphic(GraphicMatroid::new(
                    vertices,
                    edges.clone(),
                )?))
            }
            MatroidInstance::LinearGf2 { n, matrix } => {
                let m = LinearMatroidGf2::new(matrix)?;
                if m.n() != *n {
                    return Err(Error::malformed(format!(
                        "matrix has {} columns but n = {n}",
                        m.n()
                    )));
                }
                Ok(AnyMatroid::LinearGf2(m))
            }
        }
    }

    pub fn from_json(text: &str) -> Result<AnyMatroid> {
        let inst: MatroidInstance =
            serde_json::from_str(text).map_err(|e| Error::malformed(e.to_string()))?;
        inst.build()
    }
}

/// Any shipped matroid kind, dispatching oracle calls.
#[derive(Debug, Clone)]
pub enum AnyMatroid {
    Uniform(UniformMatroid),
    Partition(PartitionMatroid),
    Graphic(GraphicMatroid),
    LinearGf2(LinearMatroidGf2),
}

impl IndependenceOracle for AnyMatroid {
    fn n(&self) -> usize {
        match self {
            AnyMatroid::Uniform(m) => m.n(),
            AnyMatroid::Partition(m) => m.n(),
            AnyMatroid::Graphic(m) => m.n(),
            AnyMatroid::LinearGf2(m) => m.n(),
        }
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        match self {
            AnyMatroid::Uniform(m) => m.is_independent(s),
            AnyMatroid::Partition(m) => m.is_independent(s),
            AnyMatroid::Graphic(m) => m.is_independent(s),
            AnyMatroid::LinearGf2(m) => m.is_independent(s),
        }
    }
}

impl RankOracle for AnyMatroid {
    fn rank_of(&self, s: &ElementSet) -> usize {
        match self {
            AnyMatroid::Uniform(m) => m.rank_of(s),
            AnyMatroid::Partition(m) => m.rank_of(s),
            AnyMatroid::Graphic(m) => m.rank_of(s),
            AnyMatroid::LinearGf2(m) => m.rank_of(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> GraphicMatroid {
        // edges 0=(0,1), 1=(1,2), 2=(0,2) form a cycle
        GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn set(n: usize, members: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, members).unwrap()
    }

    #[test]
    fn uniform_independence() {
        let m = Counted::new(UniformMatroid::new(4, 2).unwrap());
        assert!(m.is_independent(&set(4, &[0, 1])));
        assert!(!m.is_independent(&set(4, &[0, 1, 2])));
        assert_eq!(m.ledger().independence_queries(), 2);
    }

    #[test]
    fn triangle_cycle_is_dependent() {
        let m = Counted::new(triangle());
        assert!(!m.is_independent(&set(3, &[0, 1, 2])));
        assert_eq!(m.rank_of(&set(3, &[0, 1, 2])), 2);
        assert_eq!(m.rank_of(&ElementSet::empty(3)), 0);
    }

    #[test]
    fn partition_rank() {
        let m = PartitionMatroid::new(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap();
        assert_eq!(m.rank_of(&set(4, &[0, 1, 2])), 2);
        assert!(m.is_independent(&set(4, &[1, 3])));
        assert!(!m.is_independent(&set(4, &[0, 1])));
    }

    #[test]
    fn linear_gf2_rank() {
        // columns: e1, e2, e1+e2
        let m = LinearMatroidGf2::new(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert!(m.is_independent(&set(3, &[0, 1])));
        assert!(!m.is_independent(&set(3, &[0, 1, 2])));
        assert_eq!(m.rank_of(&set(3, &[0, 1, 2])), 2);
        assert_eq!(m.rank_of(&set(3, &[2])), 1);
    }

    #[test]
    fn greedy_basis_examples() {
        let u = Counted::new(UniformMatroid::new(4, 2).unwrap());
        assert_eq!(
            greedy_basis(&u, &[0, 1, 2, 3]).unwrap().to_vec(),
            vec![0, 1]
        );
        assert_eq!(u.ledger().independence_queries(), 4);

        let g = Counted::new(triangle());
        assert_eq!(greedy_basis(&g, &[2, 1, 0]).unwrap().to_vec(), vec![1, 2]);

        let p = Counted::new(PartitionMatroid::new(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap());
        assert_eq!(
            greedy_basis(&p, &[1, 0, 3, 2]).unwrap().to_vec(),
            vec![1, 3]
        );
    }

    #[test]
    fn greedy_basis_rejects_non_permutations() {
        let u = Counted::new(UniformMatroid::new(4, 2).unwrap());
        assert!(greedy_basis(&u, &[0, 1, 2]).is_err());
        assert!(greedy_basis(&u, &[0, 1, 2, 2]).is_err());
    }

    #[test]
    fn random_basis_is_deterministic_per_seed() {
        let m = Counted::new(GraphicMatroid::complete(5).unwrap());
        let a = random_basis(&m, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = random_basis(&m, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let c = random_basis(&m, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert!(m.is_independent(&c));
    }

    #[test]
    fn free_matroid_has_one_basis() {
        let m = Counted::new(UniformMatroid::new(3, 3).unwrap());
        let b = random_basis(&m, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(b.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn random_basis_hits_every_triangle_basis() {
        // the triangle has exactly 3 two-edge bases; chi-square over 3000
        // draws with 2 dof, cutoff 13.8 (p ~ 0.001)
        let m = Counted::new(triangle());
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..3000 {
            let b = random_basis(&m, &mut rng).unwrap();
            *counts.entry(b.to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 3);
        let expected = 1000.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 13.8, "chi2 = {chi2}");
    }

    #[test]
    fn instance_json_round_trips() {
        let m = MatroidInstance::from_json(
            r#"{"type":"partition","n":4,"parts":[[0,1],[2,3]],"capacities":[1,1]}"#,
        )
        .unwrap();
        assert_eq!(m.n(), 4);
        assert!(MatroidInstance::from_json(r#"{"type":"uniform","n":4,"rank":9}"#).is_err());
        assert!(MatroidInstance::from_json(r#"{"type":"graphic","n":2,"edges":[[0,1]]}"#).is_err());
        let g =
            MatroidInstance::from_json(r#"{"type":"graphic","n":3,"edges":[[0,1],[1,2],[0,2]]}"#)
                .unwrap();
        assert!(!g.is_independent(&set(3, &[0, 1, 2])));
    }
}
