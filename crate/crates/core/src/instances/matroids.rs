//! Concrete matroid families used as oracles.
//!
//! All of them are stateless: every query rebuilds whatever scratch structure
//! it needs (part counts, a union-find, an echelon basis) from the argument.

use crate::error::{Error, Result};
use crate::oracle::Matroid;
use crate::set::ElementSet;

/// `U_{k,n}`: every set of size at most `k` is independent.
#[derive(Clone, Debug)]
pub struct UniformMatroid {
    n: usize,
    k: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, k }
    }
}

impl Matroid for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        s.len() <= self.k
    }

    fn rank(&self, s: &ElementSet) -> usize {
        s.len().min(self.k)
    }
}

/// Elements are split into parts; a set is independent when it uses at most
/// `capacity[p]` elements of each part `p`.
#[derive(Clone, Debug)]
pub struct PartitionMatroid {
    part_of: Vec<u32>,
    capacities: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(n: usize, parts: Vec<Vec<u32>>, capacities: Vec<usize>) -> Result<Self> {
        if parts.len() != capacities.len() {
            return Err(Error::InvalidSpec {
                field: "capacities".into(),
                reason: format!("{} parts but {} capacities", parts.len(), capacities.len()),
            });
        }
        let mut part_of = vec![u32::MAX; n];
        for (p, members) in parts.iter().enumerate() {
            for &e in members {
                let slot = part_of.get_mut(e as usize).ok_or_else(|| Error::InvalidSpec {
                    field: format!("parts[{p}]"),
                    reason: format!("element {e} is outside [0, {n})"),
                })?;
                if *slot != u32::MAX {
                    return Err(Error::InvalidSpec {
                        field: format!("parts[{p}]"),
                        reason: format!("element {e} already belongs to part {slot}"),
                    });
                }
                *slot = p as u32;
            }
        }
        if let Some(e) = part_of.iter().position(|&p| p == u32::MAX) {
            return Err(Error::InvalidSpec {
                field: "parts".into(),
                reason: format!("element {e} is not covered by any part"),
            });
        }
        Ok(Self { part_of, capacities })
    }

    /// Sorted part ids of the members of `s`, one entry per member.
    fn part_ids(&self, s: &ElementSet) -> Vec<u32> {
        let mut ids: Vec<u32> = s.iter().map(|e| self.part_of[e.index()]).collect();
        ids.sort_unstable();
        ids
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.part_of.len()
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        self.part_ids(s)
            .chunk_by(|a, b| a == b)
            .all(|run| run.len() <= self.capacities[run[0] as usize])
    }

    fn rank(&self, s: &ElementSet) -> usize {
        self.part_ids(s)
            .chunk_by(|a, b| a == b)
            .map(|run| run.len().min(self.capacities[run[0] as usize]))
            .sum()
    }
}

/// Union-find over `0..len`, rebuilt for every query.
struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// False when `a` and `b` were already connected.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        true
    }
}

/// Cycle matroid of a multigraph; element `i` is edge `i`.
#[derive(Clone, Debug)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(u32, u32)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u as usize >= vertices || v as usize >= vertices {
                return Err(Error::InvalidSpec {
                    field: format!("edges[{i}]"),
                    reason: format!("endpoint outside [0, {vertices})"),
                });
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Number of edges of `s` that join two components (the rank), stopping at
    /// the first cycle when `stop_on_cycle` is set.
    fn forest_size(&self, s: &ElementSet, stop_on_cycle: bool) -> Option<usize> {
        // compact the touched vertices so the union-find is O(|s|)
        let mut touched: Vec<u32> = s
            .iter()
            .flat_map(|e| {
                let (u, v) = self.edges[e.index()];
                [u, v]
            })
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let local = |x: u32| touched.binary_search(&x).expect("touched vertex") as u32;
        let mut dsu = DisjointSets::new(touched.len());
        let mut merged = 0;
        for e in s {
            let (u, v) = self.edges[e.index()];
            if dsu.union(local(u), local(v)) {
                merged += 1;
            } else if stop_on_cycle {
                return None;
            }
        }
        Some(merged)
    }
}

impl Matroid for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        self.forest_size(s, true).is_some()
    }

    fn rank(&self, s: &ElementSet) -> usize {
        self.forest_size(s, false).unwrap_or(0)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Column matroid of a matrix over GF(p); element `i` is column `i`.
#[derive(Clone, Debug)]
pub struct LinearMatroid {
    p: u64,
    dim: usize,
    columns: Vec<Vec<u64>>,
}

pub const MAX_PRIME: u64 = 1 << 31;

impl LinearMatroid {
    pub fn new(p: u64, columns: Vec<Vec<i64>>) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidSpec {
                field: "p".into(),
                reason: format!("{p} is not a prime below 2^31"),
            });
        }
        let dim = columns.first().map_or(0, Vec::len);
        let mut reduced = Vec::with_capacity(columns.len());
        for (i, col) in columns.into_iter().enumerate() {
            if col.len() != dim {
                return Err(Error::InvalidSpec {
                    field: format!("columns[{i}]"),
                    reason: format!("dimension {} differs from {dim}", col.len()),
                });
            }
            reduced.push(col.into_iter().map(|x| x.rem_euclid(p as i64) as u64).collect());
        }
        Ok(Self { p, dim, columns: reduced })
    }

    fn inverse(&self, a: u64) -> u64 {
        // Fermat: a^(p-2) mod p
        let (mut base, mut exp, mut acc) = (a % self.p, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    /// Gaussian elimination over GF(p). Returns the rank, or `None` as soon as
    /// a dependent column shows up when `stop_on_dependent` is set.
    fn eliminate(&self, s: &ElementSet, stop_on_dependent: bool) -> Option<usize> {
        let p = self.p;
        // basis rows kept normalized: row[pivot] == 1
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for e in s {
            if basis.len() == self.dim {
                if stop_on_dependent {
                    return None;
                }
                break;
            }
            let mut v = self.columns[e.index()].clone();
            for (pivot, row) in &basis {
                let factor = v[*pivot];
                if factor != 0 {
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = (*x + p - factor * r % p) % p;
                    }
                }
            }
            match v.iter().position(|&x| x != 0) {
                Some(pivot) => {
                    let inv = self.inverse(v[pivot]);
                    for x in v.iter_mut() {
                        *x = *x * inv % p;
                    }
                    basis.push((pivot, v));
                }
                None if stop_on_dependent => return None,
                None => {}
            }
        }
        Some(basis.len())
    }
}

impl Matroid for LinearMatroid {
    fn ground_size(&self) -> usize {
        self.columns.len()
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        self.eliminate(s, true).is_some()
    }

    fn rank(&self, s: &ElementSet) -> usize {
        self.eliminate(s, false).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_two_of_four() {
        let m = UniformMatroid::new(4, 2);
        assert!(m.is_independent(&ElementSet::from([0, 3])));
        assert!(!m.is_independent(&ElementSet::from([0, 1, 3])));
        assert_eq!(m.rank(&ElementSet::full(4)), 2);
    }

    #[test]
    fn partition_capacity_and_rank() {
        let m = PartitionMatroid::new(5, vec![vec![0, 1, 2], vec![3, 4]], vec![2, 1]).unwrap();
        assert!(m.is_independent(&ElementSet::from([0, 2, 4])));
        assert!(!m.is_independent(&ElementSet::from([0, 1, 2])));
        assert_eq!(m.rank(&ElementSet::full(5)), 3);
    }

    #[test]
    fn partition_rejects_bad_cover() {
        assert!(PartitionMatroid::new(3, vec![vec![0, 1]], vec![1]).is_err());
        assert!(PartitionMatroid::new(2, vec![vec![0, 1], vec![1]], vec![1, 1]).is_err());
        assert!(PartitionMatroid::new(2, vec![vec![0, 1]], vec![1, 1]).is_err());
    }

    #[test]
    fn graphic_triangle_is_dependent() {
        let m = GraphicMatroid::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!m.is_independent(&ElementSet::from([0, 1, 2])));
        assert!(m.is_independent(&ElementSet::from([0, 2])));
        assert_eq!(m.rank(&ElementSet::full(3)), 2);
    }

    #[test]
    fn graphic_loops_and_parallel_edges() {
        let m = GraphicMatroid::new(2, vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(!m.is_independent(&ElementSet::from([0])));
        assert!(!m.is_independent(&ElementSet::from([1, 2])));
        assert_eq!(m.rank(&ElementSet::full(3)), 1);
    }

    #[test]
    fn linear_gf2_rank() {
        let m = LinearMatroid::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(&ElementSet::from([0, 1, 2])), 2);
        assert!(m.is_independent(&ElementSet::from([1, 2])));
        assert!(!m.is_independent(&ElementSet::from([0, 1, 2])));
    }

    #[test]
    fn linear_gf5_dependence_needs_inverses() {
        // (1,2) and (3,1) over GF(5): 3*(1,2) = (3,6) = (3,1), so they are parallel.
        let m = LinearMatroid::new(5, vec![vec![1, 2], vec![3, 1], vec![0, 1]]).unwrap();
        assert!(!m.is_independent(&ElementSet::from([0, 1])));
        assert_eq!(m.rank(&ElementSet::from([0, 1])), 1);
        assert_eq!(m.rank(&ElementSet::full(3)), 2);
    }

    #[test]
    fn linear_rejects_composite_modulus_and_ragged_columns() {
        assert!(LinearMatroid::new(4, vec![vec![1]]).is_err());
        assert!(LinearMatroid::new(3, vec![vec![1], vec![1, 2]]).is_err());
    }
}
