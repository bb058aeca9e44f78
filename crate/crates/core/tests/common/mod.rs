//! Reference oracles written independently of the library: matroid
//! independence straight from the instance spec, brute-force and matching
//! optima, and a naive exchange-graph BFS.

#![allow(dead_code)]

use std::collections::VecDeque;

use matroidx::instances::{InstanceFile, MatroidSpec};

/// A matroid evaluated directly from its spec, on plain `u32` sets.
pub enum RefMatroid {
    Uniform(usize),
    Partition { part_of: Vec<usize>, caps: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Linear { p: i64, columns: Vec<Vec<i64>> },
}

impl RefMatroid {
    pub fn from_spec(spec: &MatroidSpec, n: usize) -> Self {
        match spec {
            MatroidSpec::Uniform { k } => RefMatroid::Uniform(*k),
            MatroidSpec::Partition { parts, capacities } => {
                let mut part_of = vec![usize::MAX; n];
                for (i, p) in parts.iter().enumerate() {
                    for &e in p {
                        part_of[e as usize] = i;
                    }
                }
                RefMatroid::Partition { part_of, caps: capacities.clone() }
            }
            MatroidSpec::Graphic { vertices, edges } => RefMatroid::Graphic {
                vertices: *vertices,
                edges: edges.iter().map(|&[u, v]| (u as usize, v as usize)).collect(),
            },
            MatroidSpec::Linear { p, columns } => RefMatroid::Linear {
                p: *p as i64,
                columns: columns.clone(),
            },
        }
    }

    pub fn rank(&self, s: &[u32]) -> usize {
        match self {
            RefMatroid::Uniform(k) => s.len().min(*k),
            RefMatroid::Partition { part_of, caps } => {
                let mut used = vec![0usize; caps.len()];
                for &e in s {
                    used[part_of[e as usize]] += 1;
                }
                used.iter().zip(caps).map(|(u, c)| u.min(c)).sum()
            }
            RefMatroid::Graphic { vertices, edges } => {
                let mut parent: Vec<usize> = (0..*vertices).collect();
                fn root(parent: &mut [usize], mut x: usize) -> usize {
                    while parent[x] != x {
                        parent[x] = parent[parent[x]];
                        x = parent[x];
                    }
                    x
                }
                let mut forest = 0;
                for &e in s {
                    let (u, v) = edges[e as usize];
                    let (a, b) = (root(&mut parent, u), root(&mut parent, v));
                    if a != b {
                        parent[a] = b;
                        forest += 1;
                    }
                }
                forest
            }
            RefMatroid::Linear { p, columns } => {
                let mut rows: Vec<Vec<i64>> = s
                    .iter()
                    .map(|&e| columns[e as usize].iter().map(|x| x.rem_euclid(*p)).collect())
                    .collect();
                gf_rank(&mut rows, *p)
            }
        }
    }

    pub fn indep(&self, s: &[u32]) -> bool {
        self.rank(s) == s.len()
    }
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Row rank over GF(p) by plain elimination.
fn gf_rank(rows: &mut [Vec<i64>], p: i64) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col] * inv % p;
                for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub struct RefPair {
    pub n: usize,
    pub m1: RefMatroid,
    pub m2: RefMatroid,
}

impl RefPair {
    pub fn new(inst: &InstanceFile) -> Self {
        Self {
            n: inst.n,
            m1: RefMatroid::from_spec(&inst.matroid1, inst.n),
            m2: RefMatroid::from_spec(&inst.matroid2, inst.n),
        }
    }

    pub fn common(&self, s: &[u32]) -> bool {
        self.m1.indep(s) && self.m2.indep(s)
    }

    /// Maximum common independent set size by enumerating all subsets.
    pub fn brute_r(&self) -> usize {
        assert!(self.n <= 20, "brute force on n = {}", self.n);
        let mut best = 0;
        let mut buf = Vec::with_capacity(self.n);
        for mask in 0u32..(1 << self.n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            buf.clear();
            buf.extend((0..self.n as u32).filter(|i| mask >> i & 1 == 1));
            if self.common(&buf) {
                best = size;
            }
        }
        best
    }

    /// Exchange graph distances from the source (edges counted), and the
    /// length of a shortest source-sink path, for the common independent `s`.
    pub fn exchange_bfs(&self, s: &[u32]) -> (Vec<Option<usize>>, Option<usize>) {
        let in_s: Vec<bool> = (0..self.n as u32).map(|e| s.contains(&e)).collect();
        let swap = |u: u32, v: u32| -> Vec<u32> {
            let mut t: Vec<u32> = s.iter().copied().filter(|&x| x != u).collect();
            t.push(v);
            t
        };
        let plus = |v: u32| -> Vec<u32> {
            let mut t = s.to_vec();
            t.push(v);
            t
        };
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for v in 0..self.n as u32 {
            if !in_s[v as usize] && self.m1.indep(&plus(v)) {
                dist[v as usize] = Some(1);
                queue.push_back(v);
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x as usize].unwrap();
            for y in 0..self.n as u32 {
                if dist[y as usize].is_some() || in_s[x as usize] == in_s[y as usize] {
                    continue;
                }
                let edge = if in_s[x as usize] {
                    // u -> v when S - u + v is independent in M1
                    self.m1.indep(&swap(x, y))
                } else {
                    // v -> u when S - u + v is independent in M2
                    self.m2.indep(&swap(y, x))
                };
                if edge {
                    dist[y as usize] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        let to_sink = (0..self.n as u32)
            .filter(|&v| !in_s[v as usize] && self.m2.indep(&plus(v)))
            .filter_map(|v| dist[v as usize].map(|d| d + 1))
            .min();
        (dist, to_sink)
    }

    /// Elements at distance 1, 2 and 3 from the source.
    pub fn layers(&self, s: &[u32]) -> [Vec<u32>; 3] {
        let (dist, _) = self.exchange_bfs(s);
        let at = |k: usize| (0..self.n as u32).filter(|&e| dist[e as usize] == Some(k)).collect();
        [at(1), at(2), at(3)]
    }
}

impl RefPair {
    /// First violated condition of `(b1, a1, b2)` as an augmenting set for
    /// `s`, by letter. Layer membership is decided from the definitions:
    /// `D1` = `{v : S + v ∈ I1}`, `D2` = `{a ∈ S : S - a + v ∈ I2 for some
    /// v ∈ D1}`, `D3` = `{b ∉ S ∪ D1 : S - a + b ∈ I1 for some a ∈ D2}`.
    pub fn check_augmenting(&self, s: &[u32], b1: &[u32], a1: &[u32], b2: &[u32]) -> Option<char> {
        let with = |add: &[u32], drop: &[u32]| -> Vec<u32> {
            s.iter().copied().filter(|x| !drop.contains(x)).chain(add.iter().copied()).collect()
        };
        let outside: Vec<u32> = (0..self.n as u32).filter(|e| !s.contains(e)).collect();
        let d1: Vec<u32> = outside.iter().copied().filter(|&v| self.m1.indep(&with(&[v], &[]))).collect();
        let mut d2_memo: Vec<Option<bool>> = vec![None; self.n];
        let mut in_d2 = |a: u32| -> bool {
            *d2_memo[a as usize].get_or_insert_with(|| {
                s.contains(&a) && d1.iter().any(|&v| self.m2.indep(&with(&[v], &[a])))
            })
        };
        let contained = b1.iter().all(|b| d1.contains(b))
            && a1.iter().all(|&a| in_d2(a))
            && b2.iter().all(|&b| {
                outside.contains(&b)
                    && !d1.contains(&b)
                    && s.iter().any(|&a| self.m1.indep(&with(&[b], &[a])) && in_d2(a))
            });
        if !contained {
            return Some('a');
        }
        if b1.len() != a1.len() || a1.len() != b2.len() {
            return Some('b');
        }
        let b1a1 = with(b1, a1);
        let checks = [
            ('c', self.m1.indep(&with(b1, &[]))),
            ('d', self.m2.indep(&b1a1)),
            ('e', self.m1.indep(&with(b2, a1))),
            ('f', self.m2.indep(&with(b2, &[]))),
        ];
        checks.into_iter().find(|c| !c.1).map(|c| c.0)
    }
}

/// Maximum matching size when both matroids are unit-capacity partitions
/// (each element is an edge between its two parts), by augmenting paths.
pub fn matching_r(inst: &InstanceFile) -> Option<usize> {
    let side = |spec: &MatroidSpec| match spec {
        MatroidSpec::Partition { parts, capacities } if capacities.iter().all(|&c| c == 1) => {
            let mut of = vec![0usize; inst.n];
            for (i, p) in parts.iter().enumerate() {
                for &e in p {
                    of[e as usize] = i;
                }
            }
            Some((of, parts.len()))
        }
        _ => None,
    };
    let (left, nl) = side(&inst.matroid1)?;
    let (right, nr) = side(&inst.matroid2)?;
    let mut adj = vec![Vec::new(); nl];
    for e in 0..inst.n {
        adj[left[e]].push(right[e]);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let mut owner: Vec<Option<usize>> = vec![None; nr];
    fn augment(u: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &w in &adj[u] {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if owner[w].is_none_or(|o| augment(o, adj, owner, seen)) {
                owner[w] = Some(u);
                return true;
            }
        }
        false
    }
    let mut size = 0;
    let mut seen = vec![false; nr];
    for u in 0..nl {
        seen.iter_mut().for_each(|s| *s = false);
        if augment(u, &adj, &mut owner, &mut seen) {
            size += 1;
        }
    }
    Some(size)
}

/// `ceil((2/3 - eps) r)` computed in exact integer arithmetic; `eps` is given
/// as a fraction `num/den`.
pub fn bound(eps_num: usize, eps_den: usize, r: usize) -> usize {
    // (2/3 - a/b) r = (2b - 3a) r / (3b)
    let top = (2 * eps_den).saturating_sub(3 * eps_num) * r;
    top.div_ceil(3 * eps_den)
}

/// The three tolerances used throughout, as (value, numerator, denominator).
pub const EPSILONS: [(f64, usize, usize); 3] = [(0.05, 1, 20), (0.1, 1, 10), (0.2, 1, 5)];

pub fn ids(s: &matroidx::ElementSet) -> Vec<u32> {
    s.ids()
}
