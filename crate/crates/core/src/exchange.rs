//! Exchange-graph primitives.
//!
//! For a common independent set `S`, the exchange graph `G(S)` has a source
//! edge to every `v ∉ S` with `S + v ∈ I1`, a sink edge from every `v ∉ S`
//! with `S + v ∈ I2`, an edge `u -> v` when `S - u + v ∈ I1` and an edge
//! `v -> u` when `S - u + v ∈ I2` (`u ∈ S`, `v ∉ S`). Only the first three
//! BFS layers are ever needed by the approximation; the full graph is
//! materialized only by the verification helpers at the bottom.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::{ascending_order, greedy_maximal};
use crate::oracle::{IndependenceQuery, RankOracle};
use crate::set::{ElementId, ElementSet};

/// Finds some `u ∈ t` with `s + v - u` independent, or `None`.
///
/// `s` must be independent, `v ∉ s`, `t ⊆ s`. Such a `u` exists iff
/// `s + v - t` is independent, so the none case costs exactly one query. In
/// the found case the candidate range is halved (lower ids first) while
/// keeping `s + v - half` independent, for at most `1 + ⌈log2 |t|⌉` queries.
/// The answer is the smallest qualifying id in `t`. An empty `t` returns
/// `None` without a query.
pub fn find_exchange(m: &dyn IndependenceQuery, s: &ElementSet, v: ElementId, t: &ElementSet) -> Result<Option<ElementId>> {
    if s.contains(v) {
        return Err(Error::Contract(format!("find_exchange: {v} already belongs to s")));
    }
    if !t.is_subset(s) {
        return Err(Error::Contract("find_exchange: t is not a subset of s".into()));
    }
    if t.is_empty() {
        return Ok(None);
    }
    let sv = s.with(v);
    if !m.is_independent(&sv.difference(t))? {
        return Ok(None);
    }
    let mut candidates = t.as_slice();
    while candidates.len() > 1 {
        let mid = candidates.len().div_ceil(2);
        let (low, high) = candidates.split_at(mid);
        let low_set = ElementSet::from_sorted_unchecked(low.to_vec());
        candidates = if m.is_independent(&sv.difference(&low_set))? { low } else { high };
    }
    Ok(Some(candidates[0]))
}

/// BFS layers at distance 1, 2 and 3 from the source of `G(S)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceLayers {
    pub d1: ElementSet,
    pub d2: ElementSet,
    pub d3: ElementSet,
}

impl DistanceLayers {
    pub fn is_empty(&self) -> bool {
        self.d1.is_empty() && self.d2.is_empty() && self.d3.is_empty()
    }
}

fn outside(s: &ElementSet, n: usize) -> impl Iterator<Item = ElementId> + '_ {
    (0..n).map(ElementId::from).filter(move |v| !s.contains(*v))
}

fn require_common_independent(m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery, s: &ElementSet) -> Result<()> {
    if !m1.is_independent(s)? || !m2.is_independent(s)? {
        return Err(Error::Contract(format!("{s} is not common independent")));
    }
    Ok(())
}

/// Layers with independence queries, as a BFS that discovers `D2` through
/// [`find_exchange`]: `O(n + r log r)` queries.
pub fn get_distance_layers(m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery, s: &ElementSet) -> Result<DistanceLayers> {
    require_common_independent(m1, m2, s)?;
    let n = m1.ground_size();
    let mut d1 = ElementSet::new();
    for v in outside(s, n) {
        if m1.is_independent(&s.with(v))? {
            d1.insert(v);
        }
    }
    let mut d2 = ElementSet::new();
    let mut remaining = s.clone();
    for v in &d1 {
        while let Some(u) = find_exchange(m2, s, v, &remaining)? {
            d2.insert(u);
            remaining.remove(u);
        }
    }
    let d3 = third_layer(m1, s, &d1, &d2, n)?;
    Ok(DistanceLayers { d1, d2, d3 })
}

fn third_layer(m1: &dyn IndependenceQuery, s: &ElementSet, d1: &ElementSet, d2: &ElementSet, n: usize) -> Result<ElementSet> {
    let mut d3 = ElementSet::new();
    // with D2 empty the test degenerates to S + v ∈ I1, which defines D1
    if d2.is_empty() {
        return Ok(d3);
    }
    let base = s.difference(d2);
    for v in outside(s, n).filter(|v| !d1.contains(*v)) {
        if m1.is_independent(&base.with(v))? {
            d3.insert(v);
        }
    }
    Ok(d3)
}

/// Layers with rank queries only: `O(n)` queries, no binary search.
///
/// `u ∈ S` is in `D2` iff `rank2(S + D1 - u) >= rank2(S)`.
pub fn get_distance_layers_rank(m1: &RankOracle, m2: &RankOracle, s: &ElementSet) -> Result<DistanceLayers> {
    let n = m1.ground_size();
    let rank1_s = m1.query_rank(s)?;
    let rank2_s = m2.query_rank(s)?;
    if rank1_s != s.len() || rank2_s != s.len() {
        return Err(Error::Contract(format!("{s} is not common independent")));
    }
    let mut d1 = ElementSet::new();
    for v in outside(s, n) {
        if m1.query_rank(&s.with(v))? == s.len() + 1 {
            d1.insert(v);
        }
    }
    let mut d2 = ElementSet::new();
    if !d1.is_empty() {
        let with_d1 = s.union(&d1);
        for u in s {
            if m2.query_rank(&with_d1.without(u))? >= rank2_s {
                d2.insert(u);
            }
        }
    }
    let d3 = third_layer(m1, s, &d1, &d2, n)?;
    Ok(DistanceLayers { d1, d2, d3 })
}

/// True iff no `v ∈ D3` has `S + v ∈ I2`, i.e. there is no augmenting path of
/// length 4 (for a maximal `S` there is none of length 2 either).
pub fn dist_exceeds_four(m2: &dyn IndependenceQuery, s: &ElementSet, layers: &DistanceLayers) -> Result<bool> {
    for v in &layers.d3 {
        if m2.is_independent(&s.with(v))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Edge predicates of `G(S)`, each answered by one oracle query.
pub struct ExchangeGraphView<'a> {
    pub m1: &'a dyn IndependenceQuery,
    pub m2: &'a dyn IndependenceQuery,
    pub s: &'a ElementSet,
}

impl ExchangeGraphView<'_> {
    /// `(u, v) ∈ E'`: `S - u + v ∈ I1`.
    pub fn exchange1(&self, u: ElementId, v: ElementId) -> Result<bool> {
        self.m1.is_independent(&self.s.without(u).with(v))
    }

    /// `(v, u) ∈ E''`: `S - u + v ∈ I2`.
    pub fn exchange2(&self, v: ElementId, u: ElementId) -> Result<bool> {
        self.m2.is_independent(&self.s.without(u).with(v))
    }

    pub fn from_source(&self, v: ElementId) -> Result<bool> {
        self.m1.is_independent(&self.s.with(v))
    }

    pub fn to_sink(&self, v: ElementId) -> Result<bool> {
        self.m2.is_independent(&self.s.with(v))
    }
}

/// Fully materialized exchange graph. `O(n |S|)` queries; for tests and
/// small-instance verification only.
#[derive(Clone, Debug)]
pub struct NaiveExchangeGraph {
    n: usize,
    source_out: Vec<ElementId>,
    adjacency: Vec<Vec<ElementId>>,
    to_sink: Vec<bool>,
}

impl NaiveExchangeGraph {
    pub fn build(m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery, s: &ElementSet) -> Result<Self> {
        let n = m1.ground_size();
        let view = ExchangeGraphView { m1, m2, s };
        let mut adjacency = vec![Vec::new(); n];
        let mut source_out = Vec::new();
        let mut to_sink = vec![false; n];
        for v in outside(s, n) {
            if view.from_source(v)? {
                source_out.push(v);
            }
            to_sink[v.index()] = view.to_sink(v)?;
            for u in s {
                if view.exchange1(u, v)? {
                    adjacency[u.index()].push(v);
                }
                if view.exchange2(v, u)? {
                    adjacency[v.index()].push(u);
                }
            }
        }
        Ok(Self {
            n,
            source_out,
            adjacency,
            to_sink,
        })
    }

    /// BFS distance from the source to every element.
    pub fn distances(&self) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &v in &self.source_out {
            dist[v.index()] = Some(1);
            queue.push_back(v);
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x.index()].unwrap();
            for &y in &self.adjacency[x.index()] {
                if dist[y.index()].is_none() {
                    dist[y.index()] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn layers(&self) -> DistanceLayers {
        let dist = self.distances();
        let layer = |i: usize| {
            dist.iter()
                .enumerate()
                .filter(|(_, d)| **d == Some(i))
                .map(|(v, _)| ElementId::from(v))
                .collect::<ElementSet>()
        };
        DistanceLayers {
            d1: layer(1),
            d2: layer(2),
            d3: layer(3),
        }
    }

    /// Number of edges on a shortest source-sink path, if any.
    pub fn shortest_path_len(&self) -> Option<usize> {
        self.distances()
            .iter()
            .zip(&self.to_sink)
            .filter_map(|(d, &sink)| if sink { d.map(|d| d + 1) } else { None })
            .min()
    }
}

/// A shortest augmenting path `v1, ..., v_{l-1}` in `G(S)` (elements only),
/// found by a layered BFS: out-of-`S` layers are discovered with one query
/// per unvisited element (`S + v - L ∈ I1` against the previous `S` layer
/// `L`), `S` layers with repeated [`find_exchange`] in the second matroid.
pub fn shortest_augmenting_path(
    m1: &dyn IndependenceQuery,
    m2: &dyn IndependenceQuery,
    s: &ElementSet,
) -> Result<Option<Vec<ElementId>>> {
    let n = m1.ground_size();
    let mut visited = vec![false; n];
    let mut parent: Vec<Option<ElementId>> = vec![None; n];
    let mut out_layer = Vec::new();
    for v in outside(s, n) {
        if m1.is_independent(&s.with(v))? {
            visited[v.index()] = true;
            out_layer.push(v);
        }
    }
    let mut unvisited_in_s = s.clone();
    loop {
        for &v in &out_layer {
            if m2.is_independent(&s.with(v))? {
                let mut path = vec![v];
                let mut cur = v;
                while let Some(p) = parent[cur.index()] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Ok(Some(path));
            }
        }
        let mut in_layer = ElementSet::new();
        for &v in &out_layer {
            while let Some(u) = find_exchange(m2, s, v, &unvisited_in_s)? {
                unvisited_in_s.remove(u);
                visited[u.index()] = true;
                parent[u.index()] = Some(v);
                in_layer.insert(u);
            }
        }
        if in_layer.is_empty() {
            return Ok(None);
        }
        out_layer.clear();
        for v in outside(s, n) {
            if visited[v.index()] {
                continue;
            }
            if let Some(u) = find_exchange(m1, s, v, &in_layer)? {
                visited[v.index()] = true;
                parent[v.index()] = Some(u);
                out_layer.push(v);
            }
        }
        if out_layer.is_empty() {
            return Ok(None);
        }
    }
}

/// A maximum common independent set: greedy start, then shortest augmenting
/// paths until none is left. Verification baseline for medium instances.
pub fn exact_baseline(m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery) -> Result<ElementSet> {
    let n = m1.ground_size();
    let mut s = greedy_maximal(m1, m2, &ascending_order(n))?;
    while let Some(path) = shortest_augmenting_path(m1, m2, &s)? {
        for (i, &x) in path.iter().enumerate() {
            if i % 2 == 0 {
                s.insert(x);
            } else {
                s.remove(x);
            }
        }
        debug_assert!(m1.is_independent(&s)? && m2.is_independent(&s)?);
    }
    Ok(s)
}
