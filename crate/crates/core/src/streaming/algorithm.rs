//! The approximation run over a stream.
//!
//! Only `S`, `D2`, the selected sets, the types of `D2`, elements demoted
//! from selected to removed, and one `(A_k, B_{k+1})` snapshot per
//! promote/demote step are stored. The layer and type of any other element
//! are recomputed on arrival by [`classify_arrival`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::approx::{check_epsilon, Branch};
use crate::augset::{apply_augmenting, extract_augmenting_set, find_maximal_extension_ordered, refine_call_cap, ElementType, Layer, PartialAugmentingSet};
use crate::error::{Error, Result, StageExt};
use crate::exchange::find_exchange;
use crate::oracle::{IndependenceQuery, MatroidOracles};
use crate::set::{ElementId, ElementSet};

use super::session::StreamSession;

/// Layer and type of an arriving element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArrivalType {
    D1Fresh,
    D1Selected,
    D1Removed,
    D3Fresh,
    D3Selected,
    D3Removed,
    Other,
}

impl ArrivalType {
    fn new(layer: Layer, t: ElementType) -> Self {
        use ElementType::*;
        match (layer, t) {
            (Layer::D1, Fresh) => ArrivalType::D1Fresh,
            (Layer::D1, Selected) => ArrivalType::D1Selected,
            (Layer::D1, Removed) => ArrivalType::D1Removed,
            (Layer::D3, Fresh) => ArrivalType::D3Fresh,
            (Layer::D3, Selected) => ArrivalType::D3Selected,
            (Layer::D3, Removed) => ArrivalType::D3Removed,
            (Layer::D2, _) => ArrivalType::Other,
        }
    }

    pub fn layer(self) -> Option<Layer> {
        match self {
            ArrivalType::D1Fresh | ArrivalType::D1Selected | ArrivalType::D1Removed => Some(Layer::D1),
            ArrivalType::D3Fresh | ArrivalType::D3Selected | ArrivalType::D3Removed => Some(Layer::D3),
            ArrivalType::Other => None,
        }
    }

    pub fn element_type(self) -> Option<ElementType> {
        match self {
            ArrivalType::D1Fresh | ArrivalType::D3Fresh => Some(ElementType::Fresh),
            ArrivalType::D1Selected | ArrivalType::D3Selected => Some(ElementType::Selected),
            ArrivalType::D1Removed | ArrivalType::D3Removed => Some(ElementType::Removed),
            ArrivalType::Other => None,
        }
    }

    fn is_fresh_in(self, layer: Layer) -> bool {
        self.layer() == Some(layer) && self.element_type() == Some(ElementType::Fresh)
    }
}

impl fmt::Display for ArrivalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.layer(), self.element_type()) {
            (Some(l), Some(t)) => write!(f, "{l}-{t}"),
            _ => f.write_str("other"),
        }
    }
}

/// `(A_k, B_{k+1})` as they stood after the first pass of a promote/demote step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub k: usize,
    pub a: ElementSet,
    pub b: ElementSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    S,
    D2,
    A1,
    R2,
    B1,
    B2,
    Removed1,
    Removed3,
}

/// Everything the streaming run stores explicitly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StreamState {
    pub s: ElementSet,
    pub d2: ElementSet,
    pub a1: ElementSet,
    pub r2: ElementSet,
    pub b1: ElementSet,
    pub b2: ElementSet,
    /// Elements of `D1` demoted from selected to removed.
    pub removed1: ElementSet,
    /// Elements of `D3` demoted from selected to removed.
    pub removed3: ElementSet,
    pub snapshots: Vec<Snapshot>,
}

impl StreamState {
    fn slot(&mut self, slot: Slot) -> &mut ElementSet {
        match slot {
            Slot::S => &mut self.s,
            Slot::D2 => &mut self.d2,
            Slot::A1 => &mut self.a1,
            Slot::R2 => &mut self.r2,
            Slot::B1 => &mut self.b1,
            Slot::B2 => &mut self.b2,
            Slot::Removed1 => &mut self.removed1,
            Slot::Removed3 => &mut self.removed3,
        }
    }

    fn put(&mut self, session: &StreamSession, slot: Slot, x: ElementId) -> Result<()> {
        if self.slot(slot).insert(x) {
            session.retain(x)?;
        }
        Ok(())
    }

    fn take(&mut self, session: &StreamSession, slot: Slot, x: ElementId) -> Result<()> {
        if !self.slot(slot).remove(x) {
            return Err(Error::StateCorruption(format!("{x} missing from {slot:?}")));
        }
        session.release(x)
    }

    fn push_snapshot(&mut self, session: &StreamSession, snap: Snapshot) -> Result<()> {
        session.retain_all(&snap.a)?;
        session.retain_all(&snap.b)?;
        self.snapshots.push(snap);
        Ok(())
    }

    /// `F2 = D2 - A1 - R2`.
    pub fn f2(&self) -> ElementSet {
        self.d2.difference(&self.a1).difference(&self.r2)
    }

    pub fn selected(&self, layer: Layer) -> &ElementSet {
        match layer {
            Layer::D1 => &self.b1,
            Layer::D2 => &self.a1,
            Layer::D3 => &self.b2,
        }
    }

    fn removed_explicit(&self, layer: Layer) -> &ElementSet {
        match layer {
            Layer::D1 => &self.removed1,
            Layer::D2 => &self.r2,
            Layer::D3 => &self.removed3,
        }
    }

    pub fn partial(&self) -> PartialAugmentingSet {
        PartialAugmentingSet {
            b1: self.b1.clone(),
            a1: self.a1.clone(),
            b2: self.b2.clone(),
        }
    }

    pub fn gap(&self) -> usize {
        self.b1.len().saturating_sub(self.b2.len())
    }

    /// `A_k` (empty for `k = 0`).
    fn a_k(&self, k: usize) -> ElementSet {
        if k == 1 {
            self.a1.clone()
        } else {
            ElementSet::new()
        }
    }
}

fn odd_slot(k: usize) -> Slot {
    if k == 0 {
        Slot::B1
    } else {
        Slot::B2
    }
}

/// Layer and type of the arriving `v`, using only stored sets.
///
/// `v ∈ D1` iff `S + v ∈ I1`; otherwise `v ∈ D3` iff `S + v - D2 ∈ I1`. A layer
/// element is selected if it is in the stored selected set, removed if it was
/// demoted from selected or if one of the first `limit` snapshots of its level
/// would have demoted it, and fresh otherwise.
pub fn classify_arrival(m1: &dyn IndependenceQuery, state: &StreamState, v: ElementId, limit: usize) -> Result<ArrivalType> {
    if state.s.contains(v) {
        return Ok(ArrivalType::Other);
    }
    let layer = if m1.is_independent(&state.s.with(v))? {
        Layer::D1
    } else if !state.d2.is_empty() && m1.is_independent(&state.s.difference(&state.d2).with(v))? {
        Layer::D3
    } else {
        return Ok(ArrivalType::Other);
    };
    let t = if state.selected(layer).contains(v) {
        ElementType::Selected
    } else if state.removed_explicit(layer).contains(v) {
        ElementType::Removed
    } else {
        let k = if layer == Layer::D1 { 0 } else { 1 };
        let mut t = ElementType::Fresh;
        for snap in state.snapshots.iter().take(limit).filter(|snap| snap.k == k) {
            if m1.is_independent(&state.s.difference(&snap.a).union(&snap.b).with(v))? {
                t = ElementType::Removed;
                break;
            }
        }
        t
    };
    Ok(ArrivalType::new(layer, t))
}

/// Two passes: a maximal common independent `S` in stream order, then `D2`.
pub fn streaming_greedy_and_d2(session: &StreamSession, m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery) -> Result<StreamState> {
    let n = session.len();
    if m1.ground_size() != n || m2.ground_size() != n {
        return Err(Error::Contract(format!("stream has {n} elements, matroids have {} and {}", m1.ground_size(), m2.ground_size())));
    }
    let g1 = session.guard(m1);
    let g2 = session.guard(m2);
    let mut state = StreamState::default();
    session.run_pass(|v| {
        let candidate = state.s.with(v);
        if g1.is_independent(&candidate)? && g2.is_independent(&candidate)? {
            state.put(session, Slot::S, v)?;
        }
        Ok(())
    })?;
    session.run_pass(|v| {
        if state.s.contains(v) || !g1.is_independent(&state.s.with(v))? {
            return Ok(());
        }
        let mut remaining = state.s.difference(&state.d2);
        while let Some(u) = find_exchange(&g2, &state.s, v, &remaining)? {
            state.put(session, Slot::D2, u)?;
            remaining.remove(u);
        }
        Ok(())
    })?;
    Ok(state)
}

/// One pass: is there an arriving `v ∈ D3` with `S + v ∈ I2`?
fn has_short_path(session: &StreamSession, g1: &dyn IndependenceQuery, g2: &dyn IndependenceQuery, state: &StreamState) -> Result<bool> {
    let mut found = false;
    session.run_pass(|v| {
        if !found && classify_arrival(g1, state, v, usize::MAX)?.layer() == Some(Layer::D3) {
            found = g2.is_independent(&state.s.with(v))?;
        }
        Ok(())
    })?;
    Ok(found)
}

/// Demotions and promotions done by one [`update_aba`] call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UpdateStats {
    pub promoted: usize,
    pub demoted: usize,
}

/// Two passes realizing the promote/demote loop at level `k`.
///
/// The first pass promotes each fresh arrival of `D_{2k+1}` that passes both
/// tests. The resulting `(A_k, B_{k+1})` is stored as a snapshot. The second
/// pass finds the fresh arrivals that still extend `S - A_k + B_{k+1}` in M1;
/// they become removed, which [`classify_arrival`] reproduces from the
/// snapshot, so they are only counted here.
pub fn update_aba(session: &StreamSession, state: &mut StreamState, k: usize, m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery) -> Result<UpdateStats> {
    if k > 1 {
        return Err(Error::Parameter(format!("update_aba needs k in 0..=1, got {k}")));
    }
    let g1 = session.guard(m1);
    let g2 = session.guard(m2);
    let layer = Layer::odd(k);
    let slot = odd_slot(k);
    let mut stats = UpdateStats::default();
    // S - A_k + B_{k+1} under M1 and S - A_{k+1} - F_{2k+2} + B_{k+1} under M2
    let (mut base1, mut base2) = if k == 1 {
        (state.s.difference(&state.a1).union(&state.b2), state.s.union(&state.b2))
    } else {
        let out = state.a1.union(&state.f2());
        (state.s.union(&state.b1), state.s.difference(&out).union(&state.b1))
    };
    let limit = state.snapshots.len();
    session.run_pass(|v| {
        if !classify_arrival(&g1, state, v, limit)?.is_fresh_in(layer) {
            return Ok(());
        }
        if g1.is_independent(&base1.with(v))? && g2.is_independent(&base2.with(v))? {
            state.put(session, slot, v)?;
            base1.insert(v);
            base2.insert(v);
            stats.promoted += 1;
        }
        Ok(())
    })?;
    let snap = Snapshot {
        k,
        a: state.a_k(k),
        b: state.selected(layer).clone(),
    };
    state.push_snapshot(session, snap)?;
    let state = &*state;
    session.run_pass(|v| {
        if classify_arrival(&g1, state, v, limit)?.is_fresh_in(layer) && g1.is_independent(&base1.with(v))? {
            stats.demoted += 1;
        }
        Ok(())
    })?;
    Ok(stats)
}

fn refine_ba(session: &StreamSession, state: &mut StreamState, k: usize, g2: &dyn IndependenceQuery) -> Result<()> {
    let order = session.scan_order();
    let f2 = if k == 1 { state.f2() } else { ElementSet::new() };
    let live = if k == 1 { f2.union(&state.a1) } else { ElementSet::new() };
    let base = state.s.difference(&live);
    let (slot, removed) = if k == 1 { (Slot::B1, Slot::Removed1) } else { (Slot::B2, Slot::Removed3) };
    let b_k = state.slot(slot).clone();
    let kept = find_maximal_extension_ordered(|t| g2.is_independent(t), &base, &order.arrange(&b_k))?;
    for x in order.arrange(&b_k.difference(&kept)) {
        state.take(session, slot, x)?;
        state.put(session, removed, x)?;
    }
    if k == 1 {
        let stay = find_maximal_extension_ordered(|t| g2.is_independent(t), &base.union(&kept), &order.arrange(&f2))?;
        for x in order.arrange(&f2.difference(&stay)) {
            state.put(session, Slot::A1, x)?;
        }
    }
    if session.charges_paper_passes() {
        session.charge_idle_passes(2)?;
    }
    Ok(())
}

fn refine_ab(session: &StreamSession, state: &mut StreamState, k: usize, g1: &dyn IndependenceQuery) -> Result<()> {
    let layer = Layer::odd(k);
    let slot = odd_slot(k);
    let a_k = state.a_k(k);
    let mut base = state.s.difference(&a_k).union(state.selected(layer));
    let limit = state.snapshots.len();
    session.run_pass(|v| {
        if classify_arrival(g1, state, v, limit)?.is_fresh_in(layer) && g1.is_independent(&base.with(v))? {
            state.put(session, slot, v)?;
            base.insert(v);
        }
        Ok(())
    })?;
    if k == 1 {
        let order = session.scan_order();
        let demoted = find_maximal_extension_ordered(|t| g1.is_independent(t), &base, &order.arrange(&a_k))?;
        for x in order.arrange(&demoted) {
            state.take(session, Slot::A1, x)?;
            state.put(session, Slot::R2, x)?;
        }
    }
    if session.charges_paper_passes() {
        session.charge_idle_passes(1)?;
    }
    Ok(())
}

/// One refine call; promote/demote loops replaced by [`update_aba`].
pub fn streaming_refine(session: &StreamSession, state: &mut StreamState, m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery) -> Result<()> {
    let g1 = session.guard(m1);
    let g2 = session.guard(m2);
    for k in [1, 0] {
        refine_ba(session, state, k + 1, &g2)?;
        update_aba(session, state, k, m1, m2)?;
        refine_ba(session, state, k + 1, &g2)?;
        refine_ab(session, state, k, &g1)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamReport {
    pub result_size: usize,
    pub result: ElementSet,
    pub epsilon: f64,
    pub r_bar: usize,
    pub branch: Branch,
    pub passes: usize,
    pub peak_memory_items: usize,
    pub independence_queries: u64,
    pub rank_queries: u64,
    pub refine_calls: usize,
    pub snapshots: usize,
    pub access_violations: u64,
    pub strict_paper_passes: bool,
    /// What a mid-stream query may mention.
    pub access_rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_optimum: Option<usize>,
}

pub const ACCESS_RULE: &str = "queries may mention stored sets (S, D2, selected, demoted, snapshots) and the current arrival; \
    refine steps over stored sets run without passes";

impl StreamReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the approximation on `session` and returns the set and report.
pub fn streaming_two_thirds(session: &StreamSession, m1: &MatroidOracles, m2: &MatroidOracles, epsilon: f64) -> Result<(ElementSet, StreamReport)> {
    streaming_two_thirds_with(session, m1, m2, epsilon, &mut |_, _| Ok(()))
}

/// [`streaming_two_thirds`] with a hook run after every refine call.
pub fn streaming_two_thirds_with(
    session: &StreamSession,
    m1: &MatroidOracles,
    m2: &MatroidOracles,
    epsilon: f64,
    after_call: &mut dyn FnMut(usize, &StreamState) -> Result<()>,
) -> Result<(ElementSet, StreamReport)> {
    check_epsilon(epsilon)?;
    if session.passes() > 0 {
        return Err(Error::Protocol("session already used".into()));
    }
    let start = m1.counts() + m2.counts();
    let (q1, q2) = (&m1.independence, &m2.independence);
    let mut state = streaming_greedy_and_d2(session, q1, q2).stage("greedy")?;
    let r_bar = state.s.len();
    let mut report = StreamReport {
        result_size: r_bar,
        result: state.s.clone(),
        epsilon,
        r_bar,
        branch: Branch::Empty,
        passes: 0,
        peak_memory_items: 0,
        independence_queries: 0,
        rank_queries: 0,
        refine_calls: 0,
        snapshots: 0,
        access_violations: 0,
        strict_paper_passes: session.charges_paper_passes(),
        access_rule: ACCESS_RULE.to_string(),
        exact_optimum: None,
    };
    let result = if r_bar == 0 {
        state.s.clone()
    } else if !has_short_path(session, &session.guard(q1), &session.guard(q2), &state).stage("distance check")? {
        report.branch = Branch::DistanceExceedsFour;
        state.s.clone()
    } else {
        let p = epsilon * r_bar as f64;
        let cap = refine_call_cap(r_bar, p);
        let mut calls = 0;
        loop {
            streaming_refine(session, &mut state, q1, q2).stage("refine")?;
            calls += 1;
            after_call(calls, &state)?;
            if state.gap() as f64 <= p {
                break;
            }
            if calls >= cap {
                return Err(Error::AlgorithmBug(format!("gap still {} after {calls} refine calls", state.gap())).at("refine"));
            }
        }
        let (g1, g2) = (session.guard(q1), session.guard(q2));
        let pi = extract_augmenting_set(&state.s, &state.partial(), &g1, &g2).stage("extract")?;
        report.refine_calls = calls;
        report.branch = Branch::Augment;
        apply_augmenting(&state.s, &pi).stage("apply")?
    };
    let used = (m1.counts() + m2.counts()).since(start);
    report.result_size = result.len();
    report.result = result.clone();
    report.passes = session.passes();
    report.peak_memory_items = session.peak_memory_items();
    report.independence_queries = used.independence_queries;
    report.rank_queries = used.rank_queries;
    report.snapshots = state.snapshots.len();
    report.access_violations = session.access_violations();
    Ok((result, report))
}
