//! The refine steps that grow a partial augmenting set.

use crate::error::{Error, Result};
use crate::oracle::IndependenceQuery;
use crate::set::{ElementId, ElementSet, ScanOrder};

use super::state::{ElementType, Layer, LayerState, PartialAugmentingSet};

/// Greedily extends `base` by members of `candidates` (in the given order),
/// keeping a candidate whenever `accept(current + c)` holds. Returns the added
/// elements.
pub fn find_maximal_extension_ordered(
    mut accept: impl FnMut(&ElementSet) -> Result<bool>,
    base: &ElementSet,
    candidates: &[ElementId],
) -> Result<ElementSet> {
    let mut current = base.clone();
    let mut added = ElementSet::new();
    for &c in candidates {
        if current.contains(c) {
            continue;
        }
        current.insert(c);
        if accept(&current)? {
            added.insert(c);
        } else {
            current.remove(c);
        }
    }
    Ok(added)
}

/// Ascending-order variant of [`find_maximal_extension_ordered`] for an
/// independence oracle.
pub fn find_maximal_extension(m: &dyn IndependenceQuery, base: &ElementSet, candidates: &ElementSet) -> Result<ElementSet> {
    find_maximal_extension_ordered(|s| m.is_independent(s), base, candidates.as_slice())
}

/// Like [`find_maximal_extension`] but first checks (with one query) that
/// `base` itself is independent.
pub fn find_maximal_extension_checked(m: &dyn IndependenceQuery, base: &ElementSet, candidates: &ElementSet) -> Result<ElementSet> {
    if !m.is_independent(base)? {
        return Err(Error::Contract(format!("extension base {base} is dependent")));
    }
    find_maximal_extension(m, base, candidates)
}

/// How the promote/demote loop of a refine step visits fresh elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LoopPolicy {
    /// One sweep: each element is promoted, demoted or left as it comes.
    #[default]
    InOrder,
    /// A first sweep promotes every element passing both tests; a second
    /// sweep handles the rest. This is the order a two-pass stream sees.
    SelectedFirst,
}

#[derive(Clone, Debug, Default)]
pub struct RefineOptions {
    pub order: ScanOrder,
    pub policy: LoopPolicy,
}

fn check_k(k: usize, allowed: std::ops::RangeInclusive<usize>, what: &str) -> Result<()> {
    if allowed.contains(&k) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} needs k in {allowed:?}, got {k}")))
    }
}

fn select(state: &LayerState, layer: Layer) -> ElementSet {
    state.selected(layer).clone()
}

/// `RefineAB(k)`: promote a maximal part of `F_{2k+1}` into `B_{k+1}` under
/// M1, then demote the members of `A_k` that still fit.
pub fn refine_ab(state: &mut LayerState, k: usize, m1: &dyn IndependenceQuery, s: &ElementSet) -> Result<()> {
    refine_ab_with(state, k, m1, s, &RefineOptions::default())
}

pub fn refine_ab_with(state: &mut LayerState, k: usize, m1: &dyn IndependenceQuery, s: &ElementSet, opts: &RefineOptions) -> Result<()> {
    check_k(k, 0..=1, "RefineAB")?;
    let op = format!("RefineAB({k})");
    let layer = Layer::odd(k);
    let a_k = if k == 1 { select(state, Layer::D2) } else { ElementSet::new() };
    let base = s.difference(&a_k).union(state.selected(layer));
    let fresh = opts.order.arrange(&state.fresh(layer));
    let promoted = find_maximal_extension_ordered(|t| m1.is_independent(t), &base, &fresh)?;
    state.transition_all(
        opts.order.arrange(&promoted),
        layer,
        ElementType::Fresh,
        ElementType::Selected,
        &op,
    )?;
    if k == 1 {
        let base = base.union(&promoted);
        let demoted = find_maximal_extension_ordered(|t| m1.is_independent(t), &base, &opts.order.arrange(&a_k))?;
        state.transition_all(
            opts.order.arrange(&demoted),
            Layer::D2,
            ElementType::Selected,
            ElementType::Removed,
            &op,
        )?;
    }
    Ok(())
}

/// `RefineBA(k)`: keep a maximal part of `B_k` under M2 (the rest is
/// removed), then move the members of `F_{2k}` that do not fit into `A_k`.
pub fn refine_ba(state: &mut LayerState, k: usize, m2: &dyn IndependenceQuery, s: &ElementSet) -> Result<()> {
    refine_ba_with(state, k, m2, s, &RefineOptions::default())
}

pub fn refine_ba_with(state: &mut LayerState, k: usize, m2: &dyn IndependenceQuery, s: &ElementSet, opts: &RefineOptions) -> Result<()> {
    check_k(k, 1..=2, "RefineBA")?;
    let op = format!("RefineBA({k})");
    let layer = Layer::odd(k - 1);
    let f_even = if k == 1 { state.fresh(Layer::D2) } else { ElementSet::new() };
    // D_{2k} - R_{2k}: F2 and A1 for k = 1, nothing for the imaginary D4.
    let live_even = if k == 1 { f_even.union(state.a1()) } else { ElementSet::new() };
    let base = s.difference(&live_even);
    let b_k = select(state, layer);
    let kept = find_maximal_extension_ordered(|t| m2.is_independent(t), &base, &opts.order.arrange(&b_k))?;
    state.transition_all(
        opts.order.arrange(&b_k.difference(&kept)),
        layer,
        ElementType::Selected,
        ElementType::Removed,
        &op,
    )?;
    if k == 1 {
        let base = base.union(&kept);
        let stay = find_maximal_extension_ordered(|t| m2.is_independent(t), &base, &opts.order.arrange(&f_even))?;
        state.transition_all(
            opts.order.arrange(&f_even.difference(&stay)),
            Layer::D2,
            ElementType::Fresh,
            ElementType::Selected,
            &op,
        )?;
    }
    Ok(())
}

/// Bases for the two membership tests of the loop at level `k`:
/// `S - A_k + B_{k+1}` under M1 and `S - A_{k+1} - F_{2k+2} + B_{k+1}` under M2.
fn loop_bases(state: &LayerState, k: usize, s: &ElementSet) -> (ElementSet, ElementSet) {
    let b = state.selected(Layer::odd(k));
    if k == 1 {
        (s.difference(state.a1()).union(b), s.union(b))
    } else {
        let out = state.a1().union(&state.fresh(Layer::D2));
        (s.union(b), s.difference(&out).union(b))
    }
}

fn promote_demote_loop(state: &mut LayerState, k: usize, m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery, s: &ElementSet, opts: &RefineOptions) -> Result<()> {
    let op = format!("Refine[k={k}]");
    let layer = Layer::odd(k);
    let (mut base1, mut base2) = loop_bases(state, k, s);
    let sweeps: &[bool] = match opts.policy {
        LoopPolicy::InOrder => &[false],
        LoopPolicy::SelectedFirst => &[true, false],
    };
    for &promote_only in sweeps {
        for x in opts.order.arrange(&state.fresh(layer)) {
            if !m1.is_independent(&base1.with(x))? {
                continue;
            }
            if m2.is_independent(&base2.with(x))? {
                state.transition(x, layer, ElementType::Fresh, ElementType::Selected, &op)?;
                base1.insert(x);
                base2.insert(x);
            } else if !promote_only {
                state.transition(x, layer, ElementType::Fresh, ElementType::Removed, &op)?;
            }
        }
    }
    Ok(())
}

/// One call of `Refine`: levels `k = 1` then `k = 0`.
pub fn refine(state: &mut LayerState, m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery, s: &ElementSet) -> Result<()> {
    refine_with(state, m1, m2, s, &RefineOptions::default())
}

pub fn refine_with(state: &mut LayerState, m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery, s: &ElementSet, opts: &RefineOptions) -> Result<()> {
    for k in [1, 0] {
        refine_ba_with(state, k + 1, m2, s, opts)?;
        promote_demote_loop(state, k, m1, m2, s, opts)?;
        refine_ba_with(state, k + 1, m2, s, opts)?;
        refine_ab_with(state, k, m1, s, opts)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineOutcome {
    pub partial: PartialAugmentingSet,
    pub calls: usize,
}

/// Generous bound on refine calls; exceeding it means the gap is not shrinking.
pub fn refine_call_cap(s_len: usize, p: f64) -> usize {
    let step = p.floor().max(1.0) as usize;
    4 * (s_len.div_ceil(step) + 2)
}

/// Calls `Refine` at least once and until `|B1| - |B2| <= p`.
pub fn refine_until_gap(state: &mut LayerState, p: f64, m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery, s: &ElementSet) -> Result<RefineOutcome> {
    refine_until_gap_with(state, p, m1, m2, s, &RefineOptions::default(), &mut |_, _| Ok(()))
}

/// [`refine_until_gap`] with scan options and a hook run after every call
/// (with the 1-based call number).
pub fn refine_until_gap_with(
    state: &mut LayerState,
    p: f64,
    m1: &dyn IndependenceQuery,
    m2: &dyn IndependenceQuery,
    s: &ElementSet,
    opts: &RefineOptions,
    after_call: &mut dyn FnMut(usize, &LayerState) -> Result<()>,
) -> Result<RefineOutcome> {
    if p.is_nan() || p < 0.0 {
        return Err(Error::Parameter(format!("gap target {p} must be non-negative")));
    }
    let cap = refine_call_cap(s.len(), p);
    let mut calls = 0;
    loop {
        refine_with(state, m1, m2, s, opts)?;
        calls += 1;
        after_call(calls, state)?;
        if state.gap() as f64 <= p {
            break;
        }
        if calls >= cap {
            return Err(Error::AlgorithmBug(format!(
                "gap still {} after {calls} refine calls (target {p})",
                state.gap()
            )));
        }
    }
    Ok(RefineOutcome {
        partial: state.partial(),
        calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchange::get_distance_layers;
    use crate::instances::fixtures;
    use crate::oracle::MatroidOracles;

    fn path3() -> (MatroidOracles, MatroidOracles, ElementSet) {
        let (m1, m2) = fixtures::path3().oracles().unwrap();
        (m1, m2, ElementSet::from([1]))
    }

    fn state_for(m1: &MatroidOracles, m2: &MatroidOracles, s: &ElementSet) -> LayerState {
        LayerState::new(get_distance_layers(&m1.independence, &m2.independence, s).unwrap())
    }

    #[test]
    fn maximal_extension_skips_dependent_candidates() {
        let (m1, _, _) = path3();
        let added = find_maximal_extension(&m1.independence, &ElementSet::new(), &ElementSet::full(3)).unwrap();
        assert_eq!(added, ElementSet::from([0, 2]));
        let added = find_maximal_extension_ordered(
            |t| m1.independence.is_independent(t),
            &ElementSet::new(),
            &[ElementId(1), ElementId(0), ElementId(2)],
        )
        .unwrap();
        assert_eq!(added, ElementSet::from([1, 2]));
        assert!(find_maximal_extension_checked(&m1.independence, &ElementSet::from([0, 1]), &ElementSet::new()).is_err());
    }

    #[test]
    fn path3_first_refine_call() {
        let (m1, m2, s) = path3();
        let mut st = state_for(&m1, &m2, &s);
        refine(&mut st, &m1.independence, &m2.independence, &s).unwrap();
        assert_eq!(
            st.summary(),
            "F1={} F2={} F3={0} B1={2} A1={1} B2={} R1={} R2={} R3={}"
        );
        assert_eq!(st.gap(), 1);
    }

    #[test]
    fn path3_second_refine_call_closes_gap() {
        let (m1, m2, s) = path3();
        let mut st = state_for(&m1, &m2, &s);
        let out = refine_until_gap(&mut st, 0.1, &m1.independence, &m2.independence, &s).unwrap();
        assert_eq!(out.calls, 2);
        assert_eq!(
            out.partial,
            PartialAugmentingSet {
                b1: ElementSet::from([2]),
                a1: ElementSet::from([1]),
                b2: ElementSet::from([0]),
            }
        );
    }

    #[test]
    fn refine_runs_at_least_once_even_with_large_target() {
        let (m1, m2, s) = path3();
        let mut st = state_for(&m1, &m2, &s);
        let out = refine_until_gap(&mut st, 100.0, &m1.independence, &m2.independence, &s).unwrap();
        assert_eq!(out.calls, 1);
    }

    #[test]
    fn bad_level_is_a_parameter_error() {
        let (m1, m2, s) = path3();
        let mut st = state_for(&m1, &m2, &s);
        assert!(refine_ab(&mut st, 2, &m1.independence, &s).is_err());
        assert!(refine_ba(&mut st, 0, &m2.independence, &s).is_err());
        assert!(refine_until_gap(&mut st, -1.0, &m1.independence, &m2.independence, &s).is_err());
    }

    #[test]
    fn call_cap_grows_with_rank_over_gap() {
        assert_eq!(refine_call_cap(10, 0.0), 48);
        assert_eq!(refine_call_cap(10, 5.0), 16);
    }
}
