//! Turning a partial augmenting set into an augmenting set, applying it, and
//! checking both kinds of set against their defining conditions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::DistanceLayers;
use crate::oracle::{IndependenceQuery, RankQuery};
use crate::set::ElementSet;

use super::refine::find_maximal_extension;
use super::state::{AugmentingSet, PartialAugmentingSet};

/// Shrinks `phi = (B1, A1, B2)` to an augmenting set of width `|B2|`.
///
/// `B2` is kept whole. `A1'` is what remains of `A1` after greedily adding
/// `A1` back to `S - A1 + B2` under M1; since `B2` lies in the M1-span of `S`,
/// exactly `|B2|` elements remain. `B1'` then greedily extends `S - A1'`
/// inside `B1` under M2, stopping at `|A1'|` elements.
pub fn extract_augmenting_set(s: &ElementSet, phi: &PartialAugmentingSet, m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery) -> Result<AugmentingSet> {
    let width = phi.b2.len();
    let t = s.difference(&phi.a1).union(&phi.b2);
    let back = find_maximal_extension(m1, &t, &phi.a1)?;
    let a1 = phi.a1.difference(&back);
    if a1.len() != width {
        return Err(Error::ExtractionFailure(format!(
            "{} elements of A1 remain but |B2| = {width}",
            a1.len()
        )));
    }

    let base = s.difference(&a1);
    let mut current = base.clone();
    let mut b1 = ElementSet::new();
    for x in &phi.b1 {
        if b1.len() == width {
            break;
        }
        current.insert(x);
        if m2.is_independent(&current)? {
            b1.insert(x);
        } else {
            current.remove(x);
        }
    }
    if b1.len() != width {
        return Err(Error::ExtractionFailure(format!(
            "only {} elements of B1 extend S - A1' in M2, need {width}",
            b1.len()
        )));
    }
    Ok(AugmentingSet::new(b1, a1, phi.b2.clone()))
}

/// `S + B1 - A1 + B2`, after structural checks on `pi` (no queries).
pub fn apply_augmenting(s: &ElementSet, pi: &AugmentingSet) -> Result<ElementSet> {
    if pi.width().is_none() {
        return Err(Error::Contract(format!("augmenting set {pi} has unequal parts")));
    }
    if !pi.a1.is_subset(s) {
        return Err(Error::Contract(format!("A1 = {} is not inside S = {s}", pi.a1)));
    }
    if !pi.b1.is_disjoint(s) || !pi.b2.is_disjoint(s) || !pi.b1.is_disjoint(&pi.b2) {
        return Err(Error::Contract(format!(
            "B1 = {} and B2 = {} must be disjoint from S and from each other",
            pi.b1, pi.b2
        )));
    }
    Ok(s.union(&pi.b1).difference(&pi.a1).union(&pi.b2))
}

/// The conditions defining an augmenting set `(B1, A1, B2)` for `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clause {
    /// `B1 ⊆ D1`, `A1 ⊆ D2`, `B2 ⊆ D3`.
    Containment,
    /// `|B1| = |A1| = |B2|` (partial: `|B1| >= |A1| >= |B2|`).
    Widths,
    /// `S + B1 ∈ I1`.
    FirstInsertion,
    /// `S + B1 - A1 ∈ I2` (partial: `rank2(S + B1 - A1) = rank2(S)`).
    Exchange2,
    /// `S - A1 + B2 ∈ I1`.
    Exchange1,
    /// `S + B2 ∈ I2`.
    LastInsertion,
}

impl Clause {
    pub fn letter(self) -> char {
        match self {
            Clause::Containment => 'a',
            Clause::Widths => 'b',
            Clause::FirstInsertion => 'c',
            Clause::Exchange2 => 'd',
            Clause::Exchange1 => 'e',
            Clause::LastInsertion => 'f',
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.letter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Valid,
    Violated(Clause),
}

impl Verdict {
    pub fn is_valid(self) -> bool {
        self == Verdict::Valid
    }
}

fn containment(b1: &ElementSet, a1: &ElementSet, b2: &ElementSet, layers: &DistanceLayers) -> bool {
    b1.is_subset(&layers.d1) && a1.is_subset(&layers.d2) && b2.is_subset(&layers.d3)
}

/// Checks (a) through (f) in order and reports the first failure.
pub fn validate_augmenting_set(
    s: &ElementSet,
    pi: &AugmentingSet,
    layers: &DistanceLayers,
    m1: &dyn IndependenceQuery,
    m2: &dyn IndependenceQuery,
) -> Result<Verdict> {
    if !containment(&pi.b1, &pi.a1, &pi.b2, layers) {
        return Ok(Verdict::Violated(Clause::Containment));
    }
    if pi.width().is_none() {
        return Ok(Verdict::Violated(Clause::Widths));
    }
    let s_b1 = s.union(&pi.b1);
    let checks = [
        (Clause::FirstInsertion, m1, s_b1.clone()),
        (Clause::Exchange2, m2, s_b1.difference(&pi.a1)),
        (Clause::Exchange1, m1, s.difference(&pi.a1).union(&pi.b2)),
        (Clause::LastInsertion, m2, s.union(&pi.b2)),
    ];
    for (clause, m, set) in checks {
        if !m.is_independent(&set)? {
            return Ok(Verdict::Violated(clause));
        }
    }
    Ok(Verdict::Valid)
}

/// Checks the relaxed conditions of a partial augmenting set.
pub fn validate_partial_augmenting_set(
    s: &ElementSet,
    phi: &PartialAugmentingSet,
    layers: &DistanceLayers,
    m1: &dyn IndependenceQuery,
    m2: &dyn IndependenceQuery,
    rank2: &dyn RankQuery,
) -> Result<Verdict> {
    if !containment(&phi.b1, &phi.a1, &phi.b2, layers) {
        return Ok(Verdict::Violated(Clause::Containment));
    }
    if !(phi.b1.len() >= phi.a1.len() && phi.a1.len() >= phi.b2.len()) {
        return Ok(Verdict::Violated(Clause::Widths));
    }
    let s_b1 = s.union(&phi.b1);
    if !m1.is_independent(&s_b1)? {
        return Ok(Verdict::Violated(Clause::FirstInsertion));
    }
    if rank2.rank_of(&s_b1.difference(&phi.a1))? != rank2.rank_of(s)? {
        return Ok(Verdict::Violated(Clause::Exchange2));
    }
    if !m1.is_independent(&s.difference(&phi.a1).union(&phi.b2))? {
        return Ok(Verdict::Violated(Clause::Exchange1));
    }
    if !m2.is_independent(&s.union(&phi.b2))? {
        return Ok(Verdict::Violated(Clause::LastInsertion));
    }
    Ok(Verdict::Valid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::fixtures;
    use crate::oracle::Unmetered;

    fn path3_layers() -> DistanceLayers {
        DistanceLayers {
            d1: ElementSet::from([2]),
            d2: ElementSet::from([1]),
            d3: ElementSet::from([0]),
        }
    }

    fn phi(b1: &[u32], a1: &[u32], b2: &[u32]) -> PartialAugmentingSet {
        PartialAugmentingSet {
            b1: b1.iter().copied().collect(),
            a1: a1.iter().copied().collect(),
            b2: b2.iter().copied().collect(),
        }
    }

    #[test]
    fn path3_full_partial_set_extracts_whole() {
        let (m1, m2) = fixtures::path3().oracles().unwrap();
        let s = ElementSet::from([1]);
        let pi = extract_augmenting_set(&s, &phi(&[2], &[1], &[0]), &m1.independence, &m2.independence).unwrap();
        assert_eq!(pi.to_string(), "({2}, {1}, {0})");
        assert_eq!(apply_augmenting(&s, &pi).unwrap(), ElementSet::from([0, 2]));
        let v = validate_augmenting_set(&s, &pi, &path3_layers(), &m1.independence, &m2.independence).unwrap();
        assert_eq!(v, Verdict::Valid);
    }

    #[test]
    fn empty_b2_extracts_width_zero() {
        let (m1, m2) = fixtures::path3().oracles().unwrap();
        let s = ElementSet::from([1]);
        let pi = extract_augmenting_set(&s, &phi(&[2], &[1], &[]), &m1.independence, &m2.independence).unwrap();
        assert_eq!(pi.width(), Some(0));
        assert_eq!(apply_augmenting(&s, &pi).unwrap(), s);
    }

    #[test]
    fn apply_rejects_unequal_parts() {
        let s = ElementSet::from([0]);
        let pi = AugmentingSet::new(ElementSet::from([3]), ElementSet::new(), ElementSet::new());
        assert!(matches!(apply_augmenting(&s, &pi), Err(Error::Contract(_))));
        let pi = AugmentingSet::new(ElementSet::from([0]), ElementSet::from([1]), ElementSet::from([2]));
        assert!(matches!(apply_augmenting(&s, &pi), Err(Error::Contract(_))));
    }

    #[test]
    fn validator_reports_first_violation() {
        let (m1, m2) = fixtures::path3().oracles().unwrap();
        let s = ElementSet::from([1]);
        let layers = path3_layers();
        let check = |b1: &[u32], a1: &[u32], b2: &[u32]| {
            let p = phi(b1, a1, b2);
            validate_augmenting_set(&s, &AugmentingSet::new(p.b1, p.a1, p.b2), &layers, &m1.independence, &m2.independence).unwrap()
        };
        assert_eq!(check(&[0], &[1], &[2]), Verdict::Violated(Clause::Containment));
        assert_eq!(check(&[2], &[1], &[]), Verdict::Violated(Clause::Widths));
        assert_eq!(check(&[2], &[1], &[0]), Verdict::Valid);
        // looser layers so the oracle clauses are reached
        let loose = DistanceLayers {
            d1: ElementSet::from([0, 2]),
            d2: ElementSet::from([1]),
            d3: ElementSet::from([0, 2]),
        };
        let check = |b1: u32, b2: u32| {
            let pi = AugmentingSet::new(ElementSet::from([b1]), ElementSet::from([1]), ElementSet::from([b2]));
            validate_augmenting_set(&s, &pi, &loose, &m1.independence, &m2.independence).unwrap()
        };
        // S + B1 = {0, 1} is dependent in M1
        assert_eq!(check(0, 2), Verdict::Violated(Clause::FirstInsertion));
        // S + B2 = {1, 2} is dependent in M2
        assert_eq!(check(2, 2), Verdict::Violated(Clause::LastInsertion));
    }

    #[test]
    fn partial_validator_uses_rank_condition() {
        let inst = fixtures::path3();
        let (m1, m2) = inst.oracles().unwrap();
        let s = ElementSet::from([1]);
        let layers = path3_layers();
        let u1 = Unmetered(m1.matroid().as_ref());
        let u2 = Unmetered(m2.matroid().as_ref());
        let v = validate_partial_augmenting_set(&s, &phi(&[2], &[1], &[]), &layers, &u1, &u2, &u2).unwrap();
        assert_eq!(v, Verdict::Valid);
        // widths out of order
        let v = validate_partial_augmenting_set(&s, &phi(&[], &[1], &[]), &layers, &u1, &u2, &u2).unwrap();
        assert_eq!(v, Verdict::Violated(Clause::Widths));
        assert_eq!(m1.counts().total() + m2.counts().total(), 0);
    }
}
