//! Element identifiers and sorted element sets.
//!
//! Every oracle query takes an [`ElementSet`]. Sets are kept as sorted,
//! duplicate-free vectors so that iteration is always in ascending id order
//! and the set algebra used by the algorithms (`S - A + B + x`) is a linear
//! merge.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Index of an element of the ground set `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for ElementId {
    fn from(v: u32) -> Self {
        ElementId(v)
    }
}

impl From<usize> for ElementId {
    fn from(v: usize) -> Self {
        ElementId(u32::try_from(v).expect("element id exceeds u32"))
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite set of elements, iterated in ascending id order.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementSet {
    members: Vec<ElementId>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// All of `[0, n)`.
    pub fn full(n: usize) -> Self {
        Self {
            members: (0..n).map(ElementId::from).collect(),
        }
    }

    pub fn singleton(x: ElementId) -> Self {
        Self { members: vec![x] }
    }

    /// Builds a set from ids that are already strictly increasing.
    pub(crate) fn from_sorted_unchecked(members: Vec<ElementId>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = ElementId> + ExactSizeIterator + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[ElementId] {
        &self.members
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<ElementId> {
        self.members.last().copied()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Inserts `x`; returns false when it was already present.
    pub fn insert(&mut self, x: ElementId) -> bool {
        match self.members.binary_search(&x) {
            Ok(_) => false,
            Err(pos) => {
                self.members.insert(pos, x);
                true
            }
        }
    }

    /// Removes `x`; returns false when it was absent.
    pub fn remove(&mut self, x: ElementId) -> bool {
        match self.members.binary_search(&x) {
            Ok(pos) => {
                self.members.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// `self + x`
    pub fn with(&self, x: ElementId) -> Self {
        let mut out = self.clone();
        out.insert(x);
        out
    }

    /// `self - x`
    pub fn without(&self, x: ElementId) -> Self {
        let mut out = self.clone();
        out.remove(x);
        out
    }

    pub fn union(&self, other: &ElementSet) -> Self {
        let (a, b) = (&self.members, &other.members);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { members: out }
    }

    pub fn difference(&self, other: &ElementSet) -> Self {
        let b = &other.members;
        let mut j = 0;
        let mut out = Vec::with_capacity(self.members.len());
        for &x in &self.members {
            while j < b.len() && b[j] < x {
                j += 1;
            }
            if j < b.len() && b[j] == x {
                continue;
            }
            out.push(x);
        }
        Self { members: out }
    }

    pub fn intersection(&self, other: &ElementSet) -> Self {
        let (a, b) = (&self.members, &other.members);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Self { members: out }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let b = &other.members;
        let mut j = 0;
        for &x in &self.members {
            while j < b.len() && b[j] < x {
                j += 1;
            }
            if j == b.len() || b[j] != x {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// Raw ids, convenient for reports and fixtures.
    pub fn ids(&self) -> Vec<u32> {
        self.members.iter().map(|e| e.0).collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x.0)?;
        }
        f.write_str("}")
    }
}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        let mut members: Vec<ElementId> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self { members }
    }
}

impl FromIterator<u32> for ElementSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        iter.into_iter().map(ElementId).collect()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().map(ElementId::from).collect()
    }
}

impl<const N: usize> From<[u32; N]> for ElementSet {
    fn from(ids: [u32; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = ElementId;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, ElementId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter().copied()
    }
}

/// The order in which "find maximal" scans and refine loops visit candidates.
///
/// `Ascending` is the default everywhere. `Positions` is used by the
/// streaming code (and its non-streaming comparison runs) so that every scan
/// follows stream arrival order.
#[derive(Clone, Debug, Default)]
pub enum ScanOrder {
    #[default]
    Ascending,
    Positions(Arc<Vec<usize>>),
}

impl ScanOrder {
    /// Order derived from an arrival sequence (a permutation of `[0, n)`).
    pub fn from_sequence(sequence: &[ElementId]) -> Self {
        let mut pos = vec![usize::MAX; sequence.len()];
        for (i, e) in sequence.iter().enumerate() {
            pos[e.index()] = i;
        }
        ScanOrder::Positions(Arc::new(pos))
    }

    pub fn position(&self, x: ElementId) -> usize {
        match self {
            ScanOrder::Ascending => x.index(),
            ScanOrder::Positions(pos) => pos[x.index()],
        }
    }

    /// Members of `set` in scan order.
    pub fn arrange(&self, set: &ElementSet) -> Vec<ElementId> {
        let mut out: Vec<ElementId> = set.iter().collect();
        if let ScanOrder::Positions(pos) = self {
            out.sort_by_key(|e| pos[e.index()]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_matches_definitions() {
        let s = ElementSet::from([1, 3, 5, 7]);
        let t = ElementSet::from([3, 4, 7]);
        assert_eq!(s.union(&t), ElementSet::from([1, 3, 4, 5, 7]));
        assert_eq!(s.difference(&t), ElementSet::from([1, 5]));
        assert_eq!(s.intersection(&t), ElementSet::from([3, 7]));
        assert!(ElementSet::from([3, 7]).is_subset(&s));
        assert!(!t.is_subset(&s));
        assert_eq!(s.with(ElementId(0)).ids(), vec![0, 1, 3, 5, 7]);
        assert_eq!(s.without(ElementId(3)).ids(), vec![1, 5, 7]);
    }

    #[test]
    fn from_iter_sorts_and_dedups() {
        let s: ElementSet = vec![5u32, 1, 5, 3].into_iter().collect();
        assert_eq!(s.ids(), vec![1, 3, 5]);
        assert_eq!(format!("{s}"), "{1,3,5}");
    }

    #[test]
    fn scan_order_follows_positions() {
        let order = ScanOrder::from_sequence(&[ElementId(2), ElementId(0), ElementId(1)]);
        let arranged = order.arrange(&ElementSet::from([0, 1, 2]));
        assert_eq!(arranged, vec![ElementId(2), ElementId(0), ElementId(1)]);
        assert_eq!(ScanOrder::Ascending.arrange(&ElementSet::from([2, 0])), vec![ElementId(0), ElementId(2)]);
    }
}
