use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::IndependenceQuery;
use crate::set::{ElementId, ElementSet};

/// Checks that `order` is a permutation of `[0, n)`.
pub fn check_permutation(order: &[ElementId], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::Contract(format!("order has {} entries, ground set has {n}", order.len())));
    }
    let mut seen = vec![false; n];
    for &e in order {
        if e.index() >= n || std::mem::replace(&mut seen[e.index()], true) {
            return Err(Error::Contract(format!("order is not a permutation (element {e})")));
        }
    }
    Ok(())
}

pub fn ascending_order(n: usize) -> Vec<ElementId> {
    (0..n).map(ElementId::from).collect()
}

/// A uniformly shuffled permutation of `[0, n)`, fixed by `seed`.
pub fn seeded_order(n: usize, seed: u64) -> Vec<ElementId> {
    let mut order = ascending_order(n);
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Scans `order` and keeps every element that stays independent in both
/// matroids. The result is maximal in the intersection, hence at least half
/// of a maximum common independent set. At most `2n` queries: the second
/// matroid is only asked when the first one accepts.
pub fn greedy_maximal(m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery, order: &[ElementId]) -> Result<ElementSet> {
    let n = m1.ground_size();
    if m2.ground_size() != n {
        return Err(Error::Contract("matroids have different ground sets".into()));
    }
    check_permutation(order, n)?;
    let mut s = ElementSet::new();
    for &v in order {
        let candidate = s.with(v);
        if m1.is_independent(&candidate)? && m2.is_independent(&candidate)? {
            s = candidate;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::fixtures;

    #[test]
    fn path3_orders() {
        let inst = fixtures::path3();
        let (m1, m2) = inst.oracles().unwrap();
        let asc = greedy_maximal(&m1.independence, &m2.independence, &ascending_order(3)).unwrap();
        assert_eq!(asc, ElementSet::from([0, 2]));
        let bad = [1u32, 0, 2].map(ElementId);
        let worst = greedy_maximal(&m1.independence, &m2.independence, &bad).unwrap();
        assert_eq!(worst, ElementSet::from([1]));
        assert!(m1.counts().total() + m2.counts().total() <= 12);
    }

    #[test]
    fn empty_ground_set() {
        let inst = fixtures::empty();
        let (m1, m2) = inst.oracles().unwrap();
        assert!(greedy_maximal(&m1.independence, &m2.independence, &[]).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_permutation() {
        let inst = fixtures::path3();
        let (m1, m2) = inst.oracles().unwrap();
        let order = [0u32, 0, 2].map(ElementId);
        assert!(matches!(
            greedy_maximal(&m1.independence, &m2.independence, &order),
            Err(Error::Contract(_))
        ));
    }
}
