use crate::error::{Error, Result};
use crate::oracle::IndependenceQuery;
use crate::set::{ElementId, ElementSet};

/// Largest ground set the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Maximum size of a common independent set, by exhaustive enumeration.
///
/// Walks every common independent set exactly once (each set is reached by
/// adding its members in increasing id order); supersets of a set that is
/// dependent in either matroid are skipped since they are dependent too.
pub fn brute_force_max_common(m1: &dyn IndependenceQuery, m2: &dyn IndependenceQuery) -> Result<usize> {
    let n = m1.ground_size();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Budget(format!(
            "brute force refuses n = {n} (limit {BRUTE_FORCE_LIMIT})"
        )));
    }
    let mut best = 0;
    walk(m1, m2, n, 0, &ElementSet::new(), &mut best)?;
    Ok(best)
}

fn walk(
    m1: &dyn IndependenceQuery,
    m2: &dyn IndependenceQuery,
    n: usize,
    start: usize,
    current: &ElementSet,
    best: &mut usize,
) -> Result<()> {
    *best = (*best).max(current.len());
    if current.len() + (n - start) <= *best {
        return Ok(());
    }
    for v in start..n {
        let next = current.with(ElementId::from(v));
        if m1.is_independent(&next)? && m2.is_independent(&next)? {
            walk(m1, m2, n, v + 1, &next, best)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{fixtures, InstanceFile, MatroidSpec};

    fn brute(inst: &InstanceFile) -> usize {
        let (m1, m2) = inst.oracles().unwrap();
        brute_force_max_common(&m1.independence, &m2.independence).unwrap()
    }

    #[test]
    fn named_fixtures() {
        assert_eq!(brute(&fixtures::path3()), 2);
        assert_eq!(brute(&fixtures::cross4()), 2);
        assert_eq!(brute(&fixtures::empty()), 0);
    }

    #[test]
    fn rank_zero_matroid_gives_zero() {
        let inst = InstanceFile::new(5, MatroidSpec::Uniform { k: 0 }, MatroidSpec::Uniform { k: 5 });
        assert_eq!(brute(&inst), 0);
    }

    #[test]
    fn uniform_pair_is_min_rank() {
        let inst = InstanceFile::new(10, MatroidSpec::Uniform { k: 4 }, MatroidSpec::Uniform { k: 7 });
        assert_eq!(brute(&inst), 4);
    }

    #[test]
    fn refuses_large_ground_sets() {
        let inst = InstanceFile::new(21, MatroidSpec::Uniform { k: 1 }, MatroidSpec::Uniform { k: 1 });
        let (m1, m2) = inst.oracles().unwrap();
        assert!(matches!(
            brute_force_max_common(&m1.independence, &m2.independence),
            Err(Error::Budget(_))
        ));
    }
}
