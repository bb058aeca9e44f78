//! Pass metering, memory accounting and the query access rule.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::greedy::{ascending_order, check_permutation, seeded_order};
use crate::oracle::IndependenceQuery;
use crate::set::{ElementId, ElementSet, ScanOrder};

#[derive(Debug, Default)]
struct Meters {
    passes: usize,
    open: bool,
    current: Option<ElementId>,
    refcount: Vec<u32>,
    held: usize,
    peak: usize,
    violations: u64,
}

/// One stream over the ground set.
///
/// Elements arrive only through [`StreamSession::run_pass`]. Anything the
/// algorithm wants to remember must be registered with
/// [`StreamSession::retain`]; the total number of retained items (with
/// multiplicity across stored sets) is the memory meter. Queries issued
/// through a [`Guarded`] oracle may only mention retained elements and the
/// element currently arriving.
#[derive(Debug)]
pub struct StreamSession {
    order: Vec<ElementId>,
    scan: ScanOrder,
    strict: bool,
    paper_passes: bool,
    meters: RefCell<Meters>,
}

impl StreamSession {
    pub fn new(order: Vec<ElementId>) -> Result<Self> {
        check_permutation(&order, order.len())?;
        let n = order.len();
        Ok(Self {
            scan: ScanOrder::from_sequence(&order),
            order,
            strict: false,
            paper_passes: false,
            meters: RefCell::new(Meters {
                refcount: vec![0; n],
                ..Meters::default()
            }),
        })
    }

    pub fn ascending(n: usize) -> Self {
        Self::new(ascending_order(n)).expect("ascending order is a permutation")
    }

    /// A uniformly shuffled order, fixed by `seed`.
    pub fn seeded(n: usize, seed: u64) -> Self {
        Self::new(seeded_order(n, seed)).expect("shuffled order is a permutation")
    }

    /// Strict mode turns access-rule violations into errors.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    /// Also charge the passes that a literal reading of the pass analysis
    /// spends on steps this implementation runs over stored sets.
    pub fn strict_paper_passes(mut self, on: bool) -> Self {
        self.paper_passes = on;
        self
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn charges_paper_passes(&self) -> bool {
        self.paper_passes
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[ElementId] {
        &self.order
    }

    /// Stream order as a scan order, for scans over stored sets.
    pub fn scan_order(&self) -> &ScanOrder {
        &self.scan
    }

    pub fn passes(&self) -> usize {
        self.meters.borrow().passes
    }

    pub fn peak_memory_items(&self) -> usize {
        self.meters.borrow().peak
    }

    pub fn held_items(&self) -> usize {
        self.meters.borrow().held
    }

    pub fn access_violations(&self) -> u64 {
        self.meters.borrow().violations
    }

    pub fn current(&self) -> Option<ElementId> {
        self.meters.borrow().current
    }

    /// Streams every element through `visit`, in order.
    pub fn run_pass(&self, mut visit: impl FnMut(ElementId) -> Result<()>) -> Result<()> {
        {
            let mut m = self.meters.borrow_mut();
            if m.open {
                return Err(Error::Protocol("a pass is already open".into()));
            }
            m.open = true;
            m.passes += 1;
        }
        let mut outcome = Ok(());
        for &e in &self.order {
            self.meters.borrow_mut().current = Some(e);
            outcome = visit(e);
            if outcome.is_err() {
                break;
            }
        }
        let mut m = self.meters.borrow_mut();
        m.open = false;
        m.current = None;
        outcome
    }

    /// Counts `k` passes that read the stream without using it.
    pub fn charge_idle_passes(&self, k: usize) -> Result<()> {
        let mut m = self.meters.borrow_mut();
        if m.open {
            return Err(Error::Protocol("cannot charge passes while a pass is open".into()));
        }
        m.passes += k;
        Ok(())
    }

    fn check_range(&self, x: ElementId) -> Result<()> {
        if x.index() >= self.order.len() {
            return Err(Error::InstanceMismatch {
                element: x,
                ground_size: self.order.len(),
            });
        }
        Ok(())
    }

    /// Records one more stored copy of `x`.
    pub fn retain(&self, x: ElementId) -> Result<()> {
        self.check_range(x)?;
        let mut m = self.meters.borrow_mut();
        m.refcount[x.index()] += 1;
        m.held += 1;
        m.peak = m.peak.max(m.held);
        Ok(())
    }

    pub fn release(&self, x: ElementId) -> Result<()> {
        self.check_range(x)?;
        let mut m = self.meters.borrow_mut();
        let count = &mut m.refcount[x.index()];
        if *count == 0 {
            return Err(Error::Protocol(format!("release of {x}, which is not retained")));
        }
        *count -= 1;
        m.held -= 1;
        Ok(())
    }

    pub fn retain_all(&self, set: &ElementSet) -> Result<()> {
        set.iter().try_for_each(|x| self.retain(x))
    }

    pub fn release_all(&self, set: &ElementSet) -> Result<()> {
        set.iter().try_for_each(|x| self.release(x))
    }

    pub fn is_accessible(&self, x: ElementId) -> bool {
        let m = self.meters.borrow();
        m.current == Some(x) || m.refcount.get(x.index()).is_some_and(|&c| c > 0)
    }

    fn check_access(&self, s: &ElementSet) -> Result<()> {
        if let Some(bad) = s.iter().find(|&x| !self.is_accessible(x)) {
            self.meters.borrow_mut().violations += 1;
            if self.strict {
                return Err(Error::StreamingViolation { element: bad });
            }
        }
        Ok(())
    }

    /// Wraps `inner` so that every query is checked against the access rule.
    pub fn guard<'a>(&'a self, inner: &'a dyn IndependenceQuery) -> Guarded<'a> {
        Guarded { session: self, inner }
    }
}

/// An oracle whose queries are checked against a session's access rule.
pub struct Guarded<'a> {
    session: &'a StreamSession,
    inner: &'a dyn IndependenceQuery,
}

impl IndependenceQuery for Guarded<'_> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        self.session.check_access(s)?;
        self.inner.is_independent(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::fixtures;

    #[test]
    fn retaining_everything_in_one_pass() {
        let session = StreamSession::ascending(4);
        session.run_pass(|e| session.retain(e)).unwrap();
        assert_eq!(session.passes(), 1);
        assert_eq!(session.held_items(), 4);
        assert_eq!(session.peak_memory_items(), 4);
        session.release_all(&ElementSet::full(4)).unwrap();
        assert_eq!(session.held_items(), 0);
        assert_eq!(session.peak_memory_items(), 4);
    }

    #[test]
    fn querying_the_current_element_is_allowed() {
        let (m1, _) = fixtures::cross4().oracles().unwrap();
        let session = StreamSession::ascending(4).strict(true);
        let g = session.guard(&m1.independence);
        session.run_pass(|e| g.is_independent(&ElementSet::singleton(e)).map(|_| ())).unwrap();
        assert_eq!(session.access_violations(), 0);
    }

    #[test]
    fn querying_an_unseen_element_is_a_violation() {
        let (m1, _) = fixtures::cross4().oracles().unwrap();
        let session = StreamSession::ascending(4);
        let g = session.guard(&m1.independence);
        session
            .run_pass(|e| {
                if e == ElementId(0) {
                    g.is_independent(&ElementSet::from([3]))?;
                }
                Ok(())
            })
            .unwrap();
        assert_eq!(session.access_violations(), 1);

        let strict = StreamSession::ascending(4).strict(true);
        let g = strict.guard(&m1.independence);
        let err = strict.run_pass(|_| g.is_independent(&ElementSet::from([3])).map(|_| ())).unwrap_err();
        assert!(matches!(err, Error::StreamingViolation { element } if element == ElementId(3)));
        // the failed pass is closed again
        assert!(strict.run_pass(|_| Ok(())).is_ok());
    }

    #[test]
    fn nested_pass_is_a_protocol_error() {
        let session = StreamSession::ascending(2);
        let err = session.run_pass(|_| session.run_pass(|_| Ok(()))).unwrap_err();
        assert!(matches!(err, Error::Protocol(_)));
        assert!(session.charge_idle_passes(2).is_ok());
        // the rejected inner pass is not counted
        assert_eq!(session.passes(), 3);
    }

    #[test]
    fn seeded_orders_are_reproducible_permutations() {
        let a = StreamSession::seeded(50, 9);
        let b = StreamSession::seeded(50, 9);
        assert_eq!(a.order(), b.order());
        assert!(check_permutation(a.order(), 50).is_ok());
        assert!(StreamSession::new(vec![ElementId(0), ElementId(0)]).is_err());
    }

    #[test]
    fn releasing_unretained_element_fails() {
        let session = StreamSession::ascending(2);
        assert!(session.release(ElementId(1)).is_err());
        assert!(session.retain(ElementId(5)).is_err());
    }
}
