//! Oracle handles with query accounting.
//!
//! A concrete [`Matroid`] answers independence and rank questions directly.
//! Algorithms never see it: they go through an [`IndependenceOracle`] or a
//! [`RankOracle`], which validate the argument and charge one query to the
//! shared [`QueryLedger`] per call. Nothing is cached.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// A matroid over the ground set `[0, ground_size)`.
pub trait Matroid: Send + Sync + fmt::Debug {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, s: &ElementSet) -> bool;
    fn rank(&self, s: &ElementSet) -> usize;
}

/// Counts of oracle calls. Shared by the handles of one matroid.
#[derive(Debug, Default)]
pub struct QueryLedger {
    independence: AtomicU64,
    rank: AtomicU64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub independence_queries: u64,
    pub rank_queries: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.independence_queries + self.rank_queries
    }

    /// Queries issued between `earlier` and `self`.
    pub fn since(&self, earlier: QueryCounts) -> QueryCounts {
        QueryCounts {
            independence_queries: self.independence_queries - earlier.independence_queries,
            rank_queries: self.rank_queries - earlier.rank_queries,
        }
    }
}

impl std::ops::Add for QueryCounts {
    type Output = QueryCounts;
    fn add(self, rhs: QueryCounts) -> QueryCounts {
        QueryCounts {
            independence_queries: self.independence_queries + rhs.independence_queries,
            rank_queries: self.rank_queries + rhs.rank_queries,
        }
    }
}

impl QueryLedger {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    pub fn counts(&self) -> QueryCounts {
        QueryCounts {
            independence_queries: self.independence.load(Ordering::Relaxed),
            rank_queries: self.rank.load(Ordering::Relaxed),
        }
    }

    /// Only meaningful between runs.
    pub fn reset(&self) {
        self.independence.store(0, Ordering::Relaxed);
        self.rank.store(0, Ordering::Relaxed);
    }

    fn charge_independence(&self) {
        self.independence.fetch_add(1, Ordering::Relaxed);
    }

    fn charge_rank(&self) {
        self.rank.fetch_add(1, Ordering::Relaxed);
    }
}

fn check_range(s: &ElementSet, ground_size: usize) -> Result<()> {
    match s.max() {
        Some(e) if e.index() >= ground_size => Err(Error::InstanceMismatch { element: e, ground_size }),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug)]
pub struct IndependenceOracle {
    matroid: Arc<dyn Matroid>,
    ledger: Arc<QueryLedger>,
}

impl IndependenceOracle {
    pub fn new(matroid: Arc<dyn Matroid>, ledger: Arc<QueryLedger>) -> Self {
        Self { matroid, ledger }
    }

    pub fn ground_size(&self) -> usize {
        self.matroid.ground_size()
    }

    pub fn query_independent(&self, s: &ElementSet) -> Result<bool> {
        check_range(s, self.ground_size())?;
        self.ledger.charge_independence();
        Ok(self.matroid.is_independent(s))
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    /// Unmetered access for verification code.
    pub fn matroid(&self) -> &Arc<dyn Matroid> {
        &self.matroid
    }
}

#[derive(Clone, Debug)]
pub struct RankOracle {
    matroid: Arc<dyn Matroid>,
    ledger: Arc<QueryLedger>,
}

impl RankOracle {
    pub fn new(matroid: Arc<dyn Matroid>, ledger: Arc<QueryLedger>) -> Self {
        Self { matroid, ledger }
    }

    pub fn ground_size(&self) -> usize {
        self.matroid.ground_size()
    }

    pub fn query_rank(&self, s: &ElementSet) -> Result<usize> {
        check_range(s, self.ground_size())?;
        self.ledger.charge_rank();
        Ok(self.matroid.rank(s))
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    pub fn matroid(&self) -> &Arc<dyn Matroid> {
        &self.matroid
    }
}

/// Anything that can answer "is this set independent?" at a cost of one query.
///
/// Implemented by both handles: a rank oracle answers with `rank(s) == |s|`.
/// The streaming session wraps these to enforce its access rule.
pub trait IndependenceQuery {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, s: &ElementSet) -> Result<bool>;
}

impl IndependenceQuery for IndependenceOracle {
    fn ground_size(&self) -> usize {
        IndependenceOracle::ground_size(self)
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        self.query_independent(s)
    }
}

impl IndependenceQuery for RankOracle {
    fn ground_size(&self) -> usize {
        RankOracle::ground_size(self)
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        Ok(self.query_rank(s)? == s.len())
    }
}

impl<T: IndependenceQuery + ?Sized> IndependenceQuery for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        (**self).is_independent(s)
    }
}

/// Rank access at a cost of one query.
pub trait RankQuery {
    fn rank_of(&self, s: &ElementSet) -> Result<usize>;
}

impl RankQuery for RankOracle {
    fn rank_of(&self, s: &ElementSet) -> Result<usize> {
        self.query_rank(s)
    }
}

/// Direct, uncounted access for checks that must not perturb the ledger.
#[derive(Clone, Copy, Debug)]
pub struct Unmetered<'a>(pub &'a dyn Matroid);

impl IndependenceQuery for Unmetered<'_> {
    fn ground_size(&self) -> usize {
        self.0.ground_size()
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        check_range(s, self.0.ground_size())?;
        Ok(self.0.is_independent(s))
    }
}

impl RankQuery for Unmetered<'_> {
    fn rank_of(&self, s: &ElementSet) -> Result<usize> {
        check_range(s, self.0.ground_size())?;
        Ok(self.0.rank(s))
    }
}

/// Both oracle handles of one matroid, sharing a ledger.
#[derive(Clone, Debug)]
pub struct MatroidOracles {
    pub independence: IndependenceOracle,
    pub rank: RankOracle,
}

impl MatroidOracles {
    pub fn new(matroid: Arc<dyn Matroid>) -> Self {
        let ledger = QueryLedger::new();
        Self {
            independence: IndependenceOracle::new(matroid.clone(), ledger.clone()),
            rank: RankOracle::new(matroid, ledger),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.independence.ground_size()
    }

    pub fn counts(&self) -> QueryCounts {
        self.independence.ledger().counts()
    }

    pub fn matroid(&self) -> &Arc<dyn Matroid> {
        self.independence.matroid()
    }
}
