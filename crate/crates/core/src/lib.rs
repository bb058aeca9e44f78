//! Approximate matroid intersection with instrumented oracles.
//!
//! The main entry points are [`two_thirds_approx`] (independence or rank
//! oracle model) and [`streaming::streaming_two_thirds`] (semi-streaming
//! model). [`exchange::exact_baseline`] and
//! [`instances::brute_force_max_common`] provide exact answers for checking.

pub mod approx;
pub mod augset;
pub mod error;
pub mod exchange;
pub mod greedy;
pub mod instances;
pub mod oracle;
pub mod set;
pub mod streaming;

pub use approx::{two_thirds_approx, two_thirds_approx_with, ApproxConfig, Branch, OracleMode, RunReport};
pub use error::{Error, Result};
pub use oracle::{IndependenceOracle, IndependenceQuery, Matroid, MatroidOracles, QueryCounts, RankOracle};
pub use set::{ElementId, ElementSet, ScanOrder};
