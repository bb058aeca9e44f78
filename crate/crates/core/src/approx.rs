//! The end-to-end (2/3 - eps)-approximation in the independence- and
//! rank-oracle models.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::augset::{
    apply_augmenting, extract_augmenting_set, AugmentingSet, refine_until_gap_with, validate_augmenting_set, validate_partial_augmenting_set,
    LayerState, RefineOptions, Transition, Verdict,
};
use crate::error::{Error, Result, StageExt};
use crate::exchange::{dist_exceeds_four, get_distance_layers, get_distance_layers_rank, DistanceLayers};
use crate::greedy::{ascending_order, check_permutation, greedy_maximal};
use crate::oracle::{IndependenceQuery, MatroidOracles, QueryCounts, Unmetered};
use crate::set::{ElementId, ElementSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    #[default]
    Independence,
    Rank,
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMode::Independence => "independence",
            OracleMode::Rank => "rank",
        })
    }
}

impl FromStr for OracleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independence" => Ok(OracleMode::Independence),
            "rank" => Ok(OracleMode::Rank),
            _ => Err(Error::Parameter(format!("unknown oracle mode '{s}'"))),
        }
    }
}

/// Which way the run finished.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Greedy found nothing; the answer is empty.
    #[serde(rename = "empty")]
    Empty,
    /// No augmenting path of length at most 4; the greedy set is returned.
    #[serde(rename = "distance>4")]
    DistanceExceedsFour,
    #[serde(rename = "augment")]
    Augment,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Empty => "empty",
            Branch::DistanceExceedsFour => "distance>4",
            Branch::Augment => "augment",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ApproxConfig {
    pub epsilon: f64,
    pub mode: OracleMode,
    /// Greedy scan order; ascending ids when `None`.
    pub greedy_order: Option<Vec<ElementId>>,
    /// Check every intermediate set with uncounted oracle calls.
    pub check_invariants: bool,
    /// Record every type transition.
    pub trace: bool,
}

impl ApproxConfig {
    pub fn new(epsilon: f64, mode: OracleMode) -> Self {
        Self {
            epsilon,
            mode,
            greedy_order: None,
            check_invariants: false,
            trace: false,
        }
    }

    pub fn with_order(mut self, order: Vec<ElementId>) -> Self {
        self.greedy_order = Some(order);
        self
    }

    pub fn checked(mut self) -> Self {
        self.check_invariants = true;
        self
    }

    pub fn traced(mut self) -> Self {
        self.trace = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub result_size: usize,
    pub result: ElementSet,
    pub epsilon: f64,
    pub r_bar: usize,
    pub mode: OracleMode,
    pub independence_queries: u64,
    pub rank_queries: u64,
    pub refine_calls: usize,
    pub branch: Branch,
    /// Width of the applied augmenting set.
    pub augmenting_width: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_optimum: Option<usize>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `|result| / r`, or 1 when `r = 0`.
    pub fn ratio(&self) -> Option<f64> {
        self.exact_optimum
            .map(|r| if r == 0 { 1.0 } else { self.result_size as f64 / r as f64 })
    }
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct ApproxOutput {
    pub result: ElementSet,
    pub report: RunReport,
    pub greedy: ElementSet,
    pub layers: Option<DistanceLayers>,
    pub checkpoints: Vec<Checkpoint>,
    pub transitions: Vec<Transition>,
    pub augmenting: Option<AugmentingSet>,
}

/// The layer state after one refine call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    /// Transitions recorded up to this point.
    pub transitions: usize,
    pub state: String,
}

impl ApproxOutput {
    /// Human-readable run log: greedy set, layers, every transition
    /// interleaved with the state after each refine call, then the result.
    pub fn trace_text(&self) -> String {
        let mut out = format!("greedy S={}\n", self.greedy);
        if let Some(l) = &self.layers {
            out += &format!("layers D1={} D2={} D3={}\n", l.d1, l.d2, l.d3);
        }
        let mut next = 0;
        for (i, cp) in self.checkpoints.iter().enumerate() {
            for t in &self.transitions[next..cp.transitions.min(self.transitions.len())] {
                out += &format!("{t}\n");
            }
            next = cp.transitions;
            out += &format!("after refine {}: {}\n", i + 1, cp.state);
        }
        if let Some(pi) = &self.augmenting {
            out += &format!("augmenting set {pi}\n");
        }
        let r = &self.report;
        out += &format!(
            "result {} branch={} q={}\n",
            self.result,
            r.branch,
            r.independence_queries + r.rank_queries
        );
        out
    }
}

/// `ceil((2/3 - eps) * r)`, the size the approximation must reach.
pub fn approx_bound(epsilon: f64, r: usize) -> usize {
    let v = (2.0 / 3.0 - epsilon) * r as f64;
    // absorb rounding noise so that e.g. (2/3)*3 stays 2
    (v - 1e-9).ceil().max(0.0) as usize
}

/// `ceil(2r/3)`.
pub fn two_thirds_ceil(r: usize) -> usize {
    (2 * r).div_ceil(3)
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {epsilon}")))
    }
}

fn total_counts(m1: &MatroidOracles, m2: &MatroidOracles) -> QueryCounts {
    m1.counts() + m2.counts()
}

fn ensure(verdict: Verdict, what: &str) -> Result<()> {
    match verdict {
        Verdict::Valid => Ok(()),
        Verdict::Violated(c) => Err(Error::AlgorithmBug(format!("{what} violates clause {c}"))),
    }
}

/// Runs the approximation with default settings and returns the set and report.
pub fn two_thirds_approx(m1: &MatroidOracles, m2: &MatroidOracles, epsilon: f64, mode: OracleMode) -> Result<(ElementSet, RunReport)> {
    let out = two_thirds_approx_with(m1, m2, &ApproxConfig::new(epsilon, mode))?;
    Ok((out.result, out.report))
}

pub fn two_thirds_approx_with(m1: &MatroidOracles, m2: &MatroidOracles, config: &ApproxConfig) -> Result<ApproxOutput> {
    check_epsilon(config.epsilon)?;
    let n = m1.ground_size();
    if m2.ground_size() != n {
        return Err(Error::Contract(format!(
            "ground sets differ: {n} vs {}",
            m2.ground_size()
        )));
    }
    let start = total_counts(m1, m2);
    let (q1, q2): (&dyn IndependenceQuery, &dyn IndependenceQuery) = match config.mode {
        OracleMode::Independence => (&m1.independence, &m2.independence),
        OracleMode::Rank => (&m1.rank, &m2.rank),
    };
    let u1 = Unmetered(m1.matroid().as_ref());
    let u2 = Unmetered(m2.matroid().as_ref());

    let order = match &config.greedy_order {
        Some(o) => {
            check_permutation(o, n).stage("greedy")?;
            o.clone()
        }
        None => ascending_order(n),
    };
    let s = greedy_maximal(q1, q2, &order).stage("greedy")?;
    let r_bar = s.len();
    let mut out = ApproxOutput {
        result: s.clone(),
        report: RunReport {
            result_size: r_bar,
            result: s.clone(),
            epsilon: config.epsilon,
            r_bar,
            mode: config.mode,
            independence_queries: 0,
            rank_queries: 0,
            refine_calls: 0,
            branch: Branch::Empty,
            augmenting_width: 0,
            exact_optimum: None,
        },
        greedy: s.clone(),
        layers: None,
        checkpoints: Vec::new(),
        transitions: Vec::new(),
        augmenting: None,
    };
    let finish = |out: &mut ApproxOutput| {
        let used = total_counts(m1, m2).since(start);
        out.report.independence_queries = used.independence_queries;
        out.report.rank_queries = used.rank_queries;
    };
    if r_bar == 0 {
        finish(&mut out);
        return Ok(out);
    }

    let layers = match config.mode {
        OracleMode::Independence => get_distance_layers(q1, q2, &s),
        OracleMode::Rank => get_distance_layers_rank(&m1.rank, &m2.rank, &s),
    }
    .stage("layers")?;
    out.layers = Some(layers.clone());
    if dist_exceeds_four(q2, &s, &layers).stage("distance check")? {
        out.report.branch = Branch::DistanceExceedsFour;
        finish(&mut out);
        return Ok(out);
    }

    let mut state = LayerState::new(layers.clone());
    if config.trace {
        let (l1, l2) = (m1.independence.ledger().clone(), m2.independence.ledger().clone());
        state.enable_trace(Arc::new(move || (l1.counts() + l2.counts()).since(start).total()));
    }
    let p = config.epsilon * r_bar as f64;
    let checkpoints = &mut out.checkpoints;
    let check = config.check_invariants;
    let outcome = refine_until_gap_with(&mut state, p, q1, q2, &s, &RefineOptions::default(), &mut |_, st| {
        checkpoints.push(Checkpoint {
            transitions: st.trace_len(),
            state: st.summary(),
        });
        if check {
            ensure(
                validate_partial_augmenting_set(&s, &st.partial(), &layers, &u1, &u2, &u2)?,
                "partial augmenting set",
            )?;
        }
        Ok(())
    })
    .stage("refine")?;
    out.transitions = state.take_trace();

    let pi = extract_augmenting_set(&s, &outcome.partial, q1, q2).stage("extract")?;
    if check {
        ensure(validate_augmenting_set(&s, &pi, &layers, &u1, &u2)?, "augmenting set").stage("extract")?;
    }
    let result = apply_augmenting(&s, &pi).stage("apply")?;
    if check && !(u1.is_independent(&result)? && u2.is_independent(&result)?) {
        return Err(Error::AlgorithmBug(format!("result {result} is not common independent")).at("apply"));
    }
    out.report.refine_calls = outcome.calls;
    out.report.branch = Branch::Augment;
    out.report.augmenting_width = pi.width().unwrap_or(0);
    out.augmenting = Some(pi);
    out.report.result_size = result.len();
    out.report.result = result.clone();
    out.result = result;
    finish(&mut out);
    Ok(out)
}
