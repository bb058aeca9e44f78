use std::path::Path;

use matroidx::approx::{two_thirds_approx_with, ApproxConfig};
use matroidx::exchange::exact_baseline;
use matroidx::instances::InstanceFile;
use matroidx::{OracleMode, RunReport};
use serde::Serialize;

use crate::common::{check_eps, emit, ratio, CliError, OrderSpec};

/// Largest instance for which reports compute the exact optimum.
pub const EXACT_LIMIT: usize = 2000;

#[derive(Serialize)]
struct SolveReport<'a> {
    instance: String,
    n: usize,
    #[serde(flatten)]
    report: &'a RunReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
}

/// The known optimum, or the exact baseline for small enough instances.
pub fn optimum(inst: &InstanceFile) -> Result<Option<usize>, CliError> {
    if let Some(r) = inst.known_optimum {
        return Ok(Some(r));
    }
    if inst.n > EXACT_LIMIT {
        return Ok(None);
    }
    let (m1, m2) = inst.oracles()?;
    Ok(Some(exact_baseline(&m1.independence, &m2.independence)?.len()))
}

pub fn run(path: &Path, eps: f64, mode: OracleMode, order: &OrderSpec, trace: Option<&Path>, output: Option<&Path>) -> Result<(), CliError> {
    check_eps(eps)?;
    let inst = InstanceFile::load(path)?;
    let (m1, m2) = inst.oracles()?;
    let config = ApproxConfig {
        trace: trace.is_some(),
        ..ApproxConfig::new(eps, mode).with_order(order.resolve(inst.n)?)
    };
    let mut out = two_thirds_approx_with(&m1, &m2, &config)?;
    out.report.exact_optimum = optimum(&inst)?;
    if let Some(t) = trace {
        std::fs::write(t, out.trace_text())?;
    }
    let report = SolveReport {
        instance: path.display().to_string(),
        n: inst.n,
        report: &out.report,
        ratio: ratio(out.report.result_size, out.report.exact_optimum),
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    emit(&text, output)
}
