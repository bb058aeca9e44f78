use std::path::Path;

use matroidx::instances::InstanceFile;
use matroidx::streaming::{streaming_two_thirds, StreamReport, StreamSession};
use serde::Serialize;

use crate::common::{check_eps, emit, ratio, CliError, OrderSpec, ReportFormat};
use crate::solve::optimum;

#[derive(Serialize)]
struct StreamJson<'a> {
    instance: String,
    n: usize,
    #[serde(flatten)]
    report: &'a StreamReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
}

#[derive(Serialize)]
struct StreamRow {
    instance: String,
    n: usize,
    r: Option<usize>,
    eps: f64,
    size: usize,
    ratio: Option<f64>,
    passes: usize,
    peak_memory_items: usize,
    ind_q: u64,
    rank_q: u64,
    refine_calls: usize,
    snapshots: usize,
    access_violations: u64,
    strict_paper_passes: bool,
}

pub fn run(path: &Path, eps: f64, order: &OrderSpec, paper_passes: bool, strict: bool, format: ReportFormat) -> Result<(), CliError> {
    check_eps(eps)?;
    let inst = InstanceFile::load(path)?;
    let (m1, m2) = inst.oracles()?;
    let session = StreamSession::new(order.resolve(inst.n)?)?
        .strict(strict)
        .strict_paper_passes(paper_passes);
    let (_, mut report) = streaming_two_thirds(&session, &m1, &m2, eps)?;
    report.exact_optimum = optimum(&inst)?;
    let name = path.display().to_string();
    let text = match format {
        ReportFormat::Json => {
            let json = StreamJson {
                instance: name,
                n: inst.n,
                report: &report,
                ratio: ratio(report.result_size, report.exact_optimum),
            };
            serde_json::to_string_pretty(&json).expect("report serializes") + "\n"
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(StreamRow {
                instance: name,
                n: inst.n,
                r: report.exact_optimum,
                eps,
                size: report.result_size,
                ratio: ratio(report.result_size, report.exact_optimum),
                passes: report.passes,
                peak_memory_items: report.peak_memory_items,
                ind_q: report.independence_queries,
                rank_q: report.rank_queries,
                refine_calls: report.refine_calls,
                snapshots: report.snapshots,
                access_violations: report.access_violations,
                strict_paper_passes: report.strict_paper_passes,
            })?;
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8")
        }
    };
    emit(&text, None)
}
