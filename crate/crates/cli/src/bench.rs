use std::path::Path;

use matroidx::approx::two_thirds_approx;
use matroidx::exchange::exact_baseline;
use matroidx::instances::{gen_random_instance, Family};
use matroidx::streaming::{streaming_two_thirds, StreamSession};
use matroidx::OracleMode;
use rayon::prelude::*;
use serde::Serialize;

use crate::common::{check_eps, emit, ratio, CliError, ReportFormat};
use crate::solve::EXACT_LIMIT;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMode {
    Oracle(OracleMode),
    Stream,
}

impl BenchMode {
    fn label(self) -> &'static str {
        match self {
            BenchMode::Oracle(OracleMode::Independence) => "independence",
            BenchMode::Oracle(OracleMode::Rank) => "rank",
            BenchMode::Stream => "stream",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub eps: Vec<f64>,
    pub seeds: Vec<u64>,
    pub modes: Vec<BenchMode>,
    pub format: ReportFormat,
}

impl BenchConfig {
    pub fn new(family: Family, sizes: Vec<usize>, eps: Vec<f64>, seeds: Vec<u64>, modes: &[String], format: ReportFormat) -> Result<Self, CliError> {
        if sizes.is_empty() || eps.is_empty() || seeds.is_empty() || modes.is_empty() {
            return Err(CliError::Usage("bench grid is empty".into()));
        }
        eps.iter().try_for_each(|&e| check_eps(e))?;
        let modes = modes
            .iter()
            .map(|m| match m.as_str() {
                "stream" => Ok(BenchMode::Stream),
                other => other
                    .parse::<OracleMode>()
                    .map(BenchMode::Oracle)
                    .map_err(|e| CliError::Usage(e.to_string())),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            family,
            sizes,
            eps,
            seeds,
            modes,
            format,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub r: Option<usize>,
    pub eps: f64,
    pub mode: &'static str,
    pub size: usize,
    pub ratio: Option<f64>,
    pub ind_q: u64,
    pub rank_q: u64,
    pub passes: Option<usize>,
}

fn instance_rows(config: &BenchConfig, n: usize, seed: u64) -> Result<Vec<BenchRow>, CliError> {
    let inst = gen_random_instance(&config.family.scaling_params(n), seed)?;
    let name = format!("{}-n{n}-s{seed}", config.family);
    let r = if n <= EXACT_LIMIT {
        let (m1, m2) = inst.oracles()?;
        Some(exact_baseline(&m1.independence, &m2.independence)?.len())
    } else {
        None
    };
    let mut rows = Vec::new();
    for &eps in &config.eps {
        for &mode in &config.modes {
            let (m1, m2) = inst.oracles()?;
            let (size, ind_q, rank_q, passes) = match mode {
                BenchMode::Oracle(m) => {
                    let (_, rep) = two_thirds_approx(&m1, &m2, eps, m)?;
                    (rep.result_size, rep.independence_queries, rep.rank_queries, None)
                }
                BenchMode::Stream => {
                    let session = StreamSession::ascending(n);
                    let (_, rep) = streaming_two_thirds(&session, &m1, &m2, eps)?;
                    (rep.result_size, rep.independence_queries, rep.rank_queries, Some(rep.passes))
                }
            };
            rows.push(BenchRow {
                instance: name.clone(),
                n,
                r,
                eps,
                mode: mode.label(),
                size,
                ratio: ratio(size, r),
                ind_q,
                rank_q,
                passes,
            });
        }
    }
    Ok(rows)
}

/// All rows, in (size, seed, eps, mode) order regardless of scheduling.
pub fn rows(config: &BenchConfig) -> Result<Vec<BenchRow>, CliError> {
    let jobs: Vec<(usize, u64)> = config
        .sizes
        .iter()
        .flat_map(|&n| config.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let chunks = jobs
        .par_iter()
        .map(|&(n, seed)| instance_rows(config, n, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

pub fn render(rows: &[BenchRow], format: ReportFormat) -> Result<String, CliError> {
    Ok(match format {
        ReportFormat::Json => serde_json::to_string_pretty(rows).expect("rows serialize") + "\n",
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8")
        }
    })
}

pub fn run(config: &BenchConfig, output: Option<&Path>) -> Result<(), CliError> {
    let rows = rows(config)?;
    emit(&render(&rows, config.format)?, output)
}
