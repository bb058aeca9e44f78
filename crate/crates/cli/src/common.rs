use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use matroidx::greedy::{ascending_order, check_permutation, seeded_order};
use matroidx::{ElementId, Error};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Parameter(_)) => 2,
            _ => 1,
        }
    }
}

/// How to order the ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderSpec {
    Ascending,
    Seed(u64),
    Explicit(Vec<u32>),
}

impl FromStr for OrderSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "ascending" {
            return Ok(OrderSpec::Ascending);
        }
        if s.contains(',') {
            return s
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| format!("bad element '{t}': {e}")))
                .collect::<Result<_, _>>()
                .map(OrderSpec::Explicit);
        }
        s.parse::<u64>()
            .map(OrderSpec::Seed)
            .map_err(|_| format!("expected 'ascending', a seed or a comma-separated permutation, got '{s}'"))
    }
}

impl OrderSpec {
    /// The order for a ground set of size `n`; an explicit list must be a
    /// permutation of `[0, n)`.
    pub fn resolve(&self, n: usize) -> Result<Vec<ElementId>, CliError> {
        let order = match self {
            OrderSpec::Ascending => ascending_order(n),
            OrderSpec::Seed(seed) => seeded_order(n, *seed),
            OrderSpec::Explicit(ids) => ids.iter().map(|&i| ElementId(i)).collect(),
        };
        check_permutation(&order, n).map_err(|e| CliError::Usage(format!("--order: {e}")))?;
        Ok(order)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

pub fn parse_flag(s: &str) -> Result<bool, String> {
    match s {
        "1" | "true" | "yes" => Ok(true),
        "0" | "false" | "no" | "" => Ok(false),
        _ => Err(format!("expected 0 or 1, got '{s}'")),
    }
}

pub fn check_eps(eps: f64) -> Result<(), CliError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--eps must lie in (0, 1), got {eps}")))
    }
}

/// Writes `text` to `path`, or to stdout.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `|size| / r`, with an empty optimum counting as ratio 1.
pub fn ratio(size: usize, r: Option<usize>) -> Option<f64> {
    r.map(|r| if r == 0 { 1.0 } else { size as f64 / r as f64 })
}
