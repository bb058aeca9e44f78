//! `matroidx`: solve, benchmark, stream and verify matroid intersection instances.

mod bench;
mod common;
mod gen;
mod solve;
mod stream;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use matroidx::instances::Family;
use matroidx::OracleMode;

use common::{CliError, OrderSpec, ReportFormat};

#[derive(Parser, Debug)]
#[command(name = "matroidx", version, about = "Approximate matroid intersection with instrumented oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the approximation on one instance and print a JSON report.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value = "independence")]
        mode: OracleMode,
        /// Greedy scan order: `ascending`, a seed, or a comma-separated permutation.
        #[arg(long, default_value = "ascending")]
        order: OrderSpec,
        /// Also write the refine trace (one line per type change) to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a grid of generated instances.
    ///
    /// CSV columns: instance, n, r, eps, mode, size, ratio, ind_q, rank_q, passes.
    /// `r` and `ratio` are filled when n <= 2000 (exact baseline); `passes`
    /// only for the stream mode.
    Bench {
        #[arg(long)]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        /// Any of independence, rank, stream.
        #[arg(long, value_delimiter = ',', default_value = "independence,rank")]
        modes: Vec<String>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the semi-streaming algorithm on one instance.
    Stream {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Stream order: `ascending`, a seed, or a comma-separated permutation.
        #[arg(long, default_value = "ascending")]
        order: OrderSpec,
        /// Charge passes for refine steps that run over stored sets.
        #[arg(long)]
        strict_paper_passes: bool,
        #[arg(long, default_value = "json")]
        report: ReportFormat,
        /// Fail on any query that touches an element neither stored nor arriving.
        #[arg(long, env = "MATROIDX_STRICT", value_parser = common::parse_flag, default_value = "0")]
        strict: bool,
    },
    /// Check every algorithm against brute force on a corpus of small instances.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        eps: Vec<f64>,
    },
    /// Write a generated instance, or the verification corpus.
    Gen {
        #[arg(long, conflicts_with_all = ["family", "n"])]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, required_unless_present = "corpus")]
        family: Option<Family>,
        #[arg(long, required_unless_present = "corpus")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            instance,
            eps,
            mode,
            order,
            trace,
            output,
        } => solve::run(&instance, eps, mode, &order, trace.as_deref(), output.as_deref()),
        Command::Bench {
            family,
            sizes,
            eps,
            seeds,
            modes,
            format,
            output,
        } => {
            let config = bench::BenchConfig::new(family, sizes, eps, seeds, &modes, format)?;
            bench::run(&config, output.as_deref())
        }
        Command::Stream {
            instance,
            eps,
            order,
            strict_paper_passes,
            report,
            strict,
        } => stream::run(&instance, eps, &order, strict_paper_passes, strict, report),
        Command::Verify { corpus, eps } => verify::run(&corpus, &eps),
        Command::Gen {
            corpus,
            count,
            family,
            n,
            seed,
            output,
        } => match corpus {
            Some(dir) => gen::corpus(&dir, count),
            None => gen::single(family.expect("required by clap"), n.expect("required by clap"), seed, output.as_deref()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
