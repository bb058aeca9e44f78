use std::fs;
use std::path::{Path, PathBuf};

use matroidx::approx::{approx_bound, two_thirds_approx_with, ApproxConfig};
use matroidx::exchange::exact_baseline;
use matroidx::greedy::{ascending_order, greedy_maximal};
use matroidx::instances::{brute_force_max_common, InstanceFile, BRUTE_FORCE_LIMIT};
use matroidx::oracle::Unmetered;
use matroidx::streaming::{streaming_two_thirds, StreamSession};
use matroidx::{ElementSet, IndependenceQuery, OracleMode};

use crate::common::{check_eps, CliError};

/// Pass ceiling asserted for streaming runs.
pub fn pass_budget(eps: f64) -> usize {
    6 + 10 * (1.0 / eps).ceil() as usize
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.extension().is_some_and(|x| x == "json"));
    files.sort();
    Ok(files)
}

fn common_independent(inst: &InstanceFile, s: &ElementSet) -> Result<bool, CliError> {
    let (m1, m2) = inst.oracles()?;
    let u1 = Unmetered(m1.matroid().as_ref());
    let u2 = Unmetered(m2.matroid().as_ref());
    Ok(u1.is_independent(s)? && u2.is_independent(s)?)
}

/// Every guarantee violation found on one instance.
fn check_instance(inst: &InstanceFile, eps_grid: &[f64]) -> Result<Vec<String>, CliError> {
    let mut problems = Vec::new();
    if inst.n > BRUTE_FORCE_LIMIT {
        problems.push(format!("n = {} exceeds the brute-force limit {BRUTE_FORCE_LIMIT}", inst.n));
        return Ok(problems);
    }
    let (m1, m2) = inst.oracles()?;
    let (q1, q2) = (&m1.independence, &m2.independence);
    let r = brute_force_max_common(q1, q2)?;
    if let Some(k) = inst.known_optimum {
        if k != r {
            problems.push(format!("known_optimum is {k} but brute force finds {r}"));
        }
    }
    let exact = exact_baseline(q1, q2)?;
    if exact.len() != r || !common_independent(inst, &exact)? {
        problems.push(format!("exact baseline returned {exact} (size {}), optimum is {r}", exact.len()));
    }
    let greedy = greedy_maximal(q1, q2, &ascending_order(inst.n))?;
    if greedy.len() < r.div_ceil(2) {
        problems.push(format!("greedy returned {} < ceil(r/2) = {}", greedy.len(), r.div_ceil(2)));
    }
    for &eps in eps_grid {
        let bound = approx_bound(eps, r);
        for mode in [OracleMode::Independence, OracleMode::Rank] {
            let out = two_thirds_approx_with(&m1, &m2, &ApproxConfig::new(eps, mode).checked())?;
            if out.result.len() < bound || !common_independent(inst, &out.result)? {
                problems.push(format!("{mode} mode, eps {eps}: result {} (needs >= {bound})", out.result));
            }
        }
        for session in [StreamSession::ascending(inst.n), StreamSession::seeded(inst.n, 1)] {
            let session = session.strict(true);
            let (res, rep) = streaming_two_thirds(&session, &m1, &m2, eps)?;
            if res.len() < bound || !common_independent(inst, &res)? {
                problems.push(format!("stream, eps {eps}: result {res} (needs >= {bound})"));
            }
            if rep.passes > pass_budget(eps) {
                problems.push(format!("stream, eps {eps}: {} passes > budget {}", rep.passes, pass_budget(eps)));
            }
        }
    }
    Ok(problems)
}

fn dump(path: &Path, inst: &InstanceFile, problems: &[String]) -> Result<(), CliError> {
    eprintln!("FAIL {}", path.display());
    for p in problems {
        eprintln!("  {p}");
    }
    eprintln!("--- instance ---\n{}", inst.to_json());
    let (m1, m2) = inst.oracles()?;
    let out = two_thirds_approx_with(&m1, &m2, &ApproxConfig::new(0.1, OracleMode::Independence).traced())?;
    eprintln!("--- trace (eps 0.1) ---\n{}", out.trace_text());
    Ok(())
}

pub fn run(dir: &Path, eps_grid: &[f64]) -> Result<(), CliError> {
    if eps_grid.is_empty() {
        return Err(CliError::Usage("no eps values given".into()));
    }
    eps_grid.iter().try_for_each(|&e| check_eps(e))?;
    let files = corpus_files(dir)?;
    if files.is_empty() {
        return Err(CliError::Usage(format!("no instance files in {}", dir.display())));
    }
    let mut failed = 0;
    for path in &files {
        let inst = InstanceFile::load(path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
        let problems = check_instance(&inst, eps_grid)?;
        if problems.is_empty() {
            println!("ok   {}", path.display());
        } else {
            failed += 1;
            println!("FAIL {}", path.display());
            dump(path, &inst, &problems)?;
        }
    }
    println!("verified {} instances, {failed} failed", files.len());
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} instance(s) violated a guarantee")));
    }
    Ok(())
}
