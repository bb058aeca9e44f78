use std::fs;
use std::path::Path;

use matroidx::instances::{brute_force_max_common, fixtures, random_family_instance, Family, InstanceFile};

use crate::common::{emit, CliError};

fn with_optimum(mut inst: InstanceFile) -> Result<InstanceFile, CliError> {
    let (m1, m2) = inst.oracles()?;
    inst.known_optimum = Some(brute_force_max_common(&m1.independence, &m2.independence)?);
    Ok(inst)
}

pub fn single(family: Family, n: usize, seed: u64, output: Option<&Path>) -> Result<(), CliError> {
    let inst = random_family_instance(family, n, seed);
    emit(&(inst.to_json() + "\n"), output)
}

/// `PATH3.json`, `CROSS4.json` and `count` random instances with
/// `4 <= n <= 16`, each with its brute-force optimum.
pub fn corpus(dir: &Path, count: usize) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    with_optimum(fixtures::path3())?.save(&dir.join("PATH3.json"))?;
    with_optimum(fixtures::cross4())?.save(&dir.join("CROSS4.json"))?;
    for i in 0..count {
        let family = Family::ALL[i % Family::ALL.len()];
        let n = 4 + i % 13;
        let inst = with_optimum(random_family_instance(family, n, i as u64))?;
        inst.save(&dir.join(format!("random-{i:02}-{family}.json")))?;
    }
    println!("wrote {} instances to {}", count + 2, dir.display());
    Ok(())
}
