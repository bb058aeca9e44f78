//! Named hand-checkable instances.
//!
//! * `PATH3`: the path `x - 0 - a - 1 - y - 2 - b` as a bipartite matching
//!   instance. Optimum `{0, 2}`; the greedy order `(1, 0, 2)` gets stuck at `{1}`.
//! * `CROSS4`: the complete bipartite graph `K_{2,2}` (edges numbered
//!   left-major). Optimum 2.

use super::spec::{InstanceFile, MatroidSpec};

fn partition(parts: &[&[u32]]) -> MatroidSpec {
    MatroidSpec::Partition {
        parts: parts.iter().map(|p| p.to_vec()).collect(),
        capacities: vec![1; parts.len()],
    }
}

pub fn path3() -> InstanceFile {
    InstanceFile::new(3, partition(&[&[0, 1], &[2]]), partition(&[&[0], &[1, 2]]))
}

pub fn cross4() -> InstanceFile {
    InstanceFile::new(4, partition(&[&[0, 1], &[2, 3]]), partition(&[&[0, 2], &[1, 3]]))
}

pub fn empty() -> InstanceFile {
    InstanceFile::new(0, MatroidSpec::Uniform { k: 0 }, MatroidSpec::Uniform { k: 0 })
}
