//! Instance files: two matroid specs over a shared ground set.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matroids::{GraphicMatroid, LinearMatroid, PartitionMatroid, UniformMatroid};
use crate::error::{Error, Result};
use crate::oracle::{Matroid, MatroidOracles};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MatroidSpec {
    Uniform { k: usize },
    Partition { parts: Vec<Vec<u32>>, capacities: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<[u32; 2]> },
    Linear { p: u64, columns: Vec<Vec<i64>> },
}

impl MatroidSpec {
    /// Builds the concrete matroid on `[0, n)`, checking the spec's invariants.
    pub fn build(&self, n: usize) -> Result<Arc<dyn Matroid>> {
        Ok(match self {
            MatroidSpec::Uniform { k } => Arc::new(UniformMatroid::new(n, *k)),
            MatroidSpec::Partition { parts, capacities } => {
                Arc::new(PartitionMatroid::new(n, parts.clone(), capacities.clone())?)
            }
            MatroidSpec::Graphic { vertices, edges } => {
                if edges.len() != n {
                    return Err(Error::InvalidSpec {
                        field: "edges".into(),
                        reason: format!("{} edges for a ground set of size {n}", edges.len()),
                    });
                }
                Arc::new(GraphicMatroid::new(*vertices, edges.iter().map(|&[u, v]| (u, v)).collect())?)
            }
            MatroidSpec::Linear { p, columns } => {
                if columns.len() != n {
                    return Err(Error::InvalidSpec {
                        field: "columns".into(),
                        reason: format!("{} columns for a ground set of size {n}", columns.len()),
                    });
                }
                Arc::new(LinearMatroid::new(*p, columns.clone())?)
            }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MatroidSpec::Uniform { .. } => "uniform",
            MatroidSpec::Partition { .. } => "partition",
            MatroidSpec::Graphic { .. } => "graphic",
            MatroidSpec::Linear { .. } => "linear",
        }
    }
}

/// Both oracle handles for `spec` on a ground set of size `n`.
pub fn build_oracles(spec: &MatroidSpec, n: usize) -> Result<MatroidOracles> {
    Ok(MatroidOracles::new(spec.build(n)?))
}

fn tag_field(e: Error, prefix: &str) -> Error {
    match e {
        Error::InvalidSpec { field, reason } => Error::InvalidSpec {
            field: format!("{prefix}.{field}"),
            reason,
        },
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub matroid1: MatroidSpec,
    pub matroid2: MatroidSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_optimum: Option<usize>,
}

impl InstanceFile {
    pub fn new(n: usize, matroid1: MatroidSpec, matroid2: MatroidSpec) -> Self {
        Self {
            n,
            matroid1,
            matroid2,
            known_optimum: None,
        }
    }

    /// Fresh oracle handles (with fresh ledgers) for both matroids.
    pub fn oracles(&self) -> Result<(MatroidOracles, MatroidOracles)> {
        let m1 = build_oracles(&self.matroid1, self.n).map_err(|e| tag_field(e, "matroid1"))?;
        let m2 = build_oracles(&self.matroid2, self.n).map_err(|e| tag_field(e, "matroid2"))?;
        Ok((m1, m2))
    }

    pub fn validate(&self) -> Result<()> {
        self.oracles().map(|_| ())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}
