//! Seeded random instance generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::spec::{InstanceFile, MatroidSpec};
use crate::error::{Error, Result};

/// Instance families. Every family pairs its first matroid with a partition
/// matroid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Bipartite matching: one partition matroid per side.
    Bipartite,
    GraphicPartition,
    LinearPartition,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Bipartite, Family::GraphicPartition, Family::LinearPartition];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Bipartite => "bipartite",
            Family::GraphicPartition => "graphic-partition",
            Family::LinearPartition => "linear-partition",
        }
    }

    /// Varied shapes with exactly `n` elements; used for verification corpora.
    pub fn random_params(self, n: usize, rng: &mut impl Rng) -> GenParams {
        let half = (n / 2).max(1);
        match self {
            Family::Bipartite => GenParams::BipartiteSized {
                n,
                left: rng.gen_range(1..=half + 1),
                right: rng.gen_range(1..=half + 1),
            },
            Family::GraphicPartition => GenParams::GraphicPartition {
                vertices: rng.gen_range(2..=half + 2),
                n,
                colors: rng.gen_range(1..=half),
                max_capacity: rng.gen_range(1..=2),
            },
            Family::LinearPartition => GenParams::LinearPartition {
                dim: rng.gen_range(1..=(half + 1).min(8)),
                prime: [2, 3, 5, 7][rng.gen_range(0..4)],
                n,
                colors: rng.gen_range(1..=half),
                max_capacity: rng.gen_range(1..=2),
            },
        }
    }

    /// A fixed shape that scales with `n` (constant average degree); used for
    /// the query-scaling grids.
    pub fn scaling_params(self, n: usize) -> GenParams {
        let quarter = (n / 4).max(1);
        match self {
            Family::Bipartite => GenParams::BipartiteSized {
                n,
                left: quarter,
                right: quarter,
            },
            Family::GraphicPartition => GenParams::GraphicPartition {
                vertices: (n / 3).max(2),
                n,
                colors: quarter,
                max_capacity: 1,
            },
            Family::LinearPartition => GenParams::LinearPartition {
                dim: 16,
                prime: 5,
                n,
                colors: quarter,
                max_capacity: 1,
            },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown family '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GenParams {
    /// Each pair in `left x right` becomes an edge with probability `edge_prob`;
    /// edges are numbered left-major.
    Bipartite { left: usize, right: usize, edge_prob: f64 },
    /// Exactly `n` uniformly random edges (parallel edges allowed).
    BipartiteSized { n: usize, left: usize, right: usize },
    /// Random multigraph edges, colored into `colors` capacity-bounded classes.
    GraphicPartition { vertices: usize, n: usize, colors: usize, max_capacity: usize },
    /// Random columns over GF(prime), colored into capacity-bounded classes.
    LinearPartition { dim: usize, prime: u64, n: usize, colors: usize, max_capacity: usize },
}

fn invalid(reason: impl Into<String>) -> Error {
    Error::Parameter(reason.into())
}

fn parts_from_labels(labels: &[usize], classes: usize) -> Vec<Vec<u32>> {
    let mut parts = vec![Vec::new(); classes];
    for (e, &c) in labels.iter().enumerate() {
        parts[c].push(e as u32);
    }
    parts.retain(|p| !p.is_empty());
    parts
}

fn random_coloring(n: usize, colors: usize, max_capacity: usize, rng: &mut ChaCha8Rng) -> MatroidSpec {
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..colors)).collect();
    let parts = parts_from_labels(&labels, colors);
    let capacities = parts.iter().map(|_| rng.gen_range(1..=max_capacity)).collect();
    MatroidSpec::Partition { parts, capacities }
}

fn bipartite_from_edges(edges: &[(usize, usize)], left: usize, right: usize) -> InstanceFile {
    let lefts: Vec<usize> = edges.iter().map(|e| e.0).collect();
    let rights: Vec<usize> = edges.iter().map(|e| e.1).collect();
    let side = |labels: &[usize], count: usize| {
        let parts = parts_from_labels(labels, count);
        let capacities = vec![1; parts.len()];
        MatroidSpec::Partition { parts, capacities }
    };
    InstanceFile::new(edges.len(), side(&lefts, left), side(&rights, right))
}

/// Deterministic for a fixed `(params, seed)`.
pub fn gen_random_instance(params: &GenParams, seed: u64) -> Result<InstanceFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *params {
        GenParams::Bipartite { left, right, edge_prob } => {
            if !(0.0..=1.0).contains(&edge_prob) {
                return Err(invalid(format!("edge_prob {edge_prob} outside [0, 1]")));
            }
            let mut edges = Vec::new();
            for l in 0..left {
                for r in 0..right {
                    if rng.gen_bool(edge_prob) {
                        edges.push((l, r));
                    }
                }
            }
            Ok(bipartite_from_edges(&edges, left, right))
        }
        GenParams::BipartiteSized { n, left, right } => {
            if n > 0 && (left == 0 || right == 0) {
                return Err(invalid("bipartite sides must be nonempty"));
            }
            let edges: Vec<(usize, usize)> = (0..n).map(|_| (rng.gen_range(0..left), rng.gen_range(0..right))).collect();
            Ok(bipartite_from_edges(&edges, left, right))
        }
        GenParams::GraphicPartition {
            vertices,
            n,
            colors,
            max_capacity,
        } => {
            if vertices < 2 || colors == 0 || max_capacity == 0 {
                return Err(invalid("graphic-partition needs >= 2 vertices, >= 1 color and capacity >= 1"));
            }
            let edges = (0..n)
                .map(|_| {
                    let u = rng.gen_range(0..vertices as u32);
                    let mut v = rng.gen_range(0..vertices as u32 - 1);
                    if v >= u {
                        v += 1;
                    }
                    [u, v]
                })
                .collect();
            let m2 = random_coloring(n, colors, max_capacity, &mut rng);
            Ok(InstanceFile::new(n, MatroidSpec::Graphic { vertices, edges }, m2))
        }
        GenParams::LinearPartition {
            dim,
            prime,
            n,
            colors,
            max_capacity,
        } => {
            if dim == 0 || colors == 0 || max_capacity == 0 || !super::matroids::is_prime(prime) {
                return Err(invalid("linear-partition needs dim >= 1, a prime modulus, >= 1 color and capacity >= 1"));
            }
            let columns = (0..n)
                .map(|_| (0..dim).map(|_| rng.gen_range(0..prime as i64)).collect())
                .collect();
            let m2 = random_coloring(n, colors, max_capacity, &mut rng);
            Ok(InstanceFile::new(n, MatroidSpec::Linear { p: prime, columns }, m2))
        }
    }
}

/// A random instance of `family` with `n` elements and family-varied shape.
pub fn random_family_instance(family: Family, n: usize, seed: u64) -> InstanceFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let params = family.random_params(n, &mut rng);
    gen_random_instance(&params, seed).expect("family parameters are valid")
}
