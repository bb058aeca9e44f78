//! Matroid families, instance files, generators and the brute-force optimum.

mod brute;
pub mod fixtures;
mod generate;
mod matroids;
mod spec;

pub use brute::{brute_force_max_common, BRUTE_FORCE_LIMIT};
pub use generate::{gen_random_instance, random_family_instance, Family, GenParams};
pub use matroids::{GraphicMatroid, LinearMatroid, PartitionMatroid, UniformMatroid, MAX_PRIME};
pub use spec::{build_oracles, InstanceFile, MatroidSpec};
