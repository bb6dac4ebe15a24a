//! Decide whether a permutation group synchronizes a transformation, build
//! and analyze the graph `Gr(S)` of a transformation semigroup, and run
//! theorem-verification sweeps over a catalog of small groups.
//!
//! Points are 0-based in the API and 1-based in every text format. Maps act
//! on the right: `x(fg) = (xf)g`.

pub mod catalog;
mod chain;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod group;
pub mod perm;
pub mod report;
pub mod semigroup;
pub mod sweep;
pub mod sync;

pub use error::{Error, Result};
pub use group::{BlockSystem, PermutationGroup};
pub use perm::{KernelType, Partition, PointSet, Transformation};

/// Largest supported degree; point sets and adjacency rows are single `u64` words.
pub const MAX_DEGREE: usize = 64;
