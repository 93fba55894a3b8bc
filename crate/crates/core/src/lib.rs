//! Construction, verification and classification of flag-transitive
//! 2-designs with an invariant point partition.
//!
//! The crate is layered bottom-up:
//!
//! * [`perm`] and [`group`]: permutations and Schreier–Sims permutation groups.
//! * [`action`]: orbits, transitivity, block systems, induced actions and
//!   set orbits.
//! * [`field`] and [`geometry`]: small finite fields, projective and affine
//!   point sets, the classical groups acting on them, and the triple designs
//!   built from collinearity.
//! * [`design`]: incidence structures, 2-design and flag-transitivity checks,
//!   and the partition invariants `k₀` (trace size) and `θ` (overlap number).
//! * [`numth`], [`params`] and [`catalog`]: closed-form parameter families,
//!   primitive parts, Gaussian binomials and the exhaustive Diophantine
//!   searches.
//! * [`format`] and [`report`]: the design file format and the end-to-end
//!   classification report.

pub mod action;
pub mod catalog;
pub mod design;
pub mod field;
pub mod format;
pub mod geometry;
pub mod group;
pub mod numth;
pub mod params;
pub mod perm;
pub mod report;

pub use action::{BlockSystem, InducedAction, MinimalBlocks};
pub use design::IncidenceStructure;
pub use group::PermutationGroup;
pub use perm::Permutation;
