//! Exact combinatorics for non-commutative probability.
//!
//! The crate covers non-crossing partitions and their nesting forests, rooted
//! tree statistics (factorials, monotone and quasi-monotone counts, the
//! `omega` coefficients), the pre-Lie algebra of multilinear functionals with
//! its Magnus expansion, and every conversion among moments and free, Boolean
//! and monotone cumulants. All arithmetic is exact.
//!
//! The [`oracle`] module holds deliberately naive brute-force counterparts
//! used to cross-check the optimized paths, and [`verify`] bundles them into
//! named suites.

pub mod cumulants;
pub mod error;
pub mod io;
pub mod oracle;
pub mod partitions;
pub mod prelie;
pub mod trees;
pub mod verify;

pub use cumulants::{CumulantFamily, Kind};
pub use error::{Error, Result};
pub use partitions::{BlockSubset, MonotonePartition, NCPartition, VComponents};
pub use prelie::{Functional, PreLieMonomial, Word};
pub use trees::{Forest, RootedTree};

/// Exact rational number used for every coefficient and functional value.
pub type Rational = num_rational::BigRational;
