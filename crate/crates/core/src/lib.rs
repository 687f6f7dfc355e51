//! Exact-arithmetic engine for one-leg orbifold refined topological vertices.
//!
//! The crate computes, over exact cyclotomic coefficient fields:
//! - integer partition statistics and symmetric group characters,
//! - Schur and skew-Schur functions at structured infinite specializations,
//! - the double Hurwitz series `Φ•` and double Hurwitz numbers,
//! - the one-leg orbifold refined vertex and its exponential-coordinate form,
//! - glued partition functions of the local football and resolved conifold.
//!
//! All series live in [`series::MultiSeries`], a sparse truncated formal
//! series with exact rational exponents and [`exact::CycloNumber`]
//! coefficients. Every generating-function identity shipped here is also
//! checkable at runtime through [`checks`] (or `ovx selfcheck` on the CLI).

pub mod characters;
pub mod checks;
pub mod cli;
pub mod error;
pub mod exact;
pub mod gluing;
pub mod hurwitz;
pub mod partition;
pub mod series;
pub mod symfunc;
pub mod vertex;

pub use error::{Error, Result};
pub use exact::{CycloNumber, Rational};
pub use partition::Partition;
pub use series::{MultiSeries, Truncation, Var};
