//! Exact, enumerable algorithmic statistics over an explicit prefix-free description system:
//! complexities, a-priori masses, deficiencies, profiles, prediction neighborhoods, the
//! marking game, and the witness constructions, all computed by exhaustive enumeration at
//! small string lengths.

pub mod bits;
pub mod codebook;
pub mod error;
pub mod field;
pub mod models;
pub mod scalar;
pub mod statistics;
pub mod prediction;
pub mod constructions;
pub mod games;
pub mod verify;

pub use bits::{BitString, StringTuple};
pub use codebook::engine::{apriori, c, complexity};
pub use codebook::system::{DescriptionSystem, Object, CODEBOOK_VERSION};
pub use error::{Error, Result};
pub use models::{DistributionFamily, FamilyId, FiniteModel, RationalDistribution};
pub use scalar::{Dyadic, Weight};

/// Exact scalar used by every oracle.
pub type Exact = num_rational::BigRational;
/// Floating-point scalar for quick estimates through [`Weight`].
pub type Approx = f64;
