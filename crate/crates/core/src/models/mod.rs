//! Finite models, model families and rational distributions.

pub mod distribution;
pub mod enumerate;
pub mod family;
pub mod model;
pub mod parse;

pub use distribution::{family_distribution, DistKind, DistributionFamily, RationalDistribution};
pub use enumerate::{enumerate_distributions, enumerate_model_entries, enumerate_models, DistEntry, DistHandle, ModelEntry};
pub use family::{FamilyId, ModelParams, Word};
pub use model::FiniteModel;
pub use parse::{parse_distribution, parse_model};
