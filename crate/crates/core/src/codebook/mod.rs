//! The explicit prefix-free description system.

pub mod atoms;
pub mod codec;
pub mod conditional;
pub mod decode;
pub mod engine;
pub mod famdist;
pub mod kraft;
pub mod registry;
pub mod sf;
pub mod system;
pub mod table;

/// Largest string length the description system accepts.
pub const MAX_N: u32 = 24;
