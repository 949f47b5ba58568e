//! Iterated prime-indexed primes, their finite differences, the statistics
//! built on them, and gridplot rendering.

pub mod config;
pub mod daleth;
pub mod error;
pub mod pip;
pub mod render;
pub mod sieve;
pub mod stats;

pub use error::{Error, Result};
