//! Segmented sieve of Eratosthenes with streaming nth-prime resolution.

mod cache;
mod engine;
mod segment;

pub use cache::{CacheSummary, Checkpoints, PrimeCheckpoint, DEFAULT_STRIDE};
pub use engine::{nth_prime, prime_count, EngineConfig, PrimeEngine, DEFAULT_UNIVERSE_BOUND};
pub use segment::{sieve_range, SieveSegment, DEFAULT_SEGMENT_SPAN, MAX_BOUND};
