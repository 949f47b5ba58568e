use std::borrow::Cow;
use std::path::Path;

use super::cache::{CacheSummary, Checkpoints, DEFAULT_STRIDE};
use super::segment::{small_primes, SieveSegment, DEFAULT_SEGMENT_SPAN, MAX_BOUND};
use crate::error::{Error, Result};

/// Default largest value the engine will sieve to. Covers q^6(2500) with room.
pub const DEFAULT_UNIVERSE_BOUND: u64 = 32_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Largest prime value queries may produce.
    pub universe_bound: u64,
    /// Numbers covered by one sieve segment.
    pub segment_span: u64,
    /// Primes between checkpoints when building a cache.
    pub checkpoint_stride: u64,
    /// Segments sieved concurrently.
    pub threads: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            universe_bound: DEFAULT_UNIVERSE_BOUND,
            segment_span: DEFAULT_SEGMENT_SPAN,
            checkpoint_stride: DEFAULT_STRIDE,
            threads: 1,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.universe_bound < 2 {
            return Err(Error::InvalidArgument("universe bound must be at least 2".into()));
        }
        if self.universe_bound >= MAX_BOUND {
            return Err(Error::BoundTooLarge(self.universe_bound));
        }
        if self.segment_span < 128 {
            return Err(Error::InvalidArgument("segment span must be at least 128".into()));
        }
        if self.checkpoint_stride == 0 {
            return Err(Error::InvalidArgument("checkpoint stride must be positive".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        Ok(())
    }
}

/// Streaming prime generator with random access by index.
///
/// Every query walks sieve segments forward from the nearest checkpoint
/// (or from zero), counting primes by popcount and only decoding the
/// segments that contain a requested index.
#[derive(Debug)]
pub struct PrimeEngine {
    config: EngineConfig,
    base_primes: Vec<u32>,
    checkpoints: Option<Checkpoints>,
}

impl PrimeEngine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        let base_primes = small_primes(config.universe_bound.isqrt() + 1);
        Ok(PrimeEngine {
            config,
            base_primes,
            checkpoints: None,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn checkpoints(&self) -> Option<&Checkpoints> {
        self.checkpoints.as_ref()
    }

    pub fn set_checkpoints(&mut self, checkpoints: Checkpoints) {
        self.checkpoints = Some(checkpoints);
    }

    pub fn load_cache(&mut self, path: &Path) -> Result<()> {
        self.checkpoints = Some(Checkpoints::load(path)?);
        Ok(())
    }

    fn base_primes_for(&self, hi: u64) -> Cow<'_, [u32]> {
        let need = hi.isqrt() + 1;
        if self.base_primes.last().is_some_and(|&p| p as u64 >= need) {
            Cow::Borrowed(&self.base_primes)
        } else {
            Cow::Owned(small_primes(need + 64))
        }
    }

    /// Sieve consecutive segments covering `[lo, end)`, at most `count` of them.
    fn segments(&self, lo: u64, end: u64, count: usize, base: &[u32]) -> Vec<SieveSegment> {
        let span = self.config.segment_span;
        let bounds: Vec<(u64, u64)> = (0..count as u64)
            .map(|s| lo.saturating_add(s.saturating_mul(span)))
            .take_while(|&a| a < end)
            .map(|a| (a, a.saturating_add(span).min(end)))
            .collect();
        if bounds.len() <= 1 || self.config.threads == 1 {
            return bounds
                .into_iter()
                .map(|(a, b)| SieveSegment::sieve(a, b, base))
                .collect();
        }
        std::thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .into_iter()
                .map(|(a, b)| scope.spawn(move || SieveSegment::sieve(a, b, base)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sieve worker panicked"))
                .collect()
        })
    }

    /// Visit segments in ascending order from `lo` until `end` or until the
    /// visitor returns `false`.
    fn walk(&self, lo: u64, end: u64, mut visit: impl FnMut(&SieveSegment) -> bool) {
        let base = self.base_primes_for(end);
        let mut at = lo;
        while at < end {
            for seg in self.segments(at, end, self.config.threads, &base) {
                at = seg.hi();
                if !visit(&seg) {
                    return;
                }
            }
        }
    }

    /// π(x): the number of primes `<= x`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        if x < 2 {
            return Ok(0);
        }
        if x >= MAX_BOUND - 1 {
            return Err(Error::BoundTooLarge(x));
        }
        let (mut count, lo) = match self.checkpoints.as_ref().and_then(|c| c.at_or_below_value(x)) {
            Some(cp) => (cp.index, cp.value + 1),
            None => (0, 0),
        };
        self.walk(lo, x + 1, |seg| {
            count += seg.count();
            true
        });
        Ok(count)
    }

    /// p_n, the `n`-th prime (1-based).
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        Ok(self.resolve_indices(&[n])?[0])
    }

    /// Primes at each of the strictly ascending 1-based `indices`, found in a
    /// single forward pass.
    pub fn resolve_indices(&self, indices: &[u64]) -> Result<Vec<u64>> {
        if let Some(&first) = indices.first() {
            if first == 0 {
                return Err(Error::ZeroIndex);
            }
        }
        if let Some(position) = indices.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NotAscending { position: position + 1 });
        }

        let bound = self.config.universe_bound;
        let end = bound + 1;
        let mut out = Vec::with_capacity(indices.len());
        let mut pos = 0u64;
        let mut count = 0u64;
        while out.len() < indices.len() {
            let target = indices[out.len()];
            if let Some(cp) = self.checkpoints.as_ref().and_then(|c| c.below_index(target)) {
                if cp.index > count && cp.value < end {
                    count = cp.index;
                    pos = cp.value + 1;
                }
            }
            if pos >= end {
                return Err(Error::BeyondUniverse { index: target, bound });
            }
            // Walk until done, or until a checkpoint lets us skip ahead.
            self.walk(pos, end, |seg| {
                let c = seg.count();
                let done = out.len();
                let here = indices[done..].partition_point(|&t| t <= count + c);
                let ranks: Vec<u64> = indices[done..done + here].iter().map(|t| t - count).collect();
                seg.select(&ranks, &mut out);
                count += c;
                pos = seg.hi();
                indices.get(out.len()).is_some_and(|&t| {
                    self.checkpoints
                        .as_ref()
                        .and_then(|cps| cps.below_index(t))
                        .map_or(true, |cp| cp.index <= count)
                })
            });
        }
        Ok(out)
    }

    /// Sieve every prime `<= limit`, write the checkpoint file to `path`, and
    /// keep the checkpoints on this engine.
    pub fn build_cache(&mut self, limit: u64, path: &Path) -> Result<CacheSummary> {
        if limit < 2 {
            return Err(Error::InvalidArgument("cache limit must be at least 2".into()));
        }
        if limit >= MAX_BOUND - 1 {
            return Err(Error::BoundTooLarge(limit));
        }
        let stride = self.config.checkpoint_stride;
        let mut primes = Vec::new();
        let mut count = 0u64;
        let mut max = 0u64;
        self.walk(0, limit + 1, |seg| {
            let c = seg.count();
            let first = (count / stride + 1) * stride;
            let ranks: Vec<u64> = (first..=count + c).step_by(stride as usize).map(|t| t - count).collect();
            seg.select(&ranks, &mut primes);
            count += c;
            if let Some(last) = seg.last() {
                max = last;
            }
            true
        });
        let checkpoints = Checkpoints::new(stride, primes)?;
        checkpoints.save(path)?;
        let summary = CacheSummary {
            count,
            max,
            stride,
            checkpoints: checkpoints.len() as u64,
        };
        self.checkpoints = Some(checkpoints);
        Ok(summary)
    }
}

/// π(x) with a default engine.
pub fn prime_count(x: u64) -> Result<u64> {
    PrimeEngine::new(EngineConfig {
        universe_bound: x.clamp(2, MAX_BOUND - 2),
        ..EngineConfig::default()
    })?
    .prime_count(x)
}

/// p_n with a default engine.
pub fn nth_prime(n: u64) -> Result<u64> {
    PrimeEngine::new(EngineConfig::default())?.nth_prime(n)
}
