//! Odd-only, bit-packed sieve segments.
//!
//! Bit `b` of a segment stands for the odd number `base + 2b + 1`, where
//! `base` is the segment's lower bound rounded down to a multiple of 128.
//! That alignment puts every segment on a word boundary of the global
//! odd-number bitmap, so the pre-sieve pattern for 3..13 can be copied
//! in whole words.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest exclusive upper bound a segment may have.
pub const MAX_BOUND: u64 = 1 << 63;

/// Default maximum `hi - lo` of a single segment.
pub const DEFAULT_SEGMENT_SPAN: u64 = 1 << 26;

const PRESIEVED: [u64; 5] = [3, 5, 7, 11, 13];
const PATTERN_WORDS: usize = 3 * 5 * 7 * 11 * 13;

// Words crossed per cache block; 32 KiB of bits.
const BLOCK_WORDS: usize = 1 << 12;
const BLOCK_BITS: u64 = (BLOCK_WORDS as u64) * 64;

fn presieve_pattern() -> &'static [u64] {
    static PATTERN: OnceLock<Vec<u64>> = OnceLock::new();
    PATTERN.get_or_init(|| {
        let mut words = vec![0u64; PATTERN_WORDS];
        for (w, word) in words.iter_mut().enumerate() {
            for b in 0..64u64 {
                let n = 2 * (w as u64 * 64 + b) + 1;
                if PRESIEVED.iter().all(|&p| n % p != 0) {
                    *word |= 1 << b;
                }
            }
        }
        words
    })
}

/// Primes flagged in the half-open interval `[lo, hi)`.
#[derive(Clone, Debug)]
pub struct SieveSegment {
    lo: u64,
    hi: u64,
    base: u64,
    has_two: bool,
    words: Vec<u64>,
}

impl SieveSegment {
    /// Sieve `[lo, hi)` using `base_primes`, which must contain every prime
    /// up to `sqrt(hi)` (extra primes are ignored).
    pub(crate) fn sieve(lo: u64, hi: u64, base_primes: &[u32]) -> Self {
        debug_assert!(lo < hi && hi <= MAX_BOUND);
        let base = lo & !127;
        let nbits = (hi - base) / 2;
        let nwords = nbits.div_ceil(64).max(1) as usize;

        let pattern = presieve_pattern();
        let mut words = Vec::with_capacity(nwords);
        let mut at = ((base / 128) % PATTERN_WORDS as u64) as usize;
        while words.len() < nwords {
            let take = (PATTERN_WORDS - at).min(nwords - words.len());
            words.extend_from_slice(&pattern[at..at + take]);
            at = 0;
        }

        let mut seg = SieveSegment {
            lo,
            hi,
            base,
            has_two: lo <= 2 && 2 < hi,
            words,
        };
        if base == 0 {
            // 1 is not prime; the pre-sieved primes themselves were struck.
            seg.words[0] &= !1;
            for p in PRESIEVED {
                if p < hi {
                    seg.set_bit((p - 1) / 2);
                }
            }
        }
        seg.cross_off(base_primes);
        seg.trim();
        seg
    }

    fn cross_off(&mut self, base_primes: &[u32]) {
        let start_at = PRESIEVED.len() + 1;
        let nbits = (self.words.len() as u64) * 64;
        let base = self.base;
        let hi = self.hi;

        // next bit to clear for each active prime
        let mut active: Vec<(u64, u64)> = Vec::new();
        for &p in base_primes.iter().skip(start_at) {
            let p = p as u64;
            let sq = p * p;
            if sq >= hi {
                break;
            }
            let mut m = base.div_ceil(p) * p;
            if m % 2 == 0 {
                m += p;
            }
            let m = m.max(sq);
            active.push(((m - base - 1) / 2, p));
        }
        let words = &mut self.words;
        let mut block_start = 0u64;
        while block_start < nbits {
            let block_end = (block_start + BLOCK_BITS).min(nbits);
            for (next, p) in active.iter_mut() {
                let mut j = *next;
                let step = *p;
                while j < block_end {
                    words[(j >> 6) as usize] &= !(1u64 << (j & 63));
                    j += step;
                }
                *next = j;
            }
            block_start = block_end;
        }
    }

    // Clear bits for numbers outside [lo, hi).
    fn trim(&mut self) {
        let first = (self.lo.max(self.base + 1) - self.base - 1).div_ceil(2);
        for j in 0..first {
            self.clear_bit(j);
        }
        let end = (self.hi - self.base) / 2;
        let w = (end / 64) as usize;
        if w < self.words.len() {
            self.words[w] &= (1u64 << (end % 64)) - 1;
            for word in &mut self.words[w + 1..] {
                *word = 0;
            }
        }
    }

    #[inline]
    fn set_bit(&mut self, j: u64) {
        self.words[(j >> 6) as usize] |= 1 << (j & 63);
    }

    #[inline]
    fn clear_bit(&mut self, j: u64) {
        self.words[(j >> 6) as usize] &= !(1 << (j & 63));
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n < self.lo || n >= self.hi {
            return false;
        }
        if n == 2 {
            return true;
        }
        if n % 2 == 0 {
            return false;
        }
        let j = (n - self.base - 1) / 2;
        self.words[(j >> 6) as usize] >> (j & 63) & 1 == 1
    }

    /// Number of primes in the segment.
    pub fn count(&self) -> u64 {
        self.has_two as u64 + self.words.iter().map(|w| w.count_ones() as u64).sum::<u64>()
    }

    /// The `r`-th prime of the segment (1-based), if there are that many.
    pub fn nth(&self, mut r: u64) -> Option<u64> {
        if r == 0 {
            return None;
        }
        if self.has_two {
            if r == 1 {
                return Some(2);
            }
            r -= 1;
        }
        for (w, &word) in self.words.iter().enumerate() {
            let c = word.count_ones() as u64;
            if r > c {
                r -= c;
                continue;
            }
            let mut word = word;
            for _ in 1..r {
                word &= word - 1;
            }
            let j = w as u64 * 64 + word.trailing_zeros() as u64;
            return Some(self.base + 2 * j + 1);
        }
        None
    }

    /// Largest prime in the segment.
    pub fn last(&self) -> Option<u64> {
        for (w, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                let j = w as u64 * 64 + 63 - word.leading_zeros() as u64;
                return Some(self.base + 2 * j + 1);
            }
        }
        self.has_two.then_some(2)
    }

    /// Primes of the segment in ascending order.
    /// Primes at the ascending 1-based `ranks`, appended to `out` in one scan.
    /// Stops at the first rank past the end of the segment.
    pub fn select(&self, ranks: &[u64], out: &mut Vec<u64>) {
        let mut ranks = ranks.iter().copied().peekable();
        let mut seen = 0u64;
        if self.has_two {
            if ranks.next_if_eq(&1).is_some() {
                out.push(2);
            }
            seen = 1;
        }
        for (w, &word) in self.words.iter().enumerate() {
            let Some(&r) = ranks.peek() else { return };
            let c = word.count_ones() as u64;
            if r > seen + c {
                seen += c;
                continue;
            }
            let mut word = word;
            let mut at = seen;
            while let Some(r) = ranks.next_if(|&r| r <= seen + c) {
                while at + 1 < r {
                    word &= word - 1;
                    at += 1;
                }
                out.push(self.base + 2 * (w as u64 * 64 + word.trailing_zeros() as u64) + 1);
            }
            seen += c;
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let base = self.base;
        self.has_two.then_some(2).into_iter().chain(
            self.words.iter().enumerate().flat_map(move |(w, &word)| {
                let mut word = word;
                std::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let b = word.trailing_zeros() as u64;
                    word &= word - 1;
                    Some(base + 2 * (w as u64 * 64 + b) + 1)
                })
            }),
        )
    }
}

/// All primes `<= limit` by a plain sieve. Used for base primes.
pub(crate) fn small_primes(limit: u64) -> Vec<u32> {
    assert!(limit < u32::MAX as u64, "small_primes limit too large");
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if composite[n] {
            continue;
        }
        primes.push(n as u32);
        let mut m = n * n;
        while m <= limit {
            composite[m] = true;
            m += n;
        }
    }
    primes
}

/// Sieve `[lo, hi)` as a standalone segment whose width may not exceed `span`.
pub fn sieve_range(lo: u64, hi: u64, span: u64) -> Result<SieveSegment> {
    if hi > MAX_BOUND {
        return Err(Error::BoundTooLarge(hi));
    }
    if lo >= hi {
        return Err(Error::EmptyInterval { lo, hi });
    }
    if hi - lo > span {
        return Err(Error::SpanTooLarge { span: hi - lo, max: span });
    }
    let base_primes = small_primes(hi.isqrt() + 1);
    Ok(SieveSegment::sieve(lo, hi, &base_primes))
}
