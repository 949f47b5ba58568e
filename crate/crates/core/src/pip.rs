//! Iterated, index-shifted prime-indexed primes.
//!
//! `q_s^k(i)` applies "take the `(s + ·)`-th prime" `k` times to `i`:
//! `q_s^1(i) = p_{s+i}`, `q_s^2(i) = p_{s+p_{s+i}}`, and so on. At `k = 0`
//! the value is `s + i`, the index consumed by the first prime application,
//! so `q_s^1(i) = p_{q_s^0(i)}`. For `s = 0`, `q^{a+b}(i) = q^a(q^b(i))`.
//!
//! Bulk evaluation resolves one nesting level at a time: the index set of
//! level `r` is `s +` (values of level `r - 1`), which is strictly ascending,
//! so each level is a single forward sieve pass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::PrimeEngine;

/// Largest prime-index order accepted by default.
pub const DEFAULT_MAX_ORDER: u32 = 8;

/// Prime-index order `k` and index-set shift `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PipSpec {
    pub k: u32,
    pub s: u64,
}

impl PipSpec {
    pub fn new(k: u32, s: u64) -> Self {
        PipSpec { k, s }
    }
}

/// Consecutive values `q_s^k(start), q_s^k(start + 1), ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipSeries {
    pub spec: PipSpec,
    pub start: u64,
    pub values: Vec<u64>,
}

/// One request in a [`pip_levels`] batch: every order `0..=max_k` for shift
/// `s` over indices `i_lo..=i_hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelRequest {
    pub s: u64,
    pub max_k: u32,
    pub i_lo: u64,
    pub i_hi: u64,
}

fn check_range(i_lo: u64, i_hi: u64) -> Result<()> {
    if i_lo == 0 {
        return Err(Error::ZeroIndex);
    }
    if i_lo > i_hi {
        return Err(Error::InvalidArgument(format!("index range {i_lo}:{i_hi} is empty")));
    }
    Ok(())
}

fn shifted(s: u64, v: u64) -> Result<u64> {
    s.checked_add(v).ok_or(Error::BoundTooLarge(v))
}

/// Evaluate several requests together. For each request the result holds
/// `max_k + 1` vectors: entry `r` is `q_s^r(i_lo..=i_hi)`.
///
/// All requests needing level `r` share one sieve pass for that level.
pub fn pip_levels(engine: &PrimeEngine, requests: &[LevelRequest]) -> Result<Vec<Vec<Vec<u64>>>> {
    let mut out: Vec<Vec<Vec<u64>>> = Vec::with_capacity(requests.len());
    for req in requests {
        check_range(req.i_lo, req.i_hi)?;
        let base: Vec<u64> = (req.i_lo..=req.i_hi)
            .map(|i| shifted(req.s, i))
            .collect::<Result<_>>()?;
        out.push(vec![base]);
    }
    let top = requests.iter().map(|r| r.max_k).max().unwrap_or(0);
    for level in 1..=top {
        let active: Vec<usize> = (0..requests.len())
            .filter(|&q| requests[q].max_k >= level)
            .collect();
        // level-0 entries already include s; deeper ones are primes
        let indices_of = |q: usize, prev: &[u64]| -> Result<Vec<u64>> {
            if level == 1 {
                Ok(prev.to_vec())
            } else {
                prev.iter().map(|&v| shifted(requests[q].s, v)).collect()
            }
        };
        let mut wanted = Vec::new();
        let mut per_request = Vec::with_capacity(active.len());
        for &q in &active {
            let idx = indices_of(q, out[q].last().expect("level 0 present"))?;
            wanted.extend_from_slice(&idx);
            per_request.push(idx);
        }
        wanted.sort_unstable();
        wanted.dedup();
        let primes = engine.resolve_indices(&wanted)?;
        for (&q, idx) in active.iter().zip(per_request) {
            let values = idx
                .iter()
                .map(|i| primes[wanted.binary_search(i).expect("index requested")])
                .collect();
            out[q].push(values);
        }
    }
    Ok(out)
}

/// `q_s^k(i)` for `i` in `i_lo..=i_hi`.
pub fn pip_range(engine: &PrimeEngine, spec: PipSpec, i_lo: u64, i_hi: u64) -> Result<PipSeries> {
    let mut levels = pip_levels(
        engine,
        &[LevelRequest {
            s: spec.s,
            max_k: spec.k,
            i_lo,
            i_hi,
        }],
    )?;
    let values = levels.pop().and_then(|mut l| l.pop()).expect("one request");
    Ok(PipSeries {
        spec,
        start: i_lo,
        values,
    })
}

/// `q_s^k(i)`.
pub fn pip(engine: &PrimeEngine, spec: PipSpec, i: u64) -> Result<u64> {
    Ok(pip_range(engine, spec, i, i)?.values[0])
}

fn loglog(x: f64) -> f64 {
    x.ln().ln()
}

/// `n log²n + 3n log n log log n`, the leading terms of the order-2 asymptotic.
pub fn broughan_barnett_approx(n: f64) -> Result<f64> {
    if !(n >= 3.0) {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 3")));
    }
    let l = n.ln();
    Ok(n * l * l + 3.0 * n * l * loglog(n))
}

/// `n (log n)^k`.
pub fn pip_asymptotic(n: f64, k: u32) -> Result<f64> {
    if !(n >= 2.0) {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    Ok(n * n.ln().powi(k as i32))
}

/// The lower bound `f(n) = n(log n + log log n - 1)` applied `k` times.
pub fn pip_lower_bound(n: f64, k: u32) -> Result<f64> {
    if !(n >= 4.0) {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 4")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    Ok((0..k).fold(n, |x, _| x * (x.ln() + loglog(x) - 1.0)))
}
