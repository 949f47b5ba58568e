//! Forward finite differences of PIP sequences, and the two level filters
//! used for gridplots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pip::{pip_levels, LevelRequest, PipSpec};
use crate::sieve::PrimeEngine;

/// Largest difference order accepted by [`DalethSpec::validate`].
pub const MAX_DIFF_ORDER: u32 = 12;

/// Spacing `h`, difference order `n`, shift `s` and prime-index order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DalethSpec {
    pub h: u64,
    pub n: u32,
    pub s: u64,
    pub k: u32,
}

impl DalethSpec {
    pub fn new(h: u64, n: u32, s: u64, k: u32) -> Self {
        DalethSpec { h, n, s, k }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h == 0 {
            return Err(Error::InvalidArgument("spacing h must be at least 1".into()));
        }
        if self.n > MAX_DIFF_ORDER {
            return Err(Error::InvalidArgument(format!(
                "difference order {} exceeds {MAX_DIFF_ORDER}",
                self.n
            )));
        }
        Ok(())
    }

    /// Extra PIP terms needed beyond the last difference index.
    pub fn reach(&self) -> u64 {
        self.n as u64 * self.h
    }

    pub fn pip(&self) -> PipSpec {
        PipSpec::new(self.k, self.s)
    }
}

/// What a [`Series`] was generated from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SeriesSpec {
    Pip(PipSpec),
    Daleth(DalethSpec),
    /// Supplied directly rather than generated.
    Data,
}

/// Filter applied after generation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    #[default]
    None,
    Sign,
    Quant256,
}

/// A contiguous run of values indexed from `start` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Series {
    pub spec: SeriesSpec,
    pub filter: Filter,
    pub start: u64,
    pub values: Vec<i64>,
}

impl Series {
    pub fn from_values(values: Vec<i64>) -> Self {
        Series {
            spec: SeriesSpec::Data,
            filter: Filter::None,
            start: 1,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(i, value)` pairs.
    pub fn indexed(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        (self.start..).zip(self.values.iter().copied())
    }

    /// Keep the first `len` values.
    pub fn truncated(mut self, len: usize) -> Self {
        self.values.truncate(len);
        self
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }
}

/// Exact binomial coefficient C(n, m) for `0 <= m <= n <= 62`.
pub fn binomial(n: u32, m: u32) -> Result<u64> {
    if n > 62 || m > n {
        return Err(Error::InvalidArgument(format!("binomial({n}, {m}) out of range")));
    }
    let m = m.min(n - m) as u128;
    let mut c: u128 = 1;
    for i in 0..m {
        c = c * (n as u128 - i) / (i + 1);
    }
    Ok(c as u64)
}

/// `Δ_h^n`: `out[i] = Σ_m (-1)^m C(n, m) values[i + (n - m) h]`.
pub fn finite_difference(values: &[i64], n: u32, h: u64) -> Result<Vec<i64>> {
    if h == 0 {
        return Err(Error::InvalidArgument("spacing h must be at least 1".into()));
    }
    if n > 62 {
        return Err(Error::InvalidArgument(format!("difference order {n} out of range")));
    }
    let reach = (n as u64)
        .checked_mul(h)
        .and_then(|r| usize::try_from(r).ok())
        .ok_or(Error::Overflow("difference reach"))?;
    if values.len() <= reach {
        return Err(Error::TooShort {
            needed: reach + 1,
            got: values.len(),
        });
    }
    let h = h as usize;
    let coeffs: Vec<i64> = (0..=n)
        .map(|m| {
            let c = i64::try_from(binomial(n, m)?).map_err(|_| Error::Overflow("binomial"))?;
            Ok(if m % 2 == 0 { c } else { -c })
        })
        .collect::<Result<_>>()?;
    (0..values.len() - reach)
        .map(|i| {
            coeffs.iter().enumerate().try_fold(0i64, |acc, (m, &c)| {
                let term = values[i + (n as usize - m) * h]
                    .checked_mul(c)
                    .ok_or(Error::Overflow("finite difference"))?;
                acc.checked_add(term).ok_or(Error::Overflow("finite difference"))
            })
        })
        .collect()
}

fn to_signed(values: Vec<u64>) -> Result<Vec<i64>> {
    values
        .into_iter()
        .map(|v| i64::try_from(v).map_err(|_| Error::Overflow("PIP value")))
        .collect()
}

/// `ℸ` for `i` in `i_lo..=i_hi`.
pub fn daleth_range(engine: &PrimeEngine, spec: DalethSpec, i_lo: u64, i_hi: u64) -> Result<Series> {
    Ok(daleth_batch(engine, &[spec], i_lo, i_hi)?.pop().expect("one spec"))
}

/// `ℸ` for several specs over the same index range, sharing sieve passes.
pub fn daleth_batch(
    engine: &PrimeEngine,
    specs: &[DalethSpec],
    i_lo: u64,
    i_hi: u64,
) -> Result<Vec<Series>> {
    for spec in specs {
        spec.validate()?;
    }
    if i_lo == 0 {
        return Err(Error::ZeroIndex);
    }
    if i_lo > i_hi {
        return Err(Error::InvalidArgument(format!("index range {i_lo}:{i_hi} is empty")));
    }
    // one level request per (shift, extent)
    let mut groups: BTreeMap<(u64, u64), u32> = BTreeMap::new();
    for spec in specs {
        let hi = i_hi.checked_add(spec.reach()).ok_or(Error::Overflow("index range"))?;
        let k = groups.entry((spec.s, hi)).or_insert(0);
        *k = (*k).max(spec.k);
    }
    let keys: Vec<(u64, u64)> = groups.keys().copied().collect();
    let requests: Vec<LevelRequest> = groups
        .iter()
        .map(|(&(s, hi), &max_k)| LevelRequest { s, max_k, i_lo, i_hi: hi })
        .collect();
    let levels = pip_levels(engine, &requests)?;

    specs
        .iter()
        .map(|spec| {
            let g = keys
                .binary_search(&(spec.s, i_hi + spec.reach()))
                .expect("group exists");
            let pips = to_signed(levels[g][spec.k as usize].clone())?;
            Ok(Series {
                spec: SeriesSpec::Daleth(*spec),
                filter: Filter::None,
                start: i_lo,
                values: finite_difference(&pips, spec.n, spec.h)?,
            })
        })
        .collect()
}

/// Elementwise signum.
pub fn sign_filter(series: &Series) -> Series {
    Series {
        filter: Filter::Sign,
        values: series.values.iter().map(|v| v.signum()).collect(),
        ..series.clone()
    }
}

/// Affine map of `[min, max]` onto `0..=255`, rounded half away from zero.
/// A constant series maps to all zeros.
pub fn quantize256(series: &Series) -> Result<Series> {
    let (Some(&min), Some(&max)) = (series.values.iter().min(), series.values.iter().max()) else {
        return Err(Error::TooShort { needed: 1, got: 0 });
    };
    let span = max as i128 - min as i128;
    let values = series
        .values
        .iter()
        .map(|&v| {
            if span == 0 {
                return 0;
            }
            // nint(255 (v - min) / span) on non-negative rationals
            let num = 255 * (v as i128 - min as i128);
            ((2 * num + span) / (2 * span)) as i64
        })
        .collect();
    Ok(Series {
        filter: Filter::Quant256,
        values,
        ..series.clone()
    })
}
