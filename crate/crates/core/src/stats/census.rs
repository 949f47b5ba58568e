//! Zeros of `ℸ` and the per-row sign census.

use std::cmp::Ordering;

use serde::Serialize;

use crate::daleth::{daleth_batch, daleth_range, DalethSpec};
use crate::error::{Error, Result};
use crate::sieve::PrimeEngine;

use super::{FitParams, FitResult};

/// Number of `i` in `1..=T` with `ℸ(i) = 0`.
pub fn count_zeros(engine: &PrimeEngine, spec: DalethSpec, t: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::InvalidArgument("T must be at least 1".into()));
    }
    let d = daleth_range(engine, spec, 1, t)?;
    Ok(d.values.iter().filter(|&&v| v == 0).count() as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityPoint {
    pub k: u32,
    pub t: u64,
    pub zeros: u64,
    pub density: f64,
}

/// Exponential fit `density(k) = A e^{B k}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroDensityFit {
    pub points: Vec<DensityPoint>,
    /// Orders whose density was zero and so could not enter the log fit.
    pub dropped: Vec<u32>,
    /// `FitParams::Exponential`; goodness is R² of the straight line in log space.
    pub fit: FitResult,
    /// R² of `A e^{Bk}` against the raw densities.
    pub r_squared_linear: f64,
}

/// Least-squares line through `(k, ln density)`.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<(FitResult, f64)> {
    if points.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: points.len(),
        });
    }
    if points.iter().any(|&(_, d)| !(d > 0.0)) {
        return Err(Error::InvalidArgument("exponential fit needs positive values".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let logs: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let line = super::ols_fit(&xs, &logs)?;
    let FitParams::Linear { a0, a1 } = line.params else {
        unreachable!("ols_fit returns a line")
    };
    let (a, b) = (a0.exp(), a1);

    let mean = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|p| (p.1 - a * (b * p.0).exp()).powi(2)).sum();
    let r2_linear = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok((
        FitResult {
            params: FitParams::Exponential { a, b },
            goodness: line.goodness,
        },
        r2_linear,
    ))
}

/// Zero density `count_zeros / T` of `ℸ` for each order in `ks` (with the
/// matching sample size from `ts`), then an exponential fit against `k`.
/// `base` supplies `h`, `n` and `s`; its `k` is ignored.
pub fn zero_density_fit(
    engine: &PrimeEngine,
    base: DalethSpec,
    ks: &[u32],
    ts: &[u64],
) -> Result<ZeroDensityFit> {
    if ks.len() != ts.len() {
        return Err(Error::InvalidArgument("one sample size per order is required".into()));
    }
    if ks.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: ks.len(),
        });
    }
    let mut points = Vec::with_capacity(ks.len());
    for (&k, &t) in ks.iter().zip(ts) {
        let zeros = count_zeros(engine, DalethSpec { k, ..base }, t)?;
        points.push(DensityPoint {
            k,
            t,
            zeros,
            density: zeros as f64 / t as f64,
        });
    }
    density_fit(points)
}

/// Fit already-counted densities. Zero densities are dropped.
pub fn density_fit(points: Vec<DensityPoint>) -> Result<ZeroDensityFit> {
    let dropped: Vec<u32> = points.iter().filter(|p| p.zeros == 0).map(|p| p.k).collect();
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.zeros > 0)
        .map(|p| (p.k as f64, p.density))
        .collect();
    let (fit, r_squared_linear) = fit_exponential(&usable)?;
    Ok(ZeroDensityFit {
        points,
        dropped,
        fit,
        r_squared_linear,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    /// Cells examined (rows × orders).
    pub cells: u64,
    pub total: u64,
    /// `(i, k)` of every outlier, row-major.
    pub positions: Vec<(u64, u32)>,
    /// Rows with an even split of nonzero signs; they contribute no outliers.
    pub tied_rows: Vec<u64>,
}

/// Sign census over a grid: `rows[r][c]` is the value at row `first_i + r`
/// and order `first_k + c`. Zeros do not vote and are never outliers.
pub fn census_grid(rows: &[Vec<i64>], first_i: u64, first_k: u32) -> Census {
    let mut census = Census {
        cells: 0,
        total: 0,
        positions: Vec::new(),
        tied_rows: Vec::new(),
    };
    for (r, row) in rows.iter().enumerate() {
        let i = first_i + r as u64;
        census.cells += row.len() as u64;
        let pos = row.iter().filter(|&&v| v > 0).count();
        let neg = row.iter().filter(|&&v| v < 0).count();
        let majority = match pos.cmp(&neg) {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => {
                if pos > 0 {
                    census.tied_rows.push(i);
                }
                continue;
            }
        };
        for (c, &v) in row.iter().enumerate() {
            if v != 0 && v.signum() != majority {
                census.positions.push((i, first_k + c as u32));
            }
        }
    }
    census.total = census.positions.len() as u64;
    census
}

/// Outliers of `ℸ` over `i = 1..=i_max` and `k = k_min..=k_max`, with
/// `h`, `n` and `s` taken from `base`.
pub fn outlier_census(
    engine: &PrimeEngine,
    i_max: u64,
    k_min: u32,
    k_max: u32,
    base: DalethSpec,
) -> Result<Census> {
    if i_max == 0 {
        return Err(Error::InvalidArgument("i_max must be at least 1".into()));
    }
    if k_min > k_max {
        return Err(Error::InvalidArgument(format!("order range {k_min}:{k_max} is empty")));
    }
    let specs: Vec<DalethSpec> = (k_min..=k_max).map(|k| DalethSpec { k, ..base }).collect();
    let columns = daleth_batch(engine, &specs, 1, i_max)?;
    let rows: Vec<Vec<i64>> = (0..i_max as usize)
        .map(|r| columns.iter().map(|c| c.values[r]).collect())
        .collect();
    Ok(census_grid(&rows, 1, k_min))
}
