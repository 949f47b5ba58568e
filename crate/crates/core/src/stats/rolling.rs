use serde::Serialize;

use crate::daleth::Series;
use crate::error::{Error, Result};

/// Windowed mean and sample variance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RollingMoments {
    /// Sample size T.
    pub sample_size: usize,
    /// Window width w.
    pub window: usize,
    /// Step y.
    pub step: usize,
    pub rows: Vec<MomentRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    /// 1-based position of the window's last sample.
    pub i: usize,
    pub mean: f64,
    pub variance: f64,
}

/// Means and `1/(w-1)` variances over the trailing `w` samples at
/// `i = w, w + y, ..., w + floor((T - w)/y) y`.
///
/// Window sums are taken from exact 128-bit prefix sums, so the result does
/// not depend on where the window sits in a long series.
pub fn rolling_moments(series: &Series, w: usize, y: usize) -> Result<RollingMoments> {
    if w < 2 {
        return Err(Error::InvalidArgument("window width must be at least 2".into()));
    }
    if y == 0 {
        return Err(Error::InvalidArgument("step must be at least 1".into()));
    }
    let values = &series.values;
    if values.len() < w {
        return Err(Error::TooShort {
            needed: w,
            got: values.len(),
        });
    }
    let mut sum = Vec::with_capacity(values.len() + 1);
    let mut sum_sq = Vec::with_capacity(values.len() + 1);
    sum.push(0i128);
    sum_sq.push(0i128);
    for &v in values {
        let v = v as i128;
        sum.push(sum.last().unwrap() + v);
        sum_sq.push(sum_sq.last().unwrap() + v * v);
    }

    let wi = w as i128;
    let rows = (w..=values.len())
        .step_by(y)
        .map(|i| {
            let s = sum[i] - sum[i - w];
            let sq = sum_sq[i] - sum_sq[i - w];
            // w Σx² - (Σx)² is exact and non-negative
            let centered = wi * sq - s * s;
            MomentRow {
                i,
                mean: s as f64 / w as f64,
                variance: centered as f64 / (wi * (wi - 1)) as f64,
            }
        })
        .collect();
    Ok(RollingMoments {
        sample_size: values.len(),
        window: w,
        step: y,
        rows,
    })
}
