use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    Counts,
    Pdf,
}

/// One half-open bin `[left, left + width)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bin {
    pub left: f64,
    pub center: f64,
    pub count: u64,
    /// `count / (in_range * width)`; integrates to one over all bins.
    pub density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_width: f64,
    /// Left edge of the bin containing 0. Edges sit on multiples of the width.
    pub origin: f64,
    pub normalization: Normalization,
    pub bins: Vec<Bin>,
    pub in_range: u64,
    pub out_of_range: u64,
}

impl Histogram {
    /// The bin whose left edge is `left`, if present.
    pub fn bin_at(&self, left: f64) -> Option<&Bin> {
        let first = self.bins.first()?.left;
        let idx = ((left - first) / self.bin_width).round();
        if idx < 0.0 {
            return None;
        }
        self.bins.get(idx as usize).filter(|b| b.left == left)
    }
}

/// Bin `values` over `[lo, hi)` with edges on multiples of `bin_width`.
/// The first bin is the one containing `lo`; values outside every bin are
/// tallied in `out_of_range`.
pub fn histogram(
    values: &[f64],
    bin_width: f64,
    lo: f64,
    hi: f64,
    normalization: Normalization,
) -> Result<Histogram> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(Error::InvalidArgument("bin width must be positive".into()));
    }
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!("empty histogram range [{lo}, {hi})")));
    }
    let first = (lo / bin_width).floor();
    let nbins = ((hi / bin_width).ceil() - first).max(1.0) as usize;
    let mut counts = vec![0u64; nbins];
    let mut out_of_range = 0;
    for &v in values {
        let idx = (v / bin_width).floor() - first;
        if idx >= 0.0 && (idx as usize) < nbins {
            counts[idx as usize] += 1;
        } else {
            out_of_range += 1;
        }
    }
    let in_range: u64 = counts.iter().sum();
    let bins = counts
        .into_iter()
        .enumerate()
        .map(|(b, count)| {
            let left = (first + b as f64) * bin_width;
            Bin {
                left,
                center: left + bin_width / 2.0,
                count,
                density: if in_range == 0 {
                    0.0
                } else {
                    count as f64 / (in_range as f64 * bin_width)
                },
            }
        })
        .collect();
    Ok(Histogram {
        bin_width,
        origin: 0.0,
        normalization,
        bins,
        in_range,
        out_of_range,
    })
}

/// Fraction of nonzero multiples of 6 whose bin count is strictly below both
/// neighbours. Needs unit-width bins covering at least `-49..=49`; bins are
/// addressed by their left edge, which for integer data is the value.
///
/// A neighbour is the nearest non-empty bin on that side. Second differences
/// of odd primes are even, so their odd bins are empty and the comparison
/// runs between adjacent even values; with every bin populated this is the
/// plain `m - 1`, `m + 1` comparison. Multiples of 6 lacking a non-empty
/// neighbour on either side are skipped.
pub fn mod6_dip_score(hist: &Histogram) -> Result<f64> {
    if hist.bin_width != 1.0 {
        return Err(Error::InvalidArgument("mod-6 score needs unit-width bins".into()));
    }
    if hist.bin_at(-49.0).is_none() || hist.bin_at(49.0).is_none() {
        return Err(Error::InvalidArgument(
            "mod-6 score needs bins covering at least [-48, 48] and their neighbours".into(),
        ));
    }
    let first = hist.bins[0].left as i64;
    let (mut dips, mut total) = (0u32, 0u32);
    for (b, bin) in hist.bins.iter().enumerate() {
        let m = first + b as i64;
        if m == 0 || m % 6 != 0 {
            continue;
        }
        let left = hist.bins[..b].iter().rev().find(|n| n.count > 0);
        let right = hist.bins[b + 1..].iter().find(|n| n.count > 0);
        let (Some(left), Some(right)) = (left, right) else {
            continue;
        };
        total += 1;
        if bin.count < left.count.min(right.count) {
            dips += 1;
        }
    }
    if total == 0 {
        return Err(Error::Degenerate("no multiple of 6 has populated neighbours"));
    }
    Ok(dips as f64 / total as f64)
}
