//! Statistics over `ℸ` series.

mod census;
mod distribution;
mod histogram;
mod regression;
mod rolling;

use serde::Serialize;

pub use census::{
    census_grid, count_zeros, density_fit, fit_exponential, outlier_census, zero_density_fit, Census,
    DensityPoint, ZeroDensityFit,
};
pub use distribution::{excess_kurtosis, fit_gaussian, fit_laplace, median};
pub use histogram::{histogram, mod6_dip_score, Bin, Histogram, Normalization};
pub use regression::{corr_matrix, correlation_matrix, ols_fit, pearson};
pub use rolling::{rolling_moments, MomentRow, RollingMoments};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FitParams {
    Laplace { mu: f64, b: f64 },
    Gaussian { mu: f64, sigma: f64 },
    Exponential { a: f64, b: f64 },
    Linear { a0: f64, a1: f64 },
}

/// Fitted parameters plus a goodness value: log-likelihood for the
/// distribution fits, R² for the linear and exponential ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub params: FitParams,
    pub goodness: f64,
}
