use crate::error::{Error, Result};

use super::{FitParams, FitResult};

fn nonempty(values: &[f64], needed: usize) -> Result<()> {
    if values.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: values.len(),
        });
    }
    Ok(())
}

/// Sample median (midpoint of the two central values for even length).
pub fn median(values: &[f64]) -> Result<f64> {
    nonempty(values, 1)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Ok(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    })
}

/// Maximum-likelihood Laplace fit: `mu` is the sample median, `b` the mean
/// absolute deviation about it. Goodness is the total log-likelihood.
pub fn fit_laplace(values: &[f64]) -> Result<FitResult> {
    nonempty(values, 2)?;
    let mu = median(values)?;
    let n = values.len() as f64;
    let abs_dev: f64 = values.iter().map(|x| (x - mu).abs()).sum();
    let b = abs_dev / n;
    if b <= 0.0 {
        return Err(Error::Degenerate("Laplace scale is zero"));
    }
    let log_likelihood = -n * (2.0 * b).ln() - abs_dev / b;
    Ok(FitResult {
        params: FitParams::Laplace { mu, b },
        goodness: log_likelihood,
    })
}

/// Normal fit with the sample mean and the `1/(N-1)` standard deviation.
/// Goodness is the total log-likelihood under those parameters.
pub fn fit_gaussian(values: &[f64]) -> Result<FitResult> {
    nonempty(values, 2)?;
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|x| (x - mu).powi(2)).sum();
    let sigma = (ss / (n - 1.0)).sqrt();
    if sigma <= 0.0 {
        return Err(Error::Degenerate("Gaussian scale is zero"));
    }
    let log_likelihood =
        -0.5 * n * (2.0 * std::f64::consts::PI * sigma * sigma).ln() - ss / (2.0 * sigma * sigma);
    Ok(FitResult {
        params: FitParams::Gaussian { mu, sigma },
        goodness: log_likelihood,
    })
}

/// Sample excess kurtosis `m4 / m2² - 3` (population central moments).
pub fn excess_kurtosis(values: &[f64]) -> Result<f64> {
    nonempty(values, 4)?;
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for x in values {
        let d2 = (x - mu).powi(2);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    if m2 == 0.0 {
        return Err(Error::Degenerate("kurtosis of a constant series"));
    }
    Ok(m4 / (m2 * m2) - 3.0)
}
