use crate::daleth::{daleth_batch, DalethSpec};
use crate::error::{Error, Result};
use crate::sieve::PrimeEngine;

use super::{FitParams, FitResult};

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

// (Sxx, Syy, Sxy) about the means
fn co_moments(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64, f64) {
    let (mx, my) = (mean(x), mean(y));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    (mx, my, sxx, syy, sxy)
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let (_, _, sxx, syy, sxy) = co_moments(x, y);
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate("correlation of a constant series"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Least-squares line `y = a0 + a1 x`; goodness is R².
pub fn ols_fit(x: &[f64], y: &[f64]) -> Result<FitResult> {
    check_pair(x, y)?;
    let (mx, my, sxx, syy, sxy) = co_moments(x, y);
    if sxx == 0.0 {
        return Err(Error::Degenerate("regression on a constant regressor"));
    }
    let a1 = sxy / sxx;
    let a0 = my - a1 * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(FitResult {
        params: FitParams::Linear { a0, a1 },
        goodness: r2,
    })
}

/// Pairwise Pearson matrix of `ℸ` series over `i = 1..=T`.
pub fn corr_matrix(engine: &PrimeEngine, specs: &[DalethSpec], t: u64) -> Result<Vec<Vec<f64>>> {
    if specs.is_empty() {
        return Ok(Vec::new());
    }
    let series = daleth_batch(engine, specs, 1, t)?;
    let columns: Vec<Vec<f64>> = series.iter().map(|s| s.as_f64()).collect();
    correlation_matrix(&columns)
}

/// Symmetric correlation matrix with unit diagonal.
pub fn correlation_matrix(columns: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = columns.len();
    let mut m = vec![vec![1.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let r = pearson(&columns[a], &columns[b])?;
            m[a][b] = r;
            m[b][a] = r;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_correlations() {
        let x: Vec<f64> = (0..50).map(|i| ((i * 37) % 17) as f64).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn affine_invariance() {
        let x: Vec<f64> = (0..200).map(|i| ((i * 7919) % 101) as f64 - 50.0).collect();
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + ((i * 31) % 13) as f64).collect();
        let r = pearson(&x, &y).unwrap();
        let y2: Vec<f64> = y.iter().map(|v| 3.5 * v - 11.0).collect();
        let x2: Vec<f64> = x.iter().map(|v| 0.25 * v + 1e3).collect();
        assert!((pearson(&x2, &y2).unwrap() - r).abs() < 1e-12);
    }

    #[test]
    fn constant_inputs_rejected() {
        assert!(matches!(pearson(&[1.0, 1.0], &[1.0, 2.0]), Err(Error::Degenerate(_))));
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
        assert!(ols_fit(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn exact_lines() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let FitResult { params, goodness } = ols_fit(&x, &y).unwrap();
        let FitParams::Linear { a0, a1 } = params else { panic!() };
        assert!((a0 - 1.0).abs() < 1e-12 && (a1 - 2.0).abs() < 1e-12);
        assert!((goodness - 1.0).abs() < 1e-12);
        let FitParams::Linear { a0, a1 } = ols_fit(&x, &x).unwrap().params else { panic!() };
        assert!(a0.abs() < 1e-12 && (a1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_shape() {
        let cols = vec![
            vec![1.0, 2.0, 3.0, 5.0],
            vec![2.0, 1.0, 4.0, 4.0],
            vec![0.0, 3.0, 1.0, 9.0],
        ];
        let m = correlation_matrix(&cols).unwrap();
        for a in 0..3 {
            assert_eq!(m[a][a], 1.0);
            for b in 0..3 {
                assert_eq!(m[a][b], m[b][a]);
            }
        }
        assert_eq!(correlation_matrix(&cols[..1]).unwrap(), vec![vec![1.0]]);
    }
}
