//! Least-squares slope fits on log-log data.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need two points for a line");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    LineFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    }
}

/// Slope of `log y` against `log x`.
pub fn loglog_slope<T: Real>(x: &[T], y: &[T]) -> LineFit {
    let lx: Vec<f64> = x.iter().map(|v| v.to_f64_lossy().ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.to_f64_lossy().ln()).collect();
    fit_line(&lx, &ly)
}

/// `n` geometrically spaced points from `lo` to `hi` inclusive.
pub fn geometric_ladder<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    assert!(n >= 2 && lo > T::zero() && hi > lo);
    let ratio = (hi / lo).ln() / T::from_usize_lossy(n - 1);
    (0..n)
        .map(|i| lo * (ratio * T::from_usize_lossy(i)).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let x: Vec<f64> = geometric_ladder(1e-3, 10.0, 17);
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-1.25)).collect();
        let f = loglog_slope(&x, &y);
        assert!((f.slope + 1.25).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!((x[16] - 10.0).abs() < 1e-12);
    }
}
