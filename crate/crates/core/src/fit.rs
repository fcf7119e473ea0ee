//! Log-log power-law fitting.

use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinary least-squares line through `(x, y)` points; returns
/// `(slope, intercept)`. Needs at least two distinct abscissae.
pub(crate) fn least_squares_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation from the fitted line in log space.
    pub residual: f64,
}

/// Slope of `log(value)` against `log(R)`.
pub fn growth_exponent_estimate(samples: &[(f64, f64)]) -> Result<GrowthFit> {
    if samples.len() < 3 || samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || !(samples[0].0 > 0.0)
    {
        return Err(Error::TooFewSamples);
    }
    if let Some(&(r, value)) = samples.iter().find(|s| !(s.1 > 0.0)) {
        return Err(Error::NonpositiveSample { r, value });
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(r, v)| (r.ln(), v.ln())).collect();
    let (slope, intercept) = least_squares_line(&pts);
    let residual = pts
        .iter()
        .map(|&(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    Ok(GrowthFit {
        slope,
        intercept,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<_> = [8.0, 16.0, 32.0, 64.0].iter().map(|&r: &f64| (r, r.powi(3))).collect();
        let fit = growth_exponent_estimate(&s).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-10);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn constant_has_zero_slope() {
        let s = [(8.0, 5.0), (16.0, 5.0), (32.0, 5.0)];
        assert!(growth_exponent_estimate(&s).unwrap().slope.abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(matches!(
            growth_exponent_estimate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]),
            Err(Error::NonpositiveSample { .. })
        ));
        assert!(growth_exponent_estimate(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(growth_exponent_estimate(&[(1.0, 1.0), (1.0, 1.0), (3.0, 1.0)]).is_err());
    }
}
