use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionSummary {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub range: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    /// Adjusted Fisher–Pearson sample skewness; 0 when undefined.
    pub skewness: f64,
    /// False for constant samples or n < 3, where skewness is reported as 0.
    pub skewness_defined: bool,
}

/// Quantile by linear interpolation between order statistics
/// (`h = (n − 1)·p`). `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

pub fn dispersion(values: &[f64]) -> Result<DispersionSummary> {
    if values.len() < 2 {
        return Err(Error::Stats(format!("dispersion needs at least 2 values, got {}", values.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Stats("dispersion input contains non-finite values".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = values.len();
    let nf = n as f64;
    let (min, max) = (sorted[0], sorted[n - 1]);
    let constant = min == max;
    let mean = if constant { min } else { values.iter().sum::<f64>() / nf };
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / nf;
    let std_dev = if constant { 0.0 } else { (m2 * nf / (nf - 1.0)).sqrt() };
    let skewness_defined = n >= 3 && !constant;
    let skewness = if skewness_defined {
        let g1 = m3 / m2.powf(1.5);
        g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0)
    } else {
        0.0
    };
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    Ok(DispersionSummary {
        n,
        mean,
        median: quantile_sorted(&sorted, 0.5),
        std_dev,
        min,
        max,
        range: max - min,
        q1,
        q3,
        iqr: q3 - q1,
        skewness,
        skewness_defined,
    })
}
