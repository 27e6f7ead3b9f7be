use serde::Serialize;

use super::dispersion::sample_variance;
use super::special::f_survival;
use crate::error::{Error, Result};

pub const FISHER_CONVENTION: &str = "one-tailed; larger sample variance over smaller";

/// Fisher variance-ratio test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceTestResult {
    pub test: &'static str,
    pub statistic: f64,
    /// (numerator df, denominator df)
    pub df: (usize, usize),
    pub p_value: f64,
    pub convention: &'static str,
    /// Which input supplied the larger variance: `"a"` or `"b"`.
    pub numerator: &'static str,
}

impl VarianceTestResult {
    pub fn f_statistic(&self) -> f64 {
        self.statistic
    }
}

/// `F = s²_max / s²_min` with `p = P(F(df_max, df_min) > F)`.
pub fn fisher_variance_test(a: &[f64], b: &[f64]) -> Result<VarianceTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Stats("each sample needs at least 2 values".into()));
    }
    let va = sample_variance(a);
    let vb = sample_variance(b);
    let (num, den, n_num, n_den, numerator) = if va >= vb {
        (va, vb, a.len(), b.len(), "a")
    } else {
        (vb, va, b.len(), a.len(), "b")
    };
    if den == 0.0 {
        return Err(Error::Stats("denominator sample has zero variance".into()));
    }
    let f = num / den;
    let df = (n_num - 1, n_den - 1);
    Ok(VarianceTestResult {
        test: "fisher_variance_ratio",
        statistic: f,
        df,
        p_value: f_survival(f, df.0 as f64, df.1 as f64),
        convention: FISHER_CONVENTION,
        numerator,
    })
}
