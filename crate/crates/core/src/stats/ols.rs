//! Ordinary least squares with coefficient inference.
//!
//! Coefficients come from a Householder QR of the design matrix; the
//! covariance is either the classical `s²(XᵀX)⁻¹` or the HC1 sandwich
//! `n/(n−k) · (XᵀX)⁻¹ XᵀΩX (XᵀX)⁻¹` with `Ω = diag(e²)`. The model F is
//! the Wald test that every non-intercept coefficient is zero under the
//! chosen covariance; under the classical covariance it equals
//! `(R²/(k−1)) / ((1−R²)/(n−k))`.

use std::fmt;

use serde::Serialize;

use super::special::{f_survival, t_quantile, t_two_tailed};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Covariance {
    #[default]
    Classical,
    /// Heteroskedasticity-robust, small-sample scaled by n/(n−k).
    Hc1,
}

impl fmt::Display for Covariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Covariance::Classical => "classical",
            Covariance::Hc1 => "hc1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlsOptions {
    /// Prepend a constant column named `const`.
    pub intercept: bool,
    pub covariance: Covariance,
    /// Two-sided confidence level for the intervals.
    pub confidence: f64,
}

impl Default for OlsOptions {
    fn default() -> Self {
        Self {
            intercept: true,
            covariance: Covariance::Classical,
            confidence: 0.95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t: f64,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelF {
    pub statistic: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OlsFit {
    pub coefficients: Vec<Coefficient>,
    pub n: usize,
    pub df_resid: usize,
    pub r_squared: f64,
    pub root_mse: f64,
    pub model_f: ModelF,
    pub covariance: Covariance,
    pub t_critical: f64,
    #[serde(skip)]
    pub residuals: Vec<f64>,
    #[serde(skip)]
    pub fitted: Vec<f64>,
}

impl OlsFit {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }
}

/// Dense column-major matrix, just enough for small regressions.
#[derive(Debug, Clone)]
struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[c * self.rows + r]
    }

    fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[c * self.rows + r] = v;
    }

    fn col(&self, c: usize) -> &[f64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }
}

/// Fits `y` on the named regressor columns.
pub fn ols(y: &[f64], regressors: &[(&str, &[f64])], options: OlsOptions) -> Result<OlsFit> {
    let n = y.len();
    let mut names: Vec<String> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    if options.intercept {
        names.push("const".into());
        columns.push(vec![1.0; n]);
    }
    for (name, values) in regressors {
        if values.len() != n {
            return Err(Error::Stats(format!(
                "regressor {name} has {} values, response has {n}",
                values.len()
            )));
        }
        names.push(name.to_string());
        columns.push(values.to_vec());
    }
    let k = columns.len();
    if k == 0 {
        return Err(Error::Stats("no regressors".into()));
    }
    if n <= k {
        return Err(Error::Stats(format!("need more observations ({n}) than coefficients ({k})")));
    }
    if y.iter().chain(columns.iter().flatten()).any(|v| !v.is_finite()) {
        return Err(Error::Stats("non-finite value in regression input".into()));
    }
    if !(0.0 < options.confidence && options.confidence < 1.0) {
        return Err(Error::Stats(format!("confidence level {} outside (0, 1)", options.confidence)));
    }

    let mut x = Matrix::zeros(n, k);
    for (c, col) in columns.iter().enumerate() {
        x.data[c * n..(c + 1) * n].copy_from_slice(col);
    }

    let (r, qty) = householder_qr(&x, y);
    check_rank(&r, &x, &names)?;
    let beta = back_substitute(&r, &qty);
    let r_inv = upper_inverse(&r);
    // (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ
    let xtx_inv = mul_transpose_right(&r_inv);

    let fitted: Vec<f64> = (0..n).map(|i| (0..k).map(|j| x.at(i, j) * beta[j]).sum()).collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let sst: f64 = if options.intercept {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean).powi(2)).sum()
    } else {
        y.iter().map(|v| v * v).sum()
    };
    let df_resid = n - k;
    let s2 = ssr / df_resid as f64;
    let r_squared = if sst > 0.0 { (1.0 - ssr / sst).clamp(0.0, 1.0) } else { 1.0 };

    let cov = match options.covariance {
        Covariance::Classical => scale(&xtx_inv, s2),
        Covariance::Hc1 => {
            let mut meat = vec![vec![0.0; k]; k];
            for (i, e) in residuals.iter().enumerate() {
                let e2 = e * e;
                for (a, row) in meat.iter_mut().enumerate() {
                    for (b, cell) in row.iter_mut().enumerate() {
                        *cell += e2 * x.at(i, a) * x.at(i, b);
                    }
                }
            }
            let sandwich = matmul(&matmul(&xtx_inv, &meat), &xtx_inv);
            scale(&sandwich, n as f64 / df_resid as f64)
        }
    };

    let df = df_resid as f64;
    let t_critical = t_quantile(0.5 + options.confidence / 2.0, df);
    let coefficients = names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let se = cov[j][j].max(0.0).sqrt();
            let t = beta[j] / se;
            Coefficient {
                name: name.clone(),
                estimate: beta[j],
                std_error: se,
                t,
                p_value: if se > 0.0 { t_two_tailed(t, df) } else { 0.0 },
                ci_low: beta[j] - t_critical * se,
                ci_high: beta[j] + t_critical * se,
            }
        })
        .collect();

    let first = usize::from(options.intercept);
    let q = k - first;
    let model_f = if q == 0 {
        ModelF {
            statistic: f64::NAN,
            df1: 0,
            df2: df_resid,
            p_value: f64::NAN,
        }
    } else {
        let sub: Vec<Vec<f64>> = (first..k).map(|a| (first..k).map(|b| cov[a][b]).collect()).collect();
        let b: Vec<f64> = beta[first..].to_vec();
        let statistic = match symmetric_inverse(&sub) {
            Some(inv) => {
                let mut w = 0.0;
                for a in 0..q {
                    for c in 0..q {
                        w += b[a] * inv[a][c] * b[c];
                    }
                }
                w / q as f64
            }
            None => f64::INFINITY,
        };
        ModelF {
            statistic,
            df1: q,
            df2: df_resid,
            p_value: f_survival(statistic, q as f64, df),
        }
    };

    Ok(OlsFit {
        coefficients,
        n,
        df_resid,
        r_squared,
        root_mse: s2.sqrt(),
        model_f,
        covariance: options.covariance,
        t_critical,
        residuals,
        fitted,
    })
}

/// Returns the k×k upper-triangular R and the first k entries of Qᵀy.
fn householder_qr(x: &Matrix, y: &[f64]) -> (Matrix, Vec<f64>) {
    let (n, k) = (x.rows, x.cols);
    let mut a = x.clone();
    let mut qty = y.to_vec();
    for j in 0..k {
        let norm = (j..n).map(|i| a.at(i, j).powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a.at(j, j) > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..n).map(|i| a.at(i, j)).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in j..k {
            let dot: f64 = v.iter().enumerate().map(|(t, vi)| vi * a.at(j + t, c)).sum();
            let f = 2.0 * dot / vnorm2;
            for (t, vi) in v.iter().enumerate() {
                let cur = a.at(j + t, c);
                a.set(j + t, c, cur - f * vi);
            }
        }
        let dot: f64 = v.iter().enumerate().map(|(t, vi)| vi * qty[j + t]).sum();
        let f = 2.0 * dot / vnorm2;
        for (t, vi) in v.iter().enumerate() {
            qty[j + t] -= f * vi;
        }
    }
    let mut r = Matrix::zeros(k, k);
    for c in 0..k {
        for row in 0..=c {
            r.set(row, c, a.at(row, c));
        }
    }
    qty.truncate(k);
    (r, qty)
}

fn check_rank(r: &Matrix, x: &Matrix, names: &[String]) -> Result<()> {
    let k = r.cols;
    let mut collinear = Vec::new();
    for (j, name) in names.iter().enumerate().take(k) {
        let col_norm = x.col(j).iter().map(|v| v * v).sum::<f64>().sqrt();
        let diag = r.at(j, j).abs();
        if col_norm == 0.0 || diag <= 1e-10 * col_norm {
            collinear.push(name.clone());
        }
    }
    if collinear.is_empty() {
        Ok(())
    } else {
        Err(Error::RankDeficient(collinear))
    }
}

fn back_substitute(r: &Matrix, b: &[f64]) -> Vec<f64> {
    let k = r.cols;
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| r.at(i, j) * x[j]).sum();
        x[i] = (b[i] - s) / r.at(i, i);
    }
    x
}

fn upper_inverse(r: &Matrix) -> Vec<Vec<f64>> {
    let k = r.cols;
    let mut inv = vec![vec![0.0; k]; k];
    for col in 0..k {
        let mut e = vec![0.0; k];
        e[col] = 1.0;
        let x = back_substitute(r, &e);
        for row in 0..k {
            inv[row][col] = x[row];
        }
    }
    inv
}

fn mul_transpose_right(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = a.len();
    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            out[i][j] = (0..k).map(|t| a[i][t] * a[j][t]).sum();
        }
    }
    out
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; p]; n];
    for i in 0..n {
        for j in 0..p {
            out[i][j] = (0..m).map(|t| a[i][t] * b[t][j]).sum();
        }
    }
    out
}

fn scale(a: &[Vec<f64>], s: f64) -> Vec<Vec<f64>> {
    a.iter().map(|row| row.iter().map(|v| v * s).collect()).collect()
}

/// Gauss–Jordan inverse with partial pivoting; `None` when singular.
fn symmetric_inverse(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col];
        m[col].iter_mut().for_each(|v| *v /= p);
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                if f != 0.0 {
                    let src = m[col].clone();
                    m[row].iter_mut().zip(src).for_each(|(v, s)| *v -= f * s);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
