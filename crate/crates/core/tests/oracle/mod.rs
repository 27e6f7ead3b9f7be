//! Independent reference implementations used to check the library.
//! They favour the most direct formulation over speed or robustness.

#![allow(dead_code)]

use std::collections::BTreeMap;

use fssrank::corpus::Corpus;
use fssrank::{CountingScheme, ObservationPeriod};

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Upper tail of F(d1, d2) at `f`, integrating the density after the change
/// of variables `u = d1·x / (d1·x + d2)`, which maps it onto a beta density.
pub fn f_tail(f: f64, d1: f64, d2: f64) -> f64 {
    let (a, b) = (d1 / 2.0, d2 / 2.0);
    let kernel = |u: f64| u.powf(a - 1.0) * (1.0 - u).powf(b - 1.0);
    let u0 = d1 * f / (d1 * f + d2);
    let n = 200_000;
    simpson(kernel, u0, 1.0, n) / simpson(kernel, 0.0, 1.0, n)
}

/// Student t quantile by bisection on a numerically integrated CDF.
pub fn t_quantile(p: f64, df: f64) -> f64 {
    let kernel = |t: f64| (1.0 + t * t / df).powf(-(df + 1.0) / 2.0);
    let bound = 80.0;
    let n = 400_000;
    let total = simpson(kernel, -bound, bound, n);
    let cdf = |x: f64| 0.5 + simpson(kernel, 0.0, x, 20_000) / total;
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Dense inverse by Gauss-Jordan elimination with partial pivoting.
pub fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| f64::from(u8::from(i == j))));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        let d = a[col][col];
        for v in a[col].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != col {
                let factor = a[r][col];
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub struct OlsOracle {
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub r_squared: f64,
    pub root_mse: f64,
    /// Wald F that all slope coefficients are zero.
    pub wald_f: f64,
    pub residuals: Vec<f64>,
}

/// Least squares through the normal equations. `columns` excludes the
/// constant, which is prepended. `robust` selects the HC1 sandwich.
pub fn ols(y: &[f64], columns: &[&[f64]], robust: bool) -> OlsOracle {
    let n = y.len();
    let x: Vec<Vec<f64>> = (0..n)
        .map(|i| std::iter::once(1.0).chain(columns.iter().map(|c| c[i])).collect())
        .collect();
    let k = x[0].len();
    let xtx: Vec<Vec<f64>> = (0..k)
        .map(|a| (0..k).map(|b| (0..n).map(|i| x[i][a] * x[i][b]).sum()).collect())
        .collect();
    let xty: Vec<f64> = (0..k).map(|a| (0..n).map(|i| x[i][a] * y[i]).sum()).collect();
    let inv = invert(&xtx);
    let beta: Vec<f64> = (0..k).map(|a| (0..k).map(|b| inv[a][b] * xty[b]).sum()).collect();
    let residuals: Vec<f64> = (0..n)
        .map(|i| y[i] - (0..k).map(|a| x[i][a] * beta[a]).sum::<f64>())
        .collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let mean = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let dof = (n - k) as f64;
    let cov: Vec<Vec<f64>> = if robust {
        let meat: Vec<Vec<f64>> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| (0..n).map(|i| residuals[i].powi(2) * x[i][a] * x[i][b]).sum())
                    .collect()
            })
            .collect();
        let scale = n as f64 / dof;
        (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        let mut s = 0.0;
                        for c in 0..k {
                            for d in 0..k {
                                s += inv[a][c] * meat[c][d] * inv[d][b];
                            }
                        }
                        s * scale
                    })
                    .collect()
            })
            .collect()
    } else {
        let s2 = ssr / dof;
        inv.iter().map(|r| r.iter().map(|v| v * s2).collect()).collect()
    };
    let se = (0..k).map(|a| cov[a][a].sqrt()).collect();
    // Wald test on the slope block
    let q = k - 1;
    let sub: Vec<Vec<f64>> = (1..k).map(|a| (1..k).map(|b| cov[a][b]).collect()).collect();
    let sub_inv = invert(&sub);
    let mut quad = 0.0;
    for a in 0..q {
        for b in 0..q {
            quad += beta[a + 1] * sub_inv[a][b] * beta[b + 1];
        }
    }
    OlsOracle {
        beta,
        se,
        r_squared: 1.0 - ssr / sst,
        root_mse: (ssr / dof).sqrt(),
        wald_f: quad / q as f64,
        residuals,
    }
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn sample_variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

/// Byline credit shares: role weights summed per slot, the unassigned
/// remainder split over slots without a role, then rescaled to sum to 1.
pub fn byline_shares(n: usize, scheme: CountingScheme, intramural: bool) -> Vec<f64> {
    if scheme == CountingScheme::Alphabetical {
        return vec![1.0 / n as f64; n];
    }
    let mut w = vec![0.0; n];
    let mut has_role = vec![false; n];
    let mut give = |i: usize, v: f64, w: &mut Vec<f64>| {
        w[i] += v;
        has_role[i] = true;
    };
    let rest = if intramural {
        give(0, 0.4, &mut w);
        give(n - 1, 0.4, &mut w);
        0.2
    } else {
        give(0, 0.3, &mut w);
        give(n - 1, 0.3, &mut w);
        if n >= 2 {
            give(1, 0.15, &mut w);
            give(n - 2, 0.15, &mut w);
        }
        0.1
    };
    let others: Vec<usize> = (0..n).filter(|&i| !has_role[i]).collect();
    for &i in &others {
        w[i] += rest / others.len() as f64;
    }
    let total: f64 = w.iter().sum();
    w.iter().map(|v| v / total).collect()
}

/// University-level FSS evaluated directly from raw corpus records:
/// normalized article quality, fractional credit, cost and time
/// normalization, sector scaling over productive members, then the plain
/// mean per university.
pub fn university_fss(corpus: &Corpus, period: &ObservationPeriod, theta: f64) -> BTreeMap<String, f64> {
    let in_period: Vec<_> = corpus.publications.values().filter(|p| period.contains(p.year)).collect();
    let scs_of = |p: &fssrank::corpus::Publication| corpus.journals[&(p.journal.clone(), p.year)].subject_categories.clone();

    let if_mean = |year: i32, sc: &str| {
        let v: Vec<f64> = corpus
            .journals
            .values()
            .filter(|j| j.year == year && j.subject_categories.iter().any(|s| s == sc))
            .map(|j| j.impact_factor)
            .collect();
        mean(&v)
    };
    let cit_mean = |year: i32, sc: &str| {
        let v: Vec<f64> = in_period
            .iter()
            .filter(|p| p.year == year && p.citations_at_census > 0 && scs_of(p).iter().any(|s| s == sc))
            .map(|p| f64::from(p.citations_at_census))
            .collect();
        mean(&v)
    };

    let min_cost = corpus
        .costs
        .iter()
        .map(|(_, _, e)| e.total_cost)
        .fold(f64::INFINITY, f64::min);

    let assessed: Vec<_> = corpus.professors.values().filter(|p| p.years_active >= 3).collect();
    let mut fss_p: BTreeMap<&str, f64> = BTreeMap::new();
    for prof in &assessed {
        let sds = corpus.sds.get(&prof.sds).unwrap();
        let mut sum = 0.0;
        for p in &in_period {
            let Some(pos) = p.byline.iter().position(|a| a.as_deref() == Some(prof.id.as_str())) else {
                continue;
            };
            let scs = scs_of(p);
            let bc = scs.iter().map(|s| cit_mean(p.year, s)).sum::<f64>() / scs.len() as f64;
            let bi = scs.iter().map(|s| if_mean(p.year, s)).sum::<f64>() / scs.len() as f64;
            let jif = corpus.journals[&(p.journal.clone(), p.year)].impact_factor;
            let quality = theta * f64::from(p.citations_at_census) / bc + (1.0 - theta) * jif / bi;
            sum += quality * byline_shares(p.byline.len(), sds.counting_scheme, p.intramural)[pos];
        }
        let cost = corpus.costs.entry(sds.uda, prof.rank).unwrap().total_cost / min_cost;
        fss_p.insert(&prof.id, sum / (cost * f64::from(prof.years_active)));
    }

    let mut sector_mean: BTreeMap<&str, f64> = BTreeMap::new();
    for prof in &assessed {
        let productive: Vec<f64> = assessed
            .iter()
            .filter(|q| q.sds == prof.sds && fss_p[q.id.as_str()] > 0.0)
            .map(|q| fss_p[q.id.as_str()])
            .collect();
        if !productive.is_empty() {
            sector_mean.insert(&prof.sds, mean(&productive));
        }
    }

    let mut members: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for prof in &assessed {
        if let Some(m) = sector_mean.get(prof.sds.as_str()) {
            members
                .entry(prof.university.clone())
                .or_default()
                .push(fss_p[prof.id.as_str()] / m);
        }
    }
    members.into_iter().map(|(u, v)| (u, mean(&v))).collect()
}

/// 1-based ranks by descending score; ties go to the smaller `hint`.
pub fn ranks(scores: &[(f64, u32)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].0.total_cmp(&scores[a].0).then(scores[a].1.cmp(&scores[b].1)));
    let mut out = vec![0; scores.len()];
    for (r, i) in idx.into_iter().enumerate() {
        out[i] = r + 1;
    }
    out
}

/// Rank gain over the largest gain (or loss) available from `before`.
pub fn relative_shift(before: usize, after: usize, n: usize) -> Option<f64> {
    let d = before as f64 - after as f64;
    let room = if d >= 0.0 { before as f64 - 1.0 } else { (n - before) as f64 };
    (room > 0.0).then(|| d / room)
}
