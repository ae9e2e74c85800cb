//! Hausdorff dimension in the resistance metric and spectral dimension for
//! the self-similar measure with equal weights.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// `ln k / ln(1/r)` with `r = k(k−2)/(k²−k−1)`.
pub fn hausdorff_dimension(k: usize) -> Result<f64> {
    check(k)?;
    let kf = k as f64;
    Ok(kf.ln() / ((kf * kf - kf - 1.0).ln() - (kf * (kf - 2.0)).ln()))
}

/// `2 ln k / ln(k/r)`, the root of `k (r/k)^{d/2} = 1`.
pub fn spectral_dimension(k: usize) -> Result<f64> {
    check(k)?;
    let kf = k as f64;
    Ok(2.0 * kf.ln() / ((kf * kf - kf - 1.0).ln() - (kf - 2.0).ln()))
}

/// Solves `k (r/k)^{d/2} = 1` by bisection on `[0, 2 + hi]`.
pub fn spectral_dimension_bisection(k: usize, tol: f64) -> Result<f64> {
    check(k)?;
    let kf = k as f64;
    let r = kf * (kf - 2.0) / (kf * kf - kf - 1.0);
    let f = |d: f64| kf * (r / kf).powf(d / 2.0) - 1.0;
    let (mut lo, mut hi) = (0.0_f64, 2.0_f64);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves `k r^d = 1` by bisection.
pub fn hausdorff_dimension_bisection(k: usize, tol: f64) -> Result<f64> {
    check(k)?;
    let kf = k as f64;
    let r = kf * (kf - 2.0) / (kf * kf - kf - 1.0);
    let f = |d: f64| kf * r.powf(d) - 1.0;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionRow {
    pub k: usize,
    pub r: f64,
    pub hausdorff: f64,
    pub spectral: f64,
}

pub fn dimension_table(ks: &[usize]) -> Result<Vec<DimensionRow>> {
    ks.iter()
        .map(|&k| {
            let kf = k as f64;
            Ok(DimensionRow {
                k,
                r: kf * (kf - 2.0) / (kf * kf - kf - 1.0),
                hausdorff: hausdorff_dimension(k)?,
                spectral: spectral_dimension(k)?,
            })
        })
        .collect()
}

pub fn dimension_table_csv(rows: &[DimensionRow]) -> String {
    let mut out = String::from("k,r,d_H,d_S\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{:.10},{:.10},{:.10}",
            row.k, row.r, row.hausdorff, row.spectral
        );
    }
    out
}

fn check(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::Precondition(format!("need k >= 3, got {k}")));
    }
    Ok(())
}
