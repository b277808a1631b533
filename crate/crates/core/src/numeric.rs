//! Small numerical helpers shared by the estimators.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Pairwise (cascade) summation. Deterministic for a given slice order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Sample variance with denominator `n - 1`.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    let dev: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&dev) / (n - 1) as f64
}

pub fn sample_sd(xs: &[f64]) -> f64 {
    sample_variance(xs).sqrt()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Two-sided p-value of a standard normal statistic.
pub fn two_sided_p(z: f64) -> f64 {
    (2.0 * (1.0 - normal_cdf(z.abs()))).min(1.0)
}

/// Result of a (weighted) least-squares fit.
#[derive(Debug, Clone)]
pub struct LsFit {
    pub coef: DVector<f64>,
    pub residuals: DVector<f64>,
    /// `(X' W X)^{-1}`.
    pub bread: DMatrix<f64>,
}

/// Relative singular-value threshold below which a design is treated as rank deficient.
const RANK_TOL: f64 = 1e-10;

/// Weighted least squares of `y` on the columns of `x`.
pub fn weighted_least_squares(x: &DMatrix<f64>, y: &DVector<f64>, w: Option<&[f64]>) -> Result<LsFit> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::Input(format!("design has {n} rows but response has {}", y.len())));
    }
    if n < p {
        return Err(Error::Collinearity(format!("{n} observations for {p} coefficients")));
    }
    let mut xw = x.clone();
    let mut yw = y.clone();
    if let Some(w) = w {
        for r in 0..n {
            let s = w[r].max(0.0).sqrt();
            for c in 0..p {
                xw[(r, c)] *= s;
            }
            yw[r] *= s;
        }
    }
    let svd = xw.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin / smax < RANK_TOL {
        return Err(Error::Collinearity(format!(
            "condition ratio {:.3e} below {RANK_TOL:e}",
            if smax > 0.0 { smin / smax } else { 0.0 }
        )));
    }
    let coef = svd
        .solve(&yw, 0.0)
        .map_err(|e| Error::Collinearity(e.to_string()))?;
    let xtwx = xw.transpose() * &xw;
    let bread = xtwx
        .try_inverse()
        .ok_or_else(|| Error::Collinearity("X'WX is singular".into()))?;
    let residuals = y - x * &coef;
    Ok(LsFit { coef, residuals, bread })
}

/// HC1 sandwich covariance for a weighted least-squares fit.
pub fn hc1_covariance(x: &DMatrix<f64>, fit: &LsFit, w: Option<&[f64]>) -> DMatrix<f64> {
    let (n, p) = x.shape();
    let mut meat = DMatrix::<f64>::zeros(p, p);
    for r in 0..n {
        let wr = w.map_or(1.0, |w| w[r]);
        let u = wr * fit.residuals[r];
        let row = x.row(r);
        meat += (row.transpose() * row) * (u * u);
    }
    let dof = if n > p { n as f64 / (n - p) as f64 } else { 1.0 };
    &fit.bread * meat * &fit.bread * dof
}
