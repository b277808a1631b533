use rayon::prelude::*;
use serde::Serialize;

use super::link::LinkSpec;
use super::sample::{count_edges, replicate_seed};
use super::CovariateTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct CalibrationOptions {
    /// Networks averaged per evaluation of the mean degree.
    pub reps: usize,
    /// Accepted relative deviation from the target mean degree.
    pub rel_tol: f64,
    /// Bisection bracket on `ln(scale)`.
    pub log_bounds: (f64, f64),
    pub max_iter: usize,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self { reps: 20, rel_tol: 0.02, log_bounds: (-10.0, 10.0), max_iter: 80 }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Calibration {
    pub scale: f64,
    /// Monte-Carlo mean degree at `scale`.
    pub mean_degree: f64,
    /// Set when the target is only met at the lower end of the bracket (complete-graph limit).
    pub degenerate: bool,
    pub iterations: usize,
}

/// Average mean degree over `reps` networks drawn at `scale`. Uses the same shock
/// streams for every scale, so it is nonincreasing in `scale`.
pub fn mc_mean_degree(cov: &CovariateTable, spec: &LinkSpec, scale: f64, seed: u64, reps: usize) -> Result<f64> {
    let spec = spec.with_scale(scale);
    let counts: Vec<usize> = (0..reps)
        .into_par_iter()
        .map(|r| count_edges(cov, &spec, replicate_seed(seed, r)))
        .collect::<Result<_>>()?;
    let total: usize = counts.iter().sum();
    Ok(2.0 * total as f64 / (cov.n() as f64 * reps as f64))
}

/// Finds the selectivity scale whose Monte-Carlo mean degree is within `rel_tol` of the target,
/// by bisection on `ln(scale)`.
pub fn calibrate_scale(
    cov: &CovariateTable,
    spec: &LinkSpec,
    target_mean_degree: f64,
    seed: u64,
    opts: CalibrationOptions,
) -> Result<Calibration> {
    let n = cov.n();
    let max_degree = (n - 1) as f64;
    if !(target_mean_degree > 0.0) || target_mean_degree > max_degree {
        return Err(Error::Calibration(format!(
            "target mean degree {target_mean_degree} outside (0, {max_degree}]"
        )));
    }
    if opts.reps == 0 {
        return Err(Error::Input("calibration needs at least one network per evaluation".into()));
    }
    let within = |deg: f64| (deg - target_mean_degree).abs() <= opts.rel_tol * target_mean_degree;
    let eval = |log_s: f64| mc_mean_degree(cov, spec, log_s.exp(), seed, opts.reps);

    let (mut lo, mut hi) = opts.log_bounds;
    let deg_lo = eval(lo)?;
    if deg_lo < target_mean_degree && !within(deg_lo) {
        return Err(Error::Calibration(format!(
            "mean degree {deg_lo:.4} at the smallest scale is below the target {target_mean_degree}"
        )));
    }
    if target_mean_degree >= max_degree || (within(deg_lo) && deg_lo >= max_degree - 1e-12) {
        return Ok(Calibration { scale: lo.exp(), mean_degree: deg_lo, degenerate: true, iterations: 0 });
    }
    let deg_hi = eval(hi)?;
    if deg_hi > target_mean_degree && !within(deg_hi) {
        return Err(Error::Calibration(format!(
            "mean degree {deg_hi:.4} at the largest scale is above the target {target_mean_degree}"
        )));
    }

    let mut best = if (deg_lo - target_mean_degree).abs() < (deg_hi - target_mean_degree).abs() {
        (lo, deg_lo)
    } else {
        (hi, deg_hi)
    };
    for it in 1..=opts.max_iter {
        let mid = 0.5 * (lo + hi);
        let deg = eval(mid)?;
        if (deg - target_mean_degree).abs() < (best.1 - target_mean_degree).abs() {
            best = (mid, deg);
        }
        if within(deg) {
            return Ok(Calibration { scale: mid.exp(), mean_degree: deg, degenerate: false, iterations: it });
        }
        if deg > target_mean_degree {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Calibration(format!(
        "no scale within {:.1}% of target {target_mean_degree}; closest mean degree {:.4} at scale {:.6}",
        100.0 * opts.rel_tol,
        best.1,
        best.0.exp()
    )))
}

/// Carries a calibrated scale from `n_from` to `n_to` units so that mean degree grows like `ln n`:
/// `scale^d_link` grows like `n / ln n`.
pub fn rescale_scale(scale: f64, n_from: usize, n_to: usize, d_link: usize) -> f64 {
    let (a, b) = (n_from as f64, n_to as f64);
    scale * ((b * a.ln()) / (a * b.ln())).powf(1.0 / d_link as f64)
}
