use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::propensity::PropensityModel;
use super::{Diagnostics, EstimateResult, Sample};
use crate::error::{Error, Result};
use crate::numeric::{hc1_covariance, mean, pairwise_sum, sample_sd, weighted_least_squares};

/// Observables-only estimators.
#[derive(Debug, Clone, Serialize)]
pub struct Baselines {
    pub ols: EstimateResult,
    pub ipw: EstimateResult,
    pub strat: EstimateResult,
}

fn result(label: &str, point: f64, se: Option<f64>, n: usize, diagnostics: Diagnostics) -> EstimateResult {
    EstimateResult { estimator: label.into(), point, se, n_effective: n, theta: None, diagnostics }
}

/// Coefficient on treatment in a least-squares regression of `Y` on `[1, T, X[cols]]`.
pub fn ols_estimate(sample: &Sample, cols: &[usize]) -> Result<EstimateResult> {
    let n = sample.n();
    let cov = &sample.covariates;
    let x = DMatrix::from_fn(n, cols.len() + 2, |i, c| match c {
        0 => 1.0,
        1 => f64::from(sample.treatment[i]),
        _ => cov.get(i, cols[c - 2]),
    });
    let y = DVector::from_column_slice(&sample.outcome);
    let fit = weighted_least_squares(&x, &y, None)?;
    let vcov = hc1_covariance(&x, &fit, None);
    Ok(result("OLS", fit.coef[1], Some(vcov[(1, 1)].max(0.0).sqrt()), n, Diagnostics::default()))
}

/// Hájek-normalized inverse-propensity estimator.
pub fn ipw_estimate(sample: &Sample, pm: &PropensityModel) -> Result<EstimateResult> {
    let n = sample.n();
    if pm.fitted.len() != n {
        return Err(Error::Input("propensity model was fitted on a different sample".into()));
    }
    let (t, y, p) = (&sample.treatment, &sample.outcome, &pm.fitted);
    let w1: Vec<f64> = (0..n).map(|i| if t[i] == 1 { 1.0 / p[i] } else { 0.0 }).collect();
    let w0: Vec<f64> = (0..n).map(|i| if t[i] == 0 { 1.0 / (1.0 - p[i]) } else { 0.0 }).collect();
    let (s1, s0) = (pairwise_sum(&w1), pairwise_sum(&w0));
    if s1 == 0.0 || s0 == 0.0 {
        return Err(Error::Estimation("IPW needs both treated and untreated units".into()));
    }
    let mu1 = pairwise_sum(&(0..n).map(|i| w1[i] * y[i]).collect::<Vec<_>>()) / s1;
    let mu0 = pairwise_sum(&(0..n).map(|i| w0[i] * y[i]).collect::<Vec<_>>()) / s0;
    let (m1, m0) = (s1 / n as f64, s0 / n as f64);
    let psi: Vec<f64> = (0..n)
        .map(|i| w1[i] * (y[i] - mu1) / m1 - w0[i] * (y[i] - mu0) / m0)
        .collect();
    let se = sample_sd(&psi) / (n as f64).sqrt();
    Ok(result("IPW", mu1 - mu0, Some(se), n, Diagnostics::default()))
}

/// Difference of means within propensity quintiles, weighted by stratum size. A stratum
/// with an empty arm is merged into its neighbor.
pub fn stratified_estimate(sample: &Sample, pm: &PropensityModel, strata: usize) -> Result<EstimateResult> {
    let n = sample.n();
    if strata == 0 {
        return Err(Error::Input("need at least one stratum".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| pm.fitted[a].total_cmp(&pm.fitted[b]).then(a.cmp(&b)));
    let mut bins: Vec<Vec<usize>> = (0..strata)
        .map(|s| order[s * n / strata..(s + 1) * n / strata].to_vec())
        .filter(|b: &Vec<usize>| !b.is_empty())
        .collect();
    let t = &sample.treatment;
    let has_both = |b: &[usize]| b.iter().any(|&i| t[i] == 1) && b.iter().any(|&i| t[i] == 0);
    let mut merged = 0;
    while let Some(pos) = bins.iter().position(|b| !has_both(b)) {
        if bins.len() == 1 {
            return Err(Error::Estimation("stratification needs both treated and untreated units".into()));
        }
        let bin = bins.remove(pos);
        let target = if pos < bins.len() { pos } else { pos - 1 };
        bins[target].extend(bin);
        merged += 1;
    }
    let y = &sample.outcome;
    let mut point_terms = Vec::with_capacity(bins.len());
    let mut var_terms = Vec::with_capacity(bins.len());
    for b in &bins {
        let share = b.len() as f64 / n as f64;
        let y1: Vec<f64> = b.iter().filter(|&&i| t[i] == 1).map(|&i| y[i]).collect();
        let y0: Vec<f64> = b.iter().filter(|&&i| t[i] == 0).map(|&i| y[i]).collect();
        point_terms.push(share * (mean(&y1) - mean(&y0)));
        let v = |ys: &[f64]| {
            if ys.len() < 2 {
                0.0
            } else {
                let s = sample_sd(ys);
                s * s / ys.len() as f64
            }
        };
        var_terms.push(share * share * (v(&y1) + v(&y0)));
    }
    let mut diag = Diagnostics::default();
    if merged > 0 {
        diag.flags.push(format!("merged {merged} strata with an empty arm"));
    }
    Ok(result("Strat", pairwise_sum(&point_terms), Some(pairwise_sum(&var_terms).sqrt()), n, diag))
}

/// OLS, IPW and propensity-quintile stratification on the observed covariates `cols`.
pub fn baseline_estimates(sample: &Sample, cols: &[usize], pm: &PropensityModel) -> Result<Baselines> {
    Ok(Baselines {
        ols: ols_estimate(sample, cols)?,
        ipw: ipw_estimate(sample, pm)?,
        strat: stratified_estimate(sample, pm, 5)?,
    })
}
