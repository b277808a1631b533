use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{Diagnostics, EstimateResult, Sample};
use crate::error::{Error, Result};
use crate::groups::{build_groups, ComparisonGroup, GroupInputs, GroupRule};
use crate::netgen::{Network, PairDiscrepancy};
use crate::numeric::{hc1_covariance, pairwise_sum, weighted_least_squares};

/// Outcome of a within-group regression.
#[derive(Debug, Clone, PartialEq)]
pub enum RegressionCate {
    Fitted {
        result: EstimateResult,
        /// Members of the group and the linear weights mapping their outcomes to the
        /// treatment coefficient.
        members: Vec<usize>,
        loadings: Vec<f64>,
        residuals: Vec<f64>,
    },
    /// The group has fewer than `#controls + 2` members with positive weight.
    Skipped { owner: usize, reason: String },
}

impl RegressionCate {
    pub fn result(&self) -> Option<&EstimateResult> {
        match self {
            Self::Fitted { result, .. } => Some(result),
            Self::Skipped { .. } => None,
        }
    }
}

/// Weighted least squares of `Y` on `[1, T, X[control_cols]]` within a group; the point
/// estimate is the coefficient on `T` with an HC1 standard error.
pub fn regression_adjusted_cate(group: &ComparisonGroup, sample: &Sample, control_cols: &[usize]) -> Result<RegressionCate> {
    if let Some(&c) = control_cols.iter().find(|&&c| c >= sample.covariates.d()) {
        return Err(Error::Input(format!("control column {c} out of range")));
    }
    let rows: Vec<(usize, f64)> = group
        .members
        .iter()
        .zip(&group.weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&j, &w)| (j, w))
        .collect();
    let p = control_cols.len() + 2;
    if rows.len() < p {
        return Ok(RegressionCate::Skipped {
            owner: group.owner,
            reason: format!("{} weighted members for {p} coefficients", rows.len()),
        });
    }
    if !group.has_both_arms() {
        return Err(Error::DegenerateGroup { owner: group.owner, reason: "an arm is empty".into() });
    }
    let cov = &sample.covariates;
    let x = DMatrix::from_fn(rows.len(), p, |r, c| {
        let j = rows[r].0;
        match c {
            0 => 1.0,
            1 => f64::from(sample.treatment[j]),
            _ => cov.get(j, control_cols[c - 2]),
        }
    });
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|&(j, _)| sample.outcome[j]));
    let w: Vec<f64> = rows.iter().map(|&(_, w)| w).collect();
    let fit = weighted_least_squares(&x, &y, Some(&w)).map_err(|e| match e {
        Error::Collinearity(msg) => Error::Collinearity(format!("group of unit {}: {msg}", group.owner)),
        other => other,
    })?;
    let vcov = hc1_covariance(&x, &fit, Some(&w));
    let loadings: Vec<f64> = (0..rows.len())
        .map(|r| (0..p).map(|c| fit.bread[(1, c)] * x[(r, c)]).sum::<f64>() * w[r])
        .collect();
    let result = EstimateResult {
        estimator: "regression".into(),
        point: fit.coef[1],
        se: Some(vcov[(1, 1)].max(0.0).sqrt()),
        n_effective: rows.len(),
        theta: None,
        diagnostics: Diagnostics::default(),
    };
    Ok(RegressionCate::Fitted {
        result,
        members: rows.iter().map(|&(j, _)| j).collect(),
        loadings,
        residuals: fit.residuals.iter().copied().collect(),
    })
}

/// Inverse-variance weighted average of within-group regression coefficients.
///
/// Units whose group is too small, has an empty arm or is collinear are dropped and counted.
/// The average is linear in outcomes, `sum_k phi_k Y_k`; its standard error is
/// `sqrt(sum_k phi_k^2 e_k^2)` with `e_k` the residual of `k` averaged over the groups it enters.
pub fn regression_adjusted_ate(
    net: &Network,
    rule: &GroupRule,
    sample: &Sample,
    control_cols: &[usize],
    discrepancy: Option<&dyn PairDiscrepancy>,
) -> Result<EstimateResult> {
    let n = sample.n();
    if net.n() != n {
        return Err(Error::Input(format!("network has {} nodes, sample has {n} units", net.n())));
    }
    let inputs = GroupInputs { covariates: Some(&sample.covariates), treatment: &sample.treatment, discrepancy };
    let set = build_groups(net, rule, &inputs)?;
    let fits: Vec<Result<RegressionCate>> = set
        .groups
        .par_iter()
        .map(|g| regression_adjusted_cate(g, sample, control_cols))
        .collect();

    let mut kept = Vec::new();
    let (mut empty_arms, mut collinear) = (0usize, 0usize);
    for f in fits {
        match f {
            Ok(RegressionCate::Fitted { result, members, loadings, residuals }) => {
                let v = result.se.map_or(0.0, |s| s * s);
                if v > 0.0 && v.is_finite() {
                    kept.push((result.point, 1.0 / v, members, loadings, residuals));
                }
            }
            Ok(RegressionCate::Skipped { .. }) => {}
            Err(Error::DegenerateGroup { .. }) => empty_arms += 1,
            Err(Error::Collinearity(_)) => collinear += 1,
            Err(e) => return Err(e),
        }
    }
    if kept.is_empty() {
        return Err(Error::Estimation("no group supports the within-group regression".into()));
    }
    let total_precision = pairwise_sum(&kept.iter().map(|k| k.1).collect::<Vec<_>>());
    let point = pairwise_sum(&kept.iter().map(|k| k.0 * k.1).collect::<Vec<_>>()) / total_precision;

    let mut phi = vec![0.0; n];
    let mut resid_sum = vec![0.0; n];
    let mut resid_count = vec![0usize; n];
    for (_, prec, members, loadings, residuals) in &kept {
        let a = prec / total_precision;
        for ((&k, &c), &e) in members.iter().zip(loadings).zip(residuals) {
            phi[k] += a * c;
            resid_sum[k] += e;
            resid_count[k] += 1;
        }
    }
    let terms: Vec<f64> = (0..n)
        .filter(|&k| resid_count[k] > 0)
        .map(|k| {
            let e = resid_sum[k] / resid_count[k] as f64;
            phi[k] * phi[k] * e * e
        })
        .collect();
    let mut flags = Vec::new();
    if collinear > 0 {
        flags.push(format!("{collinear} collinear groups"));
    }
    Ok(EstimateResult {
        estimator: format!("{} regression", rule.label()),
        point,
        se: Some(pairwise_sum(&terms).sqrt()),
        n_effective: kept.len(),
        theta: None,
        diagnostics: Diagnostics { dropped_units: n - kept.len(), empty_arms, flags },
    })
}
