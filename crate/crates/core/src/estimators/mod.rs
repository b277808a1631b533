//! Treatment-effect estimators.
//!
//! Network estimators compare treated and untreated members of each unit's comparison
//! group; observables-only baselines (OLS, inverse-propensity weighting, propensity
//! stratification) serve as benchmarks and as the reference for the confounding test.

mod ate;
mod baselines;
mod cate;
mod hausman;
mod propensity;
mod regression;

pub use ate::{ate_estimate, ate_from_groups, theta_weights, AteDetail, ThetaWeights};
pub use baselines::{baseline_estimates, ipw_estimate, ols_estimate, stratified_estimate, Baselines};
pub use cate::{cate_estimate, ArmStats};
pub use hausman::{hausman_confounding_test, HausmanResult};
pub use propensity::PropensityModel;
pub use regression::{regression_adjusted_ate, regression_adjusted_cate, RegressionCate};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::netgen::CovariateTable;

/// Covariates, binary treatments and outcomes for `n` units.
#[derive(Debug, Clone)]
pub struct Sample {
    pub covariates: CovariateTable,
    pub treatment: Vec<u8>,
    pub outcome: Vec<f64>,
}

impl Sample {
    pub fn new(covariates: CovariateTable, treatment: Vec<u8>, outcome: Vec<f64>) -> Result<Self> {
        let n = covariates.n();
        if treatment.len() != n || outcome.len() != n {
            return Err(Error::Input(format!(
                "{n} covariate rows, {} treatments, {} outcomes",
                treatment.len(),
                outcome.len()
            )));
        }
        if let Some(i) = treatment.iter().position(|&t| t > 1) {
            return Err(Error::Input(format!("treatment of unit {i} is {}, expected 0 or 1", treatment[i])));
        }
        if let Some(i) = outcome.iter().position(|y| !y.is_finite()) {
            return Err(Error::Input(format!("outcome of unit {i} is not finite")));
        }
        Ok(Self { covariates, treatment, outcome })
    }

    pub fn n(&self) -> usize {
        self.outcome.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Units left out of an average (empty arm, too-small group, ...).
    pub dropped_units: usize,
    /// Groups with at least one empty arm.
    pub empty_arms: usize,
    /// Free-form flags, e.g. merged strata or unreliable plug-ins.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

/// Point estimate with its standard error and bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub estimator: String,
    pub point: f64,
    /// `None` when the standard error is undefined (e.g. singleton arms).
    pub se: Option<f64>,
    pub n_effective: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl EstimateResult {
    /// Normal-approximation confidence interval at level `1 - alpha`.
    pub fn confidence_interval(&self, alpha: f64) -> Option<(f64, f64)> {
        let z = crate::numeric::normal_quantile(1.0 - alpha / 2.0);
        self.se.map(|se| (self.point - z * se, self.point + z * se))
    }
}
