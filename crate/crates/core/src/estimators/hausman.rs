use serde::Serialize;

use super::ate::ate_detail;
use super::propensity::PropensityModel;
use super::{EstimateResult, Sample};
use crate::error::{Error, Result};
use crate::groups::GroupRule;
use crate::netgen::{Network, PairDiscrepancy};
use crate::numeric::{pairwise_sum, two_sided_p};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HausmanResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Plug-in standard deviation of `sqrt(n) * (ATE - ATE_obs)`.
    pub sigma: f64,
    pub n_used: usize,
    /// Included units whose comparison group has fewer than 10 members.
    pub unreliable_units: usize,
}

/// Groups smaller than this make the local propensity plug-in unreliable.
const RELIABLE_GROUP_SIZE: usize = 10;

/// Compares the network ATE with an observables-only ATE.
///
/// Under the null that unobservables do not confound, `sqrt(n) (ATE - ATE_obs)` is asymptotically
/// normal with variance
/// `E[ V1/p (P - p)^2 / P^2 + V0/(1-p) (P - p)^2 / (1-P)^2 ]`,
/// where `p` is the propensity given all characteristics and `P` the propensity given observables.
/// The plug-in uses the local treated share of each group for `p`, arm variances for `V1, V0`
/// and the fitted logistic model for `P`.
pub fn hausman_confounding_test(
    ate_network: &EstimateResult,
    ate_observables: &EstimateResult,
    sample: &Sample,
    net: &Network,
    rule: &GroupRule,
    pm: &PropensityModel,
    discrepancy: Option<&dyn PairDiscrepancy>,
) -> Result<HausmanResult> {
    if pm.fitted.len() != sample.n() {
        return Err(Error::Input("propensity model was fitted on a different sample".into()));
    }
    let detail = ate_detail(net, rule, sample, discrepancy)?;
    let mut terms = Vec::new();
    let mut unreliable = 0;
    for (i, arms) in detail.arms.iter().enumerate() {
        let [Some(a0), Some(a1)] = arms else { continue };
        let p = a1.weight / (a1.weight + a0.weight);
        let big_p = pm.fitted[i];
        let gap = (big_p - p) * (big_p - p);
        terms.push(a1.variance / p * gap / (big_p * big_p) + a0.variance / (1.0 - p) * gap / ((1.0 - big_p) * (1.0 - big_p)));
        if a0.members + a1.members < RELIABLE_GROUP_SIZE {
            unreliable += 1;
        }
    }
    let n_used = terms.len();
    let sigma = (pairwise_sum(&terms) / n_used as f64).sqrt();
    let diff = ate_network.point - ate_observables.point;
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::DegenerateTest(format!("plug-in variance is {}", sigma * sigma)));
    }
    let statistic = (n_used as f64).sqrt() * diff / sigma;
    Ok(HausmanResult { statistic, p_value: two_sided_p(statistic), sigma, n_used, unreliable_units: unreliable })
}
