use super::cate::ArmStats;
use super::{Diagnostics, EstimateResult, Sample};
use crate::error::{Error, Result};
use crate::groups::{build_groups, ComparisonGroup, GroupInputs, GroupRule};
use crate::netgen::{Network, PairDiscrepancy};
use crate::numeric::{mean, pairwise_sum};

/// Aggregation weights that write the ATE estimate as a single weighted sum of outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaWeights {
    pub theta: Vec<f64>,
    /// Units whose groups have both arms nonempty.
    pub included: Vec<bool>,
}

impl ThetaWeights {
    pub fn included_count(&self) -> usize {
        self.included.iter().filter(|&&b| b).count()
    }

    /// `(1/|I|) * sum_k (2 T_k - 1) theta_k Y_k`.
    pub fn weighted_sum(&self, t: &[u8], y: &[f64]) -> f64 {
        let terms: Vec<f64> = (0..y.len())
            .map(|k| if t[k] == 1 { self.theta[k] * y[k] } else { -self.theta[k] * y[k] })
            .collect();
        pairwise_sum(&terms) / self.included_count() as f64
    }
}

/// θ from already-built groups: `theta_k = sum over i in I with k in C_i of w_ik / W_{i,T_k}`,
/// where `W_{i,t}` is the total weight of arm `t` of `C_i`. With unit weights and symmetric
/// groups this is `sum_{j in C_k, j in I} 1 / |C_{j,T_k}|`.
pub(crate) fn theta_from_groups(groups: &[ComparisonGroup], t: &[u8]) -> ThetaWeights {
    let n = t.len();
    let mut theta = vec![0.0; n];
    let mut included = vec![false; n];
    for g in groups {
        if !g.has_both_arms() {
            continue;
        }
        included[g.owner] = true;
        for arm in [0u8, 1] {
            let total = g.arm_weight(arm);
            for (k, w) in g.arm(arm) {
                theta[k] += w / total;
            }
        }
    }
    ThetaWeights { theta, included }
}

/// θ weights for a rule on a network.
pub fn theta_weights(
    net: &Network,
    rule: &GroupRule,
    inputs: &GroupInputs<'_>,
) -> Result<ThetaWeights> {
    let set = build_groups(net, rule, inputs)?;
    Ok(theta_from_groups(&set.groups, inputs.treatment))
}

/// Per-unit intermediate quantities of an ATE computation.
#[derive(Debug, Clone)]
pub struct AteDetail {
    pub result: EstimateResult,
    /// Per-unit CATE estimates, `None` outside the included set.
    pub cate: Vec<Option<f64>>,
    pub theta: ThetaWeights,
    /// Treated and control arm summaries per unit (`None` if empty).
    pub arms: Vec<[Option<ArmStats>; 2]>,
}

/// Averages group-level CATE estimates over units whose groups have both arms.
///
/// The standard error uses the influence proxy
/// `psi_k = (2 T_k - 1) theta_k e_k + 1[k in I] (CATE_k - ATE)`, with `e_k` the deviation of
/// `Y_k` from the same-treatment arm mean of its own group, and `se = sqrt(sum psi_k^2) / |I|`.
pub fn ate_from_groups(groups: &[ComparisonGroup], sample_t: &[u8], y: &[f64], label: &str) -> Result<AteDetail> {
    let n = y.len();
    if groups.len() != n || sample_t.len() != n {
        return Err(Error::Input("groups, treatments and outcomes must have one entry per unit".into()));
    }
    let arms: Vec<[Option<ArmStats>; 2]> = groups
        .iter()
        .map(|g| [ArmStats::of(g, y, 0), ArmStats::of(g, y, 1)])
        .collect();
    let cate: Vec<Option<f64>> = arms
        .iter()
        .map(|a| match a {
            [Some(c), Some(t)] => Some(t.mean - c.mean),
            _ => None,
        })
        .collect();
    let included_cates: Vec<f64> = cate.iter().flatten().copied().collect();
    let n_inc = included_cates.len();
    let dropped = n - n_inc;
    if n_inc == 0 {
        return Err(Error::Estimation(format!("no unit has both treatment arms in its {label} group")));
    }
    let point = mean(&included_cates);
    let theta = theta_from_groups(groups, sample_t);

    let arm_means: [f64; 2] = [0u8, 1].map(|t| {
        let ys: Vec<f64> = (0..n).filter(|&k| sample_t[k] == t).map(|k| y[k]).collect();
        if ys.is_empty() {
            0.0
        } else {
            mean(&ys)
        }
    });
    let psi_sq: Vec<f64> = (0..n)
        .map(|k| {
            let tk = sample_t[k];
            let own = arms[k][usize::from(tk == 1)].map_or(arm_means[usize::from(tk == 1)], |a| a.mean);
            let sign = if tk == 1 { 1.0 } else { -1.0 };
            let mut psi = sign * theta.theta[k] * (y[k] - own);
            if let Some(c) = cate[k] {
                psi += c - point;
            }
            psi * psi
        })
        .collect();
    let se = pairwise_sum(&psi_sq).sqrt() / n_inc as f64;

    let empty_arms = groups.iter().filter(|g| !g.has_both_arms()).count();
    let result = EstimateResult {
        estimator: label.to_string(),
        point,
        se: Some(se),
        n_effective: n_inc,
        theta: Some(theta.theta.clone()),
        diagnostics: Diagnostics { dropped_units: dropped, empty_arms, flags: Vec::new() },
    };
    Ok(AteDetail { result, cate, theta, arms })
}

/// ATE from comparison groups built by `rule` on `net`.
pub fn ate_estimate(
    net: &Network,
    rule: &GroupRule,
    sample: &Sample,
    discrepancy: Option<&dyn PairDiscrepancy>,
) -> Result<EstimateResult> {
    Ok(ate_detail(net, rule, sample, discrepancy)?.result)
}

pub(crate) fn ate_detail(
    net: &Network,
    rule: &GroupRule,
    sample: &Sample,
    discrepancy: Option<&dyn PairDiscrepancy>,
) -> Result<AteDetail> {
    if net.n() != sample.n() {
        return Err(Error::Input(format!("network has {} nodes, sample has {} units", net.n(), sample.n())));
    }
    let inputs = GroupInputs {
        covariates: Some(&sample.covariates),
        treatment: &sample.treatment,
        discrepancy,
    };
    let set = build_groups(net, rule, &inputs)?;
    ate_from_groups(&set.groups, &sample.treatment, &sample.outcome, &rule.label())
}
