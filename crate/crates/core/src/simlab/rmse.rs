use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dgp::{assign_outcomes, draw_covariates, ControlMode, OutcomeFamily, Shocks, DEFAULT_MIXING, LINK_COLS, OBSERVED};
use crate::error::{Error, Result};
use crate::estimators::{ate_from_groups, baseline_estimates, PropensityModel, Sample};
use crate::groups::{build_groups, BandwidthRule, ComparisonGroup, GroupInputs, GroupRule};
use crate::netgen::{calibrate_scale, rescale_scale, sample_network, CalibrationOptions, CovariateTable, LinkFamily, LinkSpec, Network};
use crate::numeric::pairwise_sum;
use crate::rng::derive_seed;

/// Estimators compared in the simulation tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorId {
    OrderM(usize),
    CommonFriends(usize),
    Ols,
    Strat,
    Ipw,
}

impl EstimatorId {
    pub fn label(self) -> String {
        match self {
            Self::OrderM(m) => format!("M={m}"),
            Self::CommonFriends(c) => format!("c={c}"),
            Self::Ols => "OLS".into(),
            Self::Strat => "Strat".into(),
            Self::Ipw => "IPW".into(),
        }
    }

    pub fn is_network(self) -> bool {
        matches!(self, Self::OrderM(_) | Self::CommonFriends(_))
    }

    fn rule(self, kernel_cols: &[usize], bandwidth: BandwidthRule) -> Option<GroupRule> {
        let base = match self {
            Self::OrderM(m) => GroupRule::order_m(m),
            Self::CommonFriends(c) => GroupRule::common_friends(c),
            _ => return None,
        };
        Some(base.with_kernel(kernel_cols.to_vec(), bandwidth))
    }

    /// The full set of columns in the simulation tables.
    pub fn table_set() -> Vec<Self> {
        let mut v: Vec<Self> = (1..=4).map(Self::OrderM).collect();
        v.extend((2..=4).map(Self::CommonFriends));
        v.extend([Self::Ols, Self::Strat, Self::Ipw]);
        v
    }
}

impl FromStr for EstimatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("unknown estimator {s:?}; expected M=<m>, c=<c>, OLS, Strat or IPW"));
        let s = s.trim();
        let num = |rest: &str| rest.parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(bad);
        if let Some(rest) = s.strip_prefix("M=") {
            return Ok(Self::OrderM(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("c=") {
            return Ok(Self::CommonFriends(num(rest)?));
        }
        match s.to_ascii_lowercase().as_str() {
            "ols" => Ok(Self::Ols),
            "strat" => Ok(Self::Strat),
            "ipw" => Ok(Self::Ipw),
            _ => Err(bad()),
        }
    }
}

impl Serialize for EstimatorId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for EstimatorId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn default_families() -> Vec<OutcomeFamily> {
    vec![OutcomeFamily::A, OutcomeFamily::B, OutcomeFamily::C]
}
fn default_beta3() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}
fn default_target_degree() -> f64 {
    5.5
}
fn default_anchor() -> usize {
    500
}
fn default_noise() -> f64 {
    1.0
}

/// A grid of designs sharing sample size and control mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseConfig {
    pub n: usize,
    #[serde(default = "default_families")]
    pub families: Vec<OutcomeFamily>,
    #[serde(default = "default_beta3")]
    pub beta3: Vec<f64>,
    #[serde(default = "EstimatorId::table_set")]
    pub estimators: Vec<EstimatorId>,
    pub replications: usize,
    #[serde(default)]
    pub control_mode: ControlMode,
    /// Mean degree targeted when calibrating at `calibration_n` units.
    #[serde(default = "default_target_degree")]
    pub target_degree: f64,
    /// Sample size at which the link scale is calibrated; other sizes use the
    /// `(n / ln n)^(1/d)` growth rule.
    #[serde(default = "default_anchor")]
    pub calibration_n: usize,
    #[serde(default = "default_noise")]
    pub noise_sd: f64,
    /// Skip calibration and use this link scale at `n`.
    #[serde(default)]
    pub scale: Option<f64>,
    /// Kernel bandwidth for the observables controlled in the network estimators.
    #[serde(default = "default_bandwidth")]
    pub bandwidth: BandwidthRule,
}

fn default_bandwidth() -> BandwidthRule {
    BandwidthRule::Silverman
}

impl RmseConfig {
    pub fn new(n: usize, replications: usize) -> Self {
        Self {
            n,
            families: default_families(),
            beta3: default_beta3(),
            estimators: EstimatorId::table_set(),
            replications,
            control_mode: ControlMode::Base,
            target_degree: default_target_degree(),
            calibration_n: default_anchor(),
            noise_sd: default_noise(),
            scale: None,
            bandwidth: default_bandwidth(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(Error::Input(format!("n must be at least 10, got {}", self.n)));
        }
        if self.replications == 0 {
            return Err(Error::Input("replications must be at least 1".into()));
        }
        if self.families.is_empty() || self.beta3.is_empty() || self.estimators.is_empty() {
            return Err(Error::Input("families, beta3 and estimators must be nonempty".into()));
        }
        if self.beta3.iter().any(|b| !b.is_finite()) {
            return Err(Error::Input("beta3 values must be finite".into()));
        }
        if !(self.target_degree > 0.0) || self.calibration_n < 10 {
            return Err(Error::Input("target_degree must be positive and calibration_n at least 10".into()));
        }
        if !(self.noise_sd >= 0.0) {
            return Err(Error::Input("noise_sd must be nonnegative".into()));
        }
        if let Some(s) = self.scale {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::Input(format!("scale must be positive, got {s}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmseCell {
    pub family: OutcomeFamily,
    pub beta3: f64,
    pub estimator: EstimatorId,
    pub rmse: f64,
    /// Delta-method Monte-Carlo standard error of the RMSE.
    pub mc_se: f64,
    pub bias: f64,
    pub successes: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmseReport {
    pub config: RmseConfig,
    pub base_seed: u64,
    /// Link scale used at `n`.
    pub scale: f64,
    /// Mean degree observed at `n`, averaged over replications.
    pub mean_degree: f64,
    pub cells: Vec<RmseCell>,
}

impl RmseReport {
    pub fn cell(&self, family: OutcomeFamily, beta3: f64, estimator: EstimatorId) -> Option<&RmseCell> {
        self.cells.iter().find(|c| c.family == family && c.beta3 == beta3 && c.estimator == estimator)
    }

    /// One row per `(family, beta3)` with an RMSE column per estimator.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,beta3");
        for e in &self.config.estimators {
            let _ = write!(out, ",{}", e.label());
        }
        out.push('\n');
        for &f in &self.config.families {
            for &b in &self.config.beta3 {
                let _ = write!(out, "{},{}", f.label(), b);
                for &e in &self.config.estimators {
                    match self.cell(f, b, e) {
                        Some(c) if c.successes > 0 => {
                            let _ = write!(out, ",{:.6}", c.rmse);
                        }
                        _ => out.push_str(",NA"),
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Link scale at the anchor size, from a calibration sample drawn under `base_seed`.
pub fn calibrated_scale(config: &RmseConfig, base_seed: u64) -> Result<f64> {
    if let Some(s) = config.scale {
        return Ok(s);
    }
    let cov = draw_covariates(config.calibration_n, &DEFAULT_MIXING, derive_seed(base_seed, &[u64::MAX]))?;
    let template = LinkSpec::new(LinkFamily::Gaussian, 1.0, LINK_COLS.to_vec())?;
    let cal = calibrate_scale(&cov, &template, config.target_degree, derive_seed(base_seed, &[u64::MAX, 1]), CalibrationOptions::default())?;
    Ok(rescale_scale(cal.scale, config.calibration_n, config.n, LINK_COLS.len()))
}

/// Seed of replication `r`; the same for every cell, giving common random numbers.
pub fn replication_seed(base_seed: u64, r: usize) -> u64 {
    derive_seed(base_seed, &[r as u64])
}

struct Replication {
    mean_degree: f64,
    /// Estimation errors in cell order: family, beta3, estimator.
    errors: Vec<Option<f64>>,
}

fn regroup(groups: &[ComparisonGroup], t: &[u8]) -> Vec<ComparisonGroup> {
    groups
        .iter()
        .map(|g| ComparisonGroup::new(g.owner, g.members.clone(), g.weights.clone(), t).expect("valid group"))
        .collect()
}

fn run_replication(config: &RmseConfig, scale: f64, seed: u64) -> Result<Replication> {
    let n = config.n;
    let cov: CovariateTable = draw_covariates(n, &DEFAULT_MIXING, seed)?;
    let link = LinkSpec::new(LinkFamily::Gaussian, scale, LINK_COLS.to_vec())?;
    let net: Network = sample_network(&cov, &link, derive_seed(seed, &[7]))?;
    let shocks = Shocks::draw(n, seed);
    let kernel_cols = config.control_mode.kernel_cols();

    // Members and kernel weights depend only on covariates and the network.
    let placeholder = vec![0u8; n];
    let inputs = GroupInputs { covariates: Some(&cov), treatment: &placeholder, discrepancy: None };
    let group_sets: Vec<Option<Vec<ComparisonGroup>>> = config
        .estimators
        .iter()
        .map(|e| e.rule(&kernel_cols, config.bandwidth).map(|r| build_groups(&net, &r, &inputs).map(|s| s.groups)).transpose())
        .collect::<Result<_>>()?;

    let mut errors = Vec::new();
    for &family in &config.families {
        for &beta3 in &config.beta3 {
            let (sample, _) = assign_outcomes(&cov, family, beta3, config.noise_sd, &shocks)?;
            let truth = family.population_ate();
            let baselines = baseline_errors(&sample, config, truth);
            for (k, &e) in config.estimators.iter().enumerate() {
                let err = match &group_sets[k] {
                    Some(groups) => ate_from_groups(&regroup(groups, &sample.treatment), &sample.treatment, &sample.outcome, "")
                        .ok()
                        .map(|d| d.result.point - truth),
                    None => baselines.map(|b| match e {
                        EstimatorId::Ols => b[0],
                        EstimatorId::Ipw => b[1],
                        _ => b[2],
                    }),
                };
                errors.push(err);
            }
        }
    }
    Ok(Replication { mean_degree: net.mean_degree(), errors })
}

fn baseline_errors(sample: &Sample, config: &RmseConfig, truth: f64) -> Option<[f64; 3]> {
    if !config.estimators.iter().any(|e| !e.is_network()) {
        return None;
    }
    let pm = PropensityModel::fit(&sample.covariates, &OBSERVED, &sample.treatment).ok()?;
    let b = baseline_estimates(sample, &OBSERVED, &pm).ok()?;
    Some([b.ols.point - truth, b.ipw.point - truth, b.strat.point - truth])
}

/// Runs every cell of the grid for `replications` draws and summarizes the errors.
pub fn rmse_experiment(config: &RmseConfig, base_seed: u64) -> Result<RmseReport> {
    config.validate()?;
    let scale = calibrated_scale(config, base_seed)?;
    let reps: Vec<Replication> = (0..config.replications)
        .into_par_iter()
        .map(|r| run_replication(config, scale, replication_seed(base_seed, r)))
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    let mut idx = 0;
    for &family in &config.families {
        for &beta3 in &config.beta3 {
            for &estimator in &config.estimators {
                let errs: Vec<f64> = reps.iter().filter_map(|r| r.errors[idx]).collect();
                idx += 1;
                let m = errs.len();
                let failures = config.replications - m;
                let (rmse, mc_se, bias) = if m == 0 {
                    (f64::NAN, f64::NAN, f64::NAN)
                } else {
                    let sq: Vec<f64> = errs.iter().map(|e| e * e).collect();
                    let mse = pairwise_sum(&sq) / m as f64;
                    let dev: Vec<f64> = sq.iter().map(|s| (s - mse) * (s - mse)).collect();
                    let var_sq = if m > 1 { pairwise_sum(&dev) / (m - 1) as f64 } else { 0.0 };
                    let rmse = mse.sqrt();
                    let se = if rmse > 0.0 { (var_sq / m as f64).sqrt() / (2.0 * rmse) } else { 0.0 };
                    (rmse, se, pairwise_sum(&errs) / m as f64)
                };
                cells.push(RmseCell { family, beta3, estimator, rmse, mc_se, bias, successes: m, failures });
            }
        }
    }
    let degrees: Vec<f64> = reps.iter().map(|r| r.mean_degree).collect();
    Ok(RmseReport {
        config: config.clone(),
        base_seed,
        scale,
        mean_degree: pairwise_sum(&degrees) / degrees.len() as f64,
        cells,
    })
}
