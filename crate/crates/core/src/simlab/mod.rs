//! Simulation design and replication harness.
//!
//! Covariates mix a uniform, a triangular and a sum-of-uniforms component; links form on
//! `(x2, x3)` with `x3` unobserved; treatment selection loads on `x3` through `beta3`.
//! [`rmse_experiment`] reruns the design across outcome families and selection strengths
//! and reports the RMSE of each estimator against the population ATE.

mod dense;
mod dgp;
mod rmse;

pub use dense::{kappa_bias_sweep, DenseDesign, KappaPoint};
pub use dgp::{
    assign_outcomes, draw_covariates, generate_sample, true_ate, ControlMode, DgpSpec, GeneratedSample, OutcomeFamily,
    Shocks, DEFAULT_MIXING, LINK_COLS, OBSERVED, UNOBSERVED,
};
pub use rmse::{calibrated_scale, replication_seed, rmse_experiment, EstimatorId, RmseCell, RmseConfig, RmseReport};
