//! Homophilic network formation.
//!
//! Units link when an independent uniform shock falls below `g(s_n * distance)`, where the
//! distance is taken over the link columns of the covariate table. A dense variant adds an
//! observed discrepancy `h` to the distance over unobserved columns.

mod calibrate;
mod clustering;
mod covariates;
mod link;
mod network;
mod sample;

pub use calibrate::{calibrate_scale, mc_mean_degree, rescale_scale, Calibration, CalibrationOptions};
pub use clustering::{clustering_coefficient, clustering_limit, clustering_limit_scaled, McEstimate, Transitivity};
pub use covariates::CovariateTable;
pub use link::{
    link_probability, pair_probability, DenseModel, EuclideanDiscrepancy, HMode, LinkFamily, LinkSpec,
    PairDiscrepancy, PairTable, TabularLink,
};
pub use network::Network;
pub use sample::{count_edges, sample_network};
