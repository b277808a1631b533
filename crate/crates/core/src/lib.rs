//! Treatment-effect estimation with comparison groups drawn from a homophilous network.
//!
//! Units that are linked tend to share unobserved characteristics, so a unit's network
//! neighborhood serves as a proxy control group. The crate generates such networks
//! ([`netgen`]), builds comparison groups ([`groups`]), estimates conditional and average
//! treatment effects ([`estimators`]) and runs simulation studies ([`simlab`]).

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimators;
pub mod groups;
pub mod netgen;
pub mod numeric;
pub mod rng;
pub mod simlab;

pub use error::{Error, Result};
