//! Pairwise transfer entropy on linear and Boolean network dynamics.
//!
//! - [`netgen`]: weighted directed networks, generators and text I/O.
//! - [`lincov`]: stationary covariance of the linear process and exact TE.
//! - [`motifte`]: motif-expansion approximation of TE.
//! - [`dynsim`]: VAR and random Boolean network simulation.
//! - [`estim`]: TE and AIS estimators from sampled series.
//! - [`experiments`]: degree and rewiring sweeps.

pub mod dynsim;
pub mod error;
pub mod estim;
pub mod experiments;
pub mod lincov;
pub mod motifte;
pub mod netgen;
pub mod rng;

pub use error::{Error, Result};
pub use lincov::EmbeddingSpec;
pub use netgen::WeightedAdjacency;
