//! Secrecy outage probability of wiretap channels with arbitrarily correlated
//! receive branches.
//!
//! The legitimate receiver has `M` correlated antennas per transmit antenna and
//! combines them with MRC, SC or EGC. The eavesdropper has `N_E` antennas whose
//! gains share a common component with the legitimate link. The crate offers
//! exact single-integral expressions, high-SNR closed forms, and a seeded
//! parallel Monte Carlo simulator that reproduces the same quantities.

// `!(x >= 0.0)` style guards are there to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod chanmodel;
pub mod combine;
mod error;
pub mod mcsim;
pub mod specfun;

pub use analytic::{Method, SopEstimate};
pub use chanmodel::{
    build_factors, derive_factors, ChannelDraw, CorrelationSpec, DerivedFactors, MainFactors,
    SystemConfig,
};
pub use combine::{CombinerKind, TasMode};
pub use error::{Error, Result};
pub use mcsim::McPlan;
pub use specfun::Precision;

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
