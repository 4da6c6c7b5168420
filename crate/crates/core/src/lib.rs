//! Performance analysis of semi-integrated sensing and communication
//! (Semi-ISaC) uplinks over Nakagami-m fading: closed-form and asymptotic
//! outage probability, ergodic rate and radar estimation information rate
//! for OMA and two-user NOMA, cross-checked by a Monte Carlo link simulator.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod error;
pub mod metrics;
pub mod montecarlo;
pub mod scenario;
pub mod specfun;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
