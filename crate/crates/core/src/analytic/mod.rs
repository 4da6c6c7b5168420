//! Closed-form, asymptotic and quadrature evaluation of outage probability,
//! ergodic rate, ergodic radar estimation information rate (REIR), diversity
//! order, high-SNR slope, M-PSK BER and the aggregate channel capacity.

mod asymptotic;
mod ber;
mod capacity;
mod noma;
mod oma;
mod reir;

use std::fmt;

use serde::Serialize;

pub use asymptotic::{asymptotic_op, asymptotic_op_band, asymptotic_op_oma, diversity_order};
pub use ber::{ber_mpsk, BerParams};
pub use capacity::{channel_capacity, CapacityBreakdown};
pub use noma::{
    op_noma, op_noma_band, rate_noma, rate_noma_band, rate_noma_closed_form, rate_noma_series,
    SeriesOutcome,
};
pub use oma::{op_oma, op_oma_band, rate_oma, rate_oma_band, rate_oma_quadrature};
pub use reir::{
    high_snr_slope, reir_asymptotic, reir_asymptotic_terms, reir_conditional, reir_general,
    reir_general_band, reir_rayleigh, AsymptoticReirTerms,
};

/// Physical unit of a metric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Probability,
    BitsPerSecondPerHz,
    BitsPerSecond,
    Dimensionless,
    Decibel,
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Asymptotic,
    Quadrature,
    Series,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Asymptotic => "asymptotic",
            Method::Quadrature => "quadrature",
            Method::Series => "series",
            Method::MonteCarlo => "montecarlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A metric value with its unit, provenance and uncertainty.
///
/// Values outside the physical range (probabilities outside [0, 1], negative
/// rates) are reported as computed with `out_of_range` set. Asymptotic
/// expressions do this at low SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricResult {
    pub value: f64,
    pub unit: Unit,
    pub method: Method,
    /// Half-width of the confidence interval (Monte Carlo only).
    pub ci_halfwidth: Option<f64>,
    /// Estimated numerical error (quadrature and truncated series).
    pub abs_error: Option<f64>,
    pub out_of_range: bool,
}

impl MetricResult {
    pub fn new(value: f64, unit: Unit, method: Method) -> Self {
        let out_of_range = match unit {
            Unit::Probability => !(0.0..=1.0).contains(&value),
            Unit::BitsPerSecondPerHz | Unit::BitsPerSecond => value < 0.0,
            Unit::Dimensionless | Unit::Decibel => false,
        };
        Self {
            value,
            unit,
            method,
            ci_halfwidth: None,
            abs_error: None,
            out_of_range,
        }
    }

    pub fn probability(value: f64, method: Method) -> Self {
        Self::new(value, Unit::Probability, method)
    }

    pub fn with_error(mut self, abs_error: f64) -> Self {
        self.abs_error = Some(abs_error);
        self
    }

    pub fn with_ci(mut self, halfwidth: f64) -> Self {
        self.ci_halfwidth = Some(halfwidth);
        self
    }
}

/// Natural log of x^p with the convention 0^0 = 1.
pub(crate) fn pow_ln(p: f64, x: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * x.ln()
    }
}
