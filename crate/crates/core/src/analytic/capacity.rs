//! Aggregate channel capacity of one network mode, normalised by the total
//! bandwidth B:
//!
//! C = β S_ISaC + ε S_comm + R_est / B  (bits/s/Hz)
//!
//! where S_ISaC and S_comm are the two-user sum ergodic rates in the ISaC and
//! communication-only bands (the latter has no radar echo and noise k_B T εB)
//! and R_est is the ergodic REIR of the ISaC band. The radar-only portion αB
//! carries no communication rate. FD-ISaC is OMA over the whole band.

use super::{
    noma::rate_noma_band, oma::rate_oma_band, reir::reir_general, Method, MetricResult, Unit,
};
use crate::error::Result;
use crate::scenario::{Band, BandKind, Scenario, SystemConfig, User};

/// Components of the aggregate capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityBreakdown {
    /// Sum rate in the ISaC band (bits/s/Hz of that band).
    pub isac_sum_rate: f64,
    /// Sum rate in the communication-only band (bits/s/Hz of that band).
    pub comm_sum_rate: f64,
    /// Ergodic REIR (bits/s).
    pub reir: f64,
    /// Aggregate (bits/s/Hz of the total bandwidth).
    pub total: f64,
}

fn sum_rate(band: &Band, scenario: Scenario) -> Result<f64> {
    let mut s = 0.0;
    for user in [User::C, User::R] {
        s += if scenario.is_noma() {
            rate_noma_band(band, scenario, user)?.value
        } else {
            rate_oma_band(band, user)?.value
        };
    }
    Ok(s)
}

pub fn channel_capacity(
    cfg: &SystemConfig,
    scenario: Scenario,
) -> Result<(MetricResult, CapacityBreakdown)> {
    let eff = cfg.for_scenario(scenario);
    let split = eff.bandwidth;
    let isac_sum_rate = if split.beta_semi > 0.0 {
        sum_rate(&eff.band(BandKind::Isac)?, scenario)?
    } else {
        0.0
    };
    let comm_sum_rate = if split.epsilon_semi > 0.0 {
        sum_rate(&eff.band(BandKind::CommOnly)?, scenario)?
    } else {
        0.0
    };
    let reir = reir_general(&eff)?.value;
    let total = split.beta_semi * isac_sum_rate
        + split.epsilon_semi * comm_sum_rate
        + reir / split.total_hz;
    let breakdown = CapacityBreakdown {
        isac_sum_rate,
        comm_sum_rate,
        reir,
        total,
    };
    let method = if scenario.is_noma() {
        Method::Quadrature
    } else {
        Method::Analytic
    };
    Ok((
        MetricResult::new(total, Unit::BitsPerSecondPerHz, method),
        breakdown,
    ))
}
