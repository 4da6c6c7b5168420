//! High-SNR outage expressions from the single-term expansion
//! γ(m, x) ≈ x^m / m and the resulting diversity orders.

use super::noma::NomaPair;
use super::{pow_ln, Method, MetricResult};
use crate::error::Result;
use crate::scenario::{Band, Scenario, SystemConfig, User};
use crate::specfun::{binomial, lgamma, ln_upper_gamma, reg_lower_gamma};

// (m g / s)^m Σ_r C(m,r) k^{m-r} a^r Γ(m+r, m y0) / (Γ(m+1) Γ(m) m^r)
fn leading_term(pair: &NomaPair, g: f64, y0: f64) -> Result<f64> {
    let m = pair.m as f64;
    let head = m * (m * g / pair.s).ln() - lgamma(m + 1.0) - lgamma(m);
    let mut total = 0.0;
    for r in 0..=pair.m {
        let rf = r as f64;
        let ln_t = head
            + binomial(pair.m, r).ln()
            + pow_ln(m - rf, pair.k)
            + pow_ln(rf, pair.a)
            + ln_upper_gamma(m + rf, m * y0)?
            - rf * m.ln();
        total += ln_t.exp();
    }
    Ok(total)
}

/// Asymptotic NOMA outage probability on a resolved band. The first-decoded
/// user's value decays as P^{-m}; the second-decoded user's keeps the floor
/// F_h(γ_th (E[I_R] + σ²) / (gain P)) of its own link.
pub fn asymptotic_op_band(
    band: &Band,
    scenario: Scenario,
    user: User,
    gamma_th: f64,
    gamma_sic: f64,
) -> Result<MetricResult> {
    let pair = NomaPair::new(band, scenario)?;
    let value = if user == pair.first {
        leading_term(&pair, gamma_th, 0.0)?
    } else {
        let y0 = gamma_th * pair.y_scale;
        let m = pair.m as f64;
        reg_lower_gamma(m, m * y0)? + leading_term(&pair, gamma_sic, y0)?
    };
    Ok(MetricResult::probability(value, Method::Asymptotic))
}

pub fn asymptotic_op(
    cfg: &SystemConfig,
    scenario: Scenario,
    user: User,
    gamma_th: f64,
    gamma_sic: f64,
) -> Result<MetricResult> {
    asymptotic_op_band(
        &cfg.for_scenario(scenario).isac_band()?,
        scenario,
        user,
        gamma_th,
        gamma_sic,
    )
}

/// Leading high-SNR term (Ω γ_th)^m / m! of the OMA outage probability.
pub fn asymptotic_op_oma(cfg: &SystemConfig, user: User, gamma_th: f64) -> Result<MetricResult> {
    let band = cfg.isac_band()?;
    let m = band.m as f64;
    let x = super::oma::omega(&band, user) * gamma_th;
    Ok(MetricResult::probability(
        pow_ln(m, x).exp() / lgamma(m + 1.0).exp(),
        Method::Asymptotic,
    ))
}

/// Diversity order as the transmit power grows (the user's own power for OMA,
/// the first-decoded user's power for NOMA): m for OMA users and the
/// first-decoded NOMA user, 0 for the second-decoded NOMA user, whose outage
/// floors at a level set by its own, fixed-power link.
pub fn diversity_order(cfg: &SystemConfig, scenario: Scenario, user: User) -> Result<f64> {
    cfg.validate()?;
    let m = cfg.fading.m as f64;
    Ok(match scenario.first_decoded() {
        None => m,
        Some(first) if first == user => m,
        Some(_) => 0.0,
    })
}
