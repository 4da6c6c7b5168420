use std::f64::consts::LN_2;

use super::{Method, MetricResult, Unit};
use crate::error::Result;
use crate::scenario::{Band, SystemConfig, User};
use crate::specfun::{
    exp_integral_en_scaled, reg_lower_gamma, reg_upper_gamma, try_integrate,
    try_integrate_semi_infinite, QuadratureSettings,
};

/// Ω = m (E[I_R] + σ²) / (P_j 𝒫_c(d_j)) for one band.
pub(crate) fn omega(band: &Band, user: User) -> f64 {
    band.m as f64 * (band.mean_echo() + band.noise) / (band.power(user) * band.gain(user))
}

/// OMA outage probability γ(m, Ω γ_th) / Γ(m).
pub fn op_oma_band(band: &Band, user: User, gamma_th: f64) -> Result<MetricResult> {
    let p = reg_lower_gamma(band.m as f64, omega(band, user) * gamma_th)?;
    Ok(MetricResult::probability(p, Method::Analytic))
}

/// OMA outage probability in the configuration's ISaC band.
pub fn op_oma(cfg: &SystemConfig, user: User, gamma_th: f64) -> Result<MetricResult> {
    op_oma_band(&cfg.isac_band()?, user, gamma_th)
}

/// OMA ergodic rate (1/(2 ln 2)) Σ_{k<m} e^Ω E_{k+1}(Ω) in bits/s/Hz.
pub fn rate_oma_band(band: &Band, user: User) -> Result<MetricResult> {
    let om = omega(band, user);
    let mut s = 0.0;
    for k in 0..band.m {
        s += exp_integral_en_scaled(k + 1, om)?;
    }
    Ok(MetricResult::new(
        s / (2.0 * LN_2),
        Unit::BitsPerSecondPerHz,
        Method::Analytic,
    ))
}

pub fn rate_oma(cfg: &SystemConfig, user: User) -> Result<MetricResult> {
    rate_oma_band(&cfg.isac_band()?, user)
}

/// OMA ergodic rate from the definition (1/(2 ln 2)) ∫ (1 - OP(x)) / (1 + x) dx.
pub fn rate_oma_quadrature(band: &Band, user: User) -> Result<MetricResult> {
    let m = band.m as f64;
    let om = omega(band, user);
    let settings = QuadratureSettings::default().with_rel_tol(1e-12);
    // Q(m, Ω x) falls off past x ~ 1/Ω, so split there.
    let width = 1.0 / om;
    let f = |x: f64| reg_upper_gamma(m, om * x).map(|q| q / (1.0 + x));
    let head = try_integrate(f, 0.0, width, &settings)?;
    let tail = try_integrate_semi_infinite(f, width, width, &settings)?;
    let v = head.require()? + tail.require()?;
    Ok(MetricResult::new(
        v / (2.0 * LN_2),
        Unit::BitsPerSecondPerHz,
        Method::Quadrature,
    )
    .with_error((head.abs_error + tail.abs_error) / (2.0 * LN_2)))
}
