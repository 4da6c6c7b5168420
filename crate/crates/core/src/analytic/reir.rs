//! Ergodic radar estimation information rate
//! R = (δ / 2T) E[log2(1 + 2 T βB γ_echo)] with γ_echo = Ξ_eff X, where
//! X = |h_rd|²|h_ru|² and Ξ_eff = Ξ_{r,1} d_r^{-α_r}.

use std::f64::consts::LN_2;

use super::{Method, MetricResult, Unit};
use crate::channel::RadarParams;
use crate::error::{domain, Error, Result};
use crate::scenario::{Band, SystemConfig};
use crate::specfun::{
    digamma, exp_integral_en_scaled, lgamma, meijer_rayleigh_reir_kernel, product_gamma_sf,
    try_integrate, try_integrate_semi_infinite, QuadratureSettings, EULER_GAMMA,
};

fn prefactor(band: &Band) -> f64 {
    band.duty_cycle / (2.0 * band.pulse_duration * LN_2)
}

/// Ξ_eff = Ξ_{r,1} d_r^{-α_r}, the mean echo SNR times 2TβB.
fn xi_eff(band: &Band) -> f64 {
    band.xi_r1() * band.d_r.powf(-band.alpha_r)
}

fn zero(method: Method) -> MetricResult {
    MetricResult::new(0.0, Unit::BitsPerSecond, method)
}

fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
        .with_rel_tol(1e-10)
        .with_abs_tol(1e-300)
}

/// Integrates f over [0, ∞) with breakpoints at 1 and every decade up to
/// `scale`, then a mapped tail beyond.
fn integrate_log_spread<F>(f: F, scale: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64> + Copy,
{
    let s = settings();
    let mut edges = vec![0.0, 1.0f64.min(scale)];
    let mut e = 10.0;
    while e < scale {
        edges.push(e);
        e *= 10.0;
    }
    if scale > 1.0 {
        edges.push(scale);
    }
    let (mut v, mut err) = (0.0, 0.0);
    for w in edges.windows(2) {
        let r = try_integrate(f, w[0], w[1], &s)?;
        v += r.value;
        err += r.abs_error;
        if !r.converged {
            return Err(Error::Quadrature {
                estimate: v,
                abs_error: err,
            });
        }
    }
    let last = *edges.last().expect("edges not empty");
    let r = try_integrate_semi_infinite(f, last, last.max(1.0), &s)?;
    if !r.converged {
        return Err(Error::Quadrature {
            estimate: v + r.value,
            abs_error: err + r.abs_error,
        });
    }
    Ok((v + r.value, err + r.abs_error))
}

/// Ergodic REIR on a resolved ISaC band by quadrature of
/// ∫_0^∞ (1 - F_X(z / Ξ_eff)) / (1 + z) dz with the product-channel CDF.
pub fn reir_general_band(band: &Band) -> Result<MetricResult> {
    let xi = xi_eff(band);
    if xi == 0.0 {
        return Ok(zero(Method::Quadrature));
    }
    let m = band.m as f64;
    let (v, err) = integrate_log_spread(|z| Ok(product_gamma_sf(m, z / xi)? / (1.0 + z)), xi)?;
    let pf = prefactor(band);
    Ok(MetricResult::new(pf * v, Unit::BitsPerSecond, Method::Quadrature).with_error(pf * err))
}

/// Ergodic REIR of the configuration. An empty ISaC band (β = 0) carries no
/// echo, so the rate is zero.
pub fn reir_general(cfg: &SystemConfig) -> Result<MetricResult> {
    if cfg.bandwidth.isac_hz() == 0.0 {
        return Ok(zero(Method::Quadrature));
    }
    reir_general_band(&cfg.isac_band()?)
}

/// Rayleigh (m = 1) ergodic REIR through the G^{13}_{31} kernel, whatever the
/// configured m.
pub fn reir_rayleigh(cfg: &SystemConfig) -> Result<MetricResult> {
    if cfg.bandwidth.isac_hz() == 0.0 {
        return Ok(zero(Method::Analytic));
    }
    let band = cfg.isac_band()?;
    let xi = xi_eff(&band);
    if xi == 0.0 {
        return Ok(zero(Method::Analytic));
    }
    let v = meijer_rayleigh_reir_kernel(1.0 / xi)?;
    Ok(MetricResult::new(
        prefactor(&band) * v,
        Unit::BitsPerSecond,
        Method::Analytic,
    ))
}

/// Ergodic REIR from conditioning on one fading factor y ~ Gamma(m, 1/m):
/// (δ / 2T ln 2) E_y[Σ_{k<m} e^{c/y} E_{k+1}(c/y)] with c = m / Ξ_eff.
/// A one-dimensional route independent of the product-channel CDF.
pub fn reir_conditional(cfg: &SystemConfig) -> Result<MetricResult> {
    if cfg.bandwidth.isac_hz() == 0.0 {
        return Ok(zero(Method::Quadrature));
    }
    let band = cfg.isac_band()?;
    let xi = xi_eff(&band);
    if xi == 0.0 {
        return Ok(zero(Method::Quadrature));
    }
    let m = band.m as f64;
    let c = m / xi;
    let ln_norm = m * m.ln() - lgamma(m);
    let f = |y: f64| -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        let a = c / y;
        let mut s = 0.0;
        for k in 0..band.m {
            s += exp_integral_en_scaled(k + 1, a)?;
        }
        Ok((ln_norm + (m - 1.0) * y.ln() - m * y).exp() * s)
    };
    let r = try_integrate_semi_infinite(f, 0.0, 1.0, &settings())?;
    let v = r.require()?;
    let pf = prefactor(&band);
    Ok(
        MetricResult::new(pf * v, Unit::BitsPerSecond, Method::Quadrature)
            .with_error(pf * r.abs_error),
    )
}

/// Pieces of the high-SNR REIR expansion for m >= 3 with c = m / Ξ_eff.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReirTerms {
    pub c: f64,
    pub i6: f64,
    pub i7: f64,
    /// I5(k) for k = 1..m-1.
    pub i5: Vec<f64>,
}

impl AsymptoticReirTerms {
    pub fn i4(&self) -> f64 {
        self.i6 + self.i7
    }

    pub fn bracket(&self) -> f64 {
        self.i4() + self.i5.iter().sum::<f64>()
    }
}

/// Small-c expansions of ∫_0^∞ y^{m-1} e^{-my} e^{c/y} E_{k+1}(c/y) dy:
/// I4 = I6 + I7 for k = 0 and I5(k) for 1 <= k < m.
pub fn reir_asymptotic_terms(m: u32, c: f64) -> Result<AsymptoticReirTerms> {
    if m < 3 {
        return Err(Error::Contract(format!(
            "the asymptotic REIR expansion needs m >= 3 (got m = {m})"
        )));
    }
    if !(c > 0.0) {
        return Err(domain(
            "reir_asymptotic_terms",
            format!("c = {c} must be positive"),
        ));
    }
    let mf = m as f64;
    let g = |a: f64| lgamma(a).exp();
    let lmc = (mf * c).ln();
    let i6 = c * g(mf - 1.0) / mf.powf(mf - 1.0)
        + g(mf) / mf.powf(mf) * (digamma(mf)? - EULER_GAMMA - lmc);
    let i7 = c
        * (c * g(mf - 2.0) / mf.powf(mf - 2.0)
            + g(mf - 1.0) / mf.powf(mf - 1.0) * (digamma(mf - 1.0)? - EULER_GAMMA - lmc));
    let mut i5 = Vec::with_capacity(m as usize - 1);
    for k in 1..m {
        let kf = k as f64;
        let lead = (-c).powi(k as i32) * g(mf - kf) / (g(kf + 1.0) * mf.powf(mf - kf))
            * (digamma(kf + 1.0)? + digamma(mf - kf)? - lmc);
        let mut rest = 0.0;
        for q in 0..m {
            if q == k {
                continue;
            }
            let qf = q as f64;
            rest += (-c).powi(q as i32) * g(mf - qf) / (g(qf + 1.0) * (qf - kf) * mf.powf(mf - qf));
        }
        i5.push(lead - rest);
    }
    Ok(AsymptoticReirTerms { c, i6, i7, i5 })
}

/// High-SNR ergodic REIR (m >= 3):
/// (δ m^m / (2T ln 2 Γ(m))) [I4 + Σ_{k=1}^{m-1} I5(k)].
/// For m < 3 the expansion is unavailable and the quadrature value of
/// [`reir_general`] is returned, tagged as quadrature.
pub fn reir_asymptotic(cfg: &SystemConfig) -> Result<MetricResult> {
    if cfg.fading.m < 3 {
        return reir_general(cfg);
    }
    if cfg.bandwidth.isac_hz() == 0.0 {
        return Ok(zero(Method::Asymptotic));
    }
    let band = cfg.isac_band()?;
    let xi = xi_eff(&band);
    if xi == 0.0 {
        return Ok(zero(Method::Asymptotic));
    }
    let m = band.m as f64;
    let terms = reir_asymptotic_terms(band.m, m / xi)?;
    let scale = (m * m.ln() - lgamma(m)).exp();
    Ok(MetricResult::new(
        prefactor(&band) * scale * terms.bracket(),
        Unit::BitsPerSecond,
        Method::Asymptotic,
    ))
}

/// Growth of the ergodic REIR per unit ln P_BS at high SNR, δ / (2T ln 2),
/// in bits/s.
pub fn high_snr_slope(radar: &RadarParams) -> Result<MetricResult> {
    if !(radar.duty_cycle > 0.0) || !(radar.pulse_duration > 0.0) {
        return Err(domain(
            "high_snr_slope",
            "duty cycle and pulse duration must be positive",
        ));
    }
    Ok(MetricResult::new(
        radar.duty_cycle / (2.0 * radar.pulse_duration * LN_2),
        Unit::BitsPerSecond,
        Method::Analytic,
    ))
}
