//! Path loss, Nakagami-m power gains and the radar-echo product channel.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scenario::SystemConfig;
use crate::specfun;

/// Propagation speed used for wavelength and intercept computations (m/s).
pub const SPEED_OF_LIGHT: f64 = 3e8;

/// Default residual-echo spectral factor for a flat spectrum, (2π)²/12.
pub const FLAT_SPECTRUM_GAMMA_SQ: f64 = (2.0 * PI) * (2.0 * PI) / 12.0;

/// Nakagami-m fading with unit mean power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FadingModel {
    pub m: u32,
}

impl FadingModel {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config(
                "Nakagami parameter m must be a positive integer".into(),
            ));
        }
        Ok(Self { m })
    }
}

/// Distances (m), path-loss exponents and carrier frequency (Hz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub d_c: f64,
    pub d_r: f64,
    pub alpha_c: f64,
    pub alpha_r: f64,
    pub f_c: f64,
}

impl LinkGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, d) in [("d_c", self.d_c), ("d_r", self.d_r)] {
            if !(d >= 1.0) || !d.is_finite() {
                return Err(Error::Config(format!("{name} = {d} must be at least 1 m")));
            }
        }
        for (name, a) in [("alpha_c", self.alpha_c), ("alpha_r", self.alpha_r)] {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::Config(format!("{name} = {a} must be positive")));
            }
        }
        if !(self.f_c > 0.0) || !self.f_c.is_finite() {
            return Err(Error::Config(format!(
                "f_c = {} must be positive",
                self.f_c
            )));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.f_c
    }

    /// Communication intercept C_c = (c / (4π f_c))².
    pub fn comm_intercept(&self) -> f64 {
        let v = SPEED_OF_LIGHT / (4.0 * PI * self.f_c);
        v * v
    }

    /// The same geometry with the two distances exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            d_c: self.d_r,
            d_r: self.d_c,
            ..*self
        }
    }
}

/// Pulse radar parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarParams {
    /// Duty cycle δ in (0, 1].
    pub duty_cycle: f64,
    /// Pulse duration T (s).
    pub pulse_duration: f64,
    /// Radar cross section σ_RCS (m²).
    pub sigma_rcs: f64,
    /// Variance of the echo time-delay prediction error σ_τ² (s²).
    pub sigma_tau_sq: f64,
    /// Spectral shape factor γ².
    pub gamma_sq: f64,
}

impl RadarParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.duty_cycle > 0.0 && self.duty_cycle <= 1.0) {
            return Err(Error::Config(format!(
                "duty cycle {} must lie in (0, 1]",
                self.duty_cycle
            )));
        }
        for (name, v) in [
            ("pulse_duration", self.pulse_duration),
            ("sigma_rcs", self.sigma_rcs),
            ("gamma_sq", self.gamma_sq),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} = {v} must be positive")));
            }
        }
        // zero is accepted: it switches the residual echo off
        if !(self.sigma_tau_sq >= 0.0) || !self.sigma_tau_sq.is_finite() {
            return Err(Error::Config(format!(
                "sigma_tau_sq = {} must be non-negative",
                self.sigma_tau_sq
            )));
        }
        Ok(())
    }

    /// Radar intercept C_r = σ_RCS λ² / (4π)³.
    pub fn intercept(&self, geom: &LinkGeometry) -> f64 {
        let lambda = geom.wavelength();
        self.sigma_rcs * lambda * lambda / (4.0 * PI).powi(3)
    }
}

fn check_distance(func: &'static str, d: f64) -> Result<()> {
    if !(d >= 1.0) || !d.is_finite() {
        return Err(domain(
            func,
            format!("distance {d} must be at least the 1 m reference"),
        ));
    }
    Ok(())
}

/// Communication path gain C_c d^{-α_c}.
pub fn pathloss_comm(geom: &LinkGeometry, d: f64) -> Result<f64> {
    check_distance("pathloss_comm", d)?;
    Ok(geom.comm_intercept() * d.powf(-geom.alpha_c))
}

/// Two-way radar path gain C_r d^{-α_r}.
pub fn pathloss_radar(geom: &LinkGeometry, radar: &RadarParams, d: f64) -> Result<f64> {
    check_distance("pathloss_radar", d)?;
    Ok(radar.intercept(geom) * d.powf(-geom.alpha_r))
}

/// Mean residual radar-echo power E[I_R] = P_BS 𝒫_r(d_r) γ² β² B² σ_τ² in the
/// ISaC band (W). The radar antenna gain G_r multiplies the result.
pub fn mean_radar_interference(cfg: &SystemConfig) -> f64 {
    let bw = cfg.bandwidth.isac_hz();
    cfg.power.p_bs
        * cfg.power.g_r
        * cfg.radar.intercept(&cfg.geometry)
        * cfg.geometry.d_r.powf(-cfg.geometry.alpha_r)
        * cfg.radar.gamma_sq
        * bw
        * bw
        * cfg.radar.sigma_tau_sq
}

/// Density of |h_rd|²|h_ru|², 2 m^{2m}/Γ(m)² z^{m-1} K0(2m√z), for z > 0.
pub fn product_channel_pdf(m: u32, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(
            "product_channel_pdf",
            format!("z = {z} must be positive"),
        ));
    }
    if m == 0 {
        return Err(domain(
            "product_channel_pdf",
            "m must be a positive integer",
        ));
    }
    specfun::product_gamma_pdf(m as f64, z)
}

/// CDF of |h_rd|²|h_ru|².
pub fn product_channel_cdf(m: u32, x: f64) -> Result<f64> {
    if m == 0 {
        return Err(domain(
            "product_channel_cdf",
            "m must be a positive integer",
        ));
    }
    specfun::meijer_cdf_product_gamma(m as f64, x)
}

/// Gamma(m, 1/m) sampler for unit-mean Nakagami-m power gains.
#[derive(Debug, Clone, Copy)]
pub struct NakagamiPower {
    dist: Gamma<f64>,
}

impl NakagamiPower {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(domain("NakagamiPower::new", "m must be a positive integer"));
        }
        let m = m as f64;
        let dist =
            Gamma::new(m, 1.0 / m).map_err(|e| domain("NakagamiPower::new", e.to_string()))?;
        Ok(Self { dist })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.dist.sample(rng)
    }
}

/// One unit-mean Nakagami-m power draw.
pub fn sample_nakagami_power<R: Rng + ?Sized>(m: u32, rng: &mut R) -> Result<f64> {
    Ok(NakagamiPower::new(m)?.sample(rng))
}

/// Power gains of one channel realisation: the two uplink communication
/// links and the two legs of the radar echo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSample {
    pub h_c: f64,
    pub h_r: f64,
    pub h_rd: f64,
    pub h_ru: f64,
}

impl FadingSample {
    /// All gains equal to one (the mean channel).
    pub const UNIT: Self = Self {
        h_c: 1.0,
        h_r: 1.0,
        h_rd: 1.0,
        h_ru: 1.0,
    };

    pub fn draw<R: Rng + ?Sized>(sampler: &NakagamiPower, rng: &mut R) -> Self {
        Self {
            h_c: sampler.sample(rng),
            h_r: sampler.sample(rng),
            h_rd: sampler.sample(rng),
            h_ru: sampler.sample(rng),
        }
    }

    pub fn echo_product(&self) -> f64 {
        self.h_rd * self.h_ru
    }
}
