//! System configuration, the resolved per-band link budget, the shorthand
//! constants of the closed forms, and the exact SINR expressions shared by
//! the analytic and Monte Carlo evaluators.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{
    FadingModel, FadingSample, LinkGeometry, RadarParams, FLAT_SPECTRUM_GAMMA_SQ,
};
use crate::error::{Error, Result};

/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Name of the built-in preset that reproduces the numerical-results setup.
pub const DEFAULT_PRESET: &str = "paper-sec6";

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// Split of the total bandwidth B into radar-only (α), ISaC (β) and
/// communication-only (ε) portions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthSplit {
    pub alpha_semi: f64,
    pub beta_semi: f64,
    pub epsilon_semi: f64,
    pub total_hz: f64,
}

impl BandwidthSplit {
    pub const FULL_ISAC: (f64, f64, f64) = (0.0, 1.0, 0.0);

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha_semi", self.alpha_semi),
            ("beta_semi", self.beta_semi),
            ("epsilon_semi", self.epsilon_semi),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} must lie in [0, 1]")));
            }
        }
        let sum = self.alpha_semi + self.beta_semi + self.epsilon_semi;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "bandwidth fractions sum to {sum}, expected 1"
            )));
        }
        if !(self.total_hz > 0.0) || !self.total_hz.is_finite() {
            return Err(Error::Config(format!(
                "B = {} must be positive",
                self.total_hz
            )));
        }
        Ok(())
    }

    pub fn isac_hz(&self) -> f64 {
        self.beta_semi * self.total_hz
    }

    pub fn comm_only_hz(&self) -> f64 {
        self.epsilon_semi * self.total_hz
    }

    pub fn radar_only_hz(&self) -> f64 {
        self.alpha_semi * self.total_hz
    }
}

/// Transmit powers (W), antenna gains and SIC residual factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    pub p_c: f64,
    pub p_r: f64,
    pub p_bs: f64,
    pub g_c: f64,
    pub g_r: f64,
    pub varsigma_c: f64,
    pub varsigma_r: f64,
}

impl PowerConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("P_c", self.p_c),
            ("P_r", self.p_r),
            ("P_BS", self.p_bs),
            ("G_c", self.g_c),
            ("G_r", self.g_r),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} = {v} must be positive")));
            }
        }
        for (name, v) in [
            ("varsigma_c", self.varsigma_c),
            ("varsigma_r", self.varsigma_r),
        ] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} must lie in [0, 1)")));
            }
        }
        Ok(())
    }

    pub fn perfect_sic(&self) -> bool {
        self.varsigma_c == 0.0 && self.varsigma_r == 0.0
    }
}

/// Thermal noise σ² = k_B T_temp × bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub k_b: f64,
    pub temperature_k: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_b > 0.0) || !(self.temperature_k > 0.0) {
            return Err(Error::Config("k_B and T_temp must be positive".into()));
        }
        Ok(())
    }

    pub fn power(&self, bandwidth_hz: f64) -> f64 {
        self.k_b * self.temperature_k * bandwidth_hz
    }
}

/// Decoding thresholds. A target rate R̂ maps to 2^R̂ - 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub gamma_th: f64,
    pub gamma_sic: f64,
    pub gamma_th_oma: f64,
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_th", self.gamma_th),
            ("gamma_sic", self.gamma_sic),
            ("gamma_th_oma", self.gamma_th_oma),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    pub fn from_target_rate(bits: f64) -> f64 {
        2f64.powf(bits) - 1.0
    }
}

/// How NOMA evaluations treat the configured distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    /// Scenario-I uses the shorter distance for the communication
    /// transmitter, Scenario-II for the radar target.
    #[default]
    Auto,
    /// Distances are used exactly as configured.
    AsGiven,
}

/// Complete, validated parameterisation. Powers are held in watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub bandwidth: BandwidthSplit,
    pub power: PowerConfig,
    pub geometry: LinkGeometry,
    pub radar: RadarParams,
    pub noise: NoiseModel,
    pub thresholds: Thresholds,
    pub fading: FadingModel,
    pub pairing: Pairing,
}

/// Network mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "fd-isac")]
    FdIsac,
    #[serde(rename = "oma-semi")]
    OmaSemi,
    #[serde(rename = "noma-semi-i")]
    NomaSemiI,
    #[serde(rename = "noma-semi-ii")]
    NomaSemiII,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::FdIsac,
        Scenario::OmaSemi,
        Scenario::NomaSemiI,
        Scenario::NomaSemiII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::FdIsac => "fd-isac",
            Scenario::OmaSemi => "oma-semi",
            Scenario::NomaSemiI => "noma-semi-i",
            Scenario::NomaSemiII => "noma-semi-ii",
        }
    }

    pub fn is_noma(self) -> bool {
        matches!(self, Scenario::NomaSemiI | Scenario::NomaSemiII)
    }

    /// The user decoded first (pre-SIC) in a NOMA scenario.
    pub fn first_decoded(self) -> Option<User> {
        match self {
            Scenario::NomaSemiI => Some(User::C),
            Scenario::NomaSemiII => Some(User::R),
            _ => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fd-isac" | "fd" => Ok(Scenario::FdIsac),
            "oma-semi" | "oma" => Ok(Scenario::OmaSemi),
            "noma-semi-i" | "noma-i" => Ok(Scenario::NomaSemiI),
            "noma-semi-ii" | "noma-ii" => Ok(Scenario::NomaSemiII),
            _ => Err(Error::Parse(format!("unknown scenario '{s}'"))),
        }
    }
}

/// Uplink user: the communication transmitter (c) or the radar target (r),
/// which also transmits communication data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum User {
    C,
    R,
}

impl User {
    pub fn name(self) -> &'static str {
        match self {
            User::C => "c",
            User::R => "r",
        }
    }

    pub fn other(self) -> User {
        match self {
            User::C => User::R,
            User::R => User::C,
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for User {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c" | "C" => Ok(User::C),
            "r" | "R" => Ok(User::R),
            _ => Err(Error::Parse(format!(
                "unknown user '{s}' (expected c or r)"
            ))),
        }
    }
}

/// Decoding stage within the SIC receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SicStage {
    PreSic,
    PostSic,
}

/// Which portion of the spectrum a [`Band`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandKind {
    /// Shared by communication and the radar echo (βB).
    Isac,
    /// Communication only (εB): no echo.
    CommOnly,
}

/// Everything the evaluators need for one sub-band, with every
/// deterministic factor resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub kind: BandKind,
    pub bandwidth_hz: f64,
    pub m: u32,
    pub p_c: f64,
    pub p_r: f64,
    pub p_bs: f64,
    /// G_c C_c d_c^{-α_c}.
    pub gain_c: f64,
    /// G_c C_c d_r^{-α_c}.
    pub gain_r: f64,
    /// G_r C_r (radar intercept including antenna gain).
    pub echo_intercept: f64,
    pub d_r: f64,
    pub alpha_r: f64,
    /// γ² (bandwidth)² σ_τ²; zero in the communication-only band.
    pub residual: f64,
    pub noise: f64,
    pub varsigma_c: f64,
    pub varsigma_r: f64,
    pub thresholds: Thresholds,
    pub duty_cycle: f64,
    pub pulse_duration: f64,
}

impl Band {
    pub fn power(&self, user: User) -> f64 {
        match user {
            User::C => self.p_c,
            User::R => self.p_r,
        }
    }

    pub fn gain(&self, user: User) -> f64 {
        match user {
            User::C => self.gain_c,
            User::R => self.gain_r,
        }
    }

    pub fn varsigma(&self, user: User) -> f64 {
        match user {
            User::C => self.varsigma_c,
            User::R => self.varsigma_r,
        }
    }

    /// Radar path gain G_r C_r d_r^{-α_r}.
    pub fn radar_gain(&self) -> f64 {
        self.echo_intercept * self.d_r.powf(-self.alpha_r)
    }

    /// Mean residual echo power E[I_R] (W).
    pub fn mean_echo(&self) -> f64 {
        self.p_bs * self.radar_gain() * self.residual
    }

    /// Instantaneous residual echo power P_BS 𝒫_r(d_r)|g_r|².
    pub fn echo_power(&self, f: &FadingSample) -> f64 {
        self.mean_echo() * f.echo_product()
    }

    /// Mean received signal-to-noise ratio of a user, E[P_j 𝒫_c(d_j)|h_j|²]/σ².
    pub fn mean_snr(&self, user: User) -> f64 {
        self.power(user) * self.gain(user) / self.noise
    }

    fn received(&self, user: User, f: &FadingSample) -> f64 {
        match user {
            User::C => self.p_c * self.gain_c * f.h_c,
            User::R => self.p_r * self.gain_r * f.h_r,
        }
    }

    pub fn sinr_oma(&self, user: User, f: &FadingSample) -> f64 {
        self.received(user, f) / (self.echo_power(f) + self.noise)
    }

    pub fn sinr_noma(
        &self,
        scenario: Scenario,
        user: User,
        stage: SicStage,
        f: &FadingSample,
    ) -> Result<f64> {
        let first = scenario
            .first_decoded()
            .ok_or_else(|| Error::Contract(format!("{scenario} is not a NOMA scenario")))?;
        let base = self.echo_power(f) + self.noise;
        match stage {
            SicStage::PreSic if user == first => {
                Ok(self.received(user, f) / (self.received(user.other(), f) + base))
            }
            SicStage::PostSic if user != first => {
                let residual = self.varsigma(first) * self.received(first, f);
                Ok(self.received(user, f) / (residual + base))
            }
            _ => Err(Error::Contract(format!(
                "user {user} is not decoded at stage {stage:?} in {scenario}"
            ))),
        }
    }

    /// Radar echo SNR after both communication signals are removed; the
    /// SIC residuals of both users stay in the denominator.
    pub fn snr_radar_echo(&self, f: &FadingSample) -> Result<f64> {
        if self.kind != BandKind::Isac {
            return Err(Error::Contract(
                "no radar echo in the communication-only band".into(),
            ));
        }
        let residual = self.varsigma_c * self.received(User::C, f)
            + self.varsigma_r * self.received(User::R, f);
        Ok(self.echo_power(f) / (residual + self.noise))
    }

    /// Deterministic echo-SNR prefactor 2 T (bandwidth) P_BS G_r C_r γ² (bandwidth)² σ_τ² / σ²,
    /// excluding fading and the d_r^{-α_r} path-loss factor.
    pub fn xi_r1(&self) -> f64 {
        2.0 * self.pulse_duration
            * self.bandwidth_hz
            * self.p_bs
            * self.echo_intercept
            * self.residual
            / self.noise
    }
}

/// Shorthand constants of the closed-form expressions for one band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub m: u32,
    /// Ω for the communication transmitter.
    pub omega_c: f64,
    /// Ω for the radar target.
    pub omega_r: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    pub lambda5: f64,
    pub xi_r1: f64,
}

impl DerivedConstants {
    pub fn from_band(band: &Band) -> Self {
        let m = band.m as f64;
        let ei = band.mean_echo();
        let s2 = band.noise;
        let (p_c, p_r) = (band.p_c, band.p_r);
        let gs = band.thresholds.gamma_sic;
        let a1 = ei / band.gain_c;
        let a2 = s2 / band.gain_c;
        let a3 = band.gain_r / band.gain_c;
        let a4 = ei / band.gain_r;
        let a5 = s2 / band.gain_r;
        let (b1, b2, b3) = (a4, a5, 1.0 / a3);
        Self {
            m: band.m,
            omega_c: m * (ei + s2) / (p_c * band.gain_c),
            omega_r: m * (ei + s2) / (p_r * band.gain_r),
            a1,
            a2,
            a3,
            a4,
            a5,
            b1,
            b2,
            b3,
            lambda1: m * (a1 + a2) / p_c,
            lambda2: m * (a4 + a5) / p_r * (gs * a3 * p_r / p_c + 1.0),
            lambda3: m * (b1 + b2) / p_r,
            lambda4: m / p_c * (a1 + a2) * (gs * p_c * b3 / p_r + 1.0),
            lambda5: m * gs * (b1 + b2) / p_r,
            xi_r1: if band.kind == BandKind::Isac {
                band.xi_r1()
            } else {
                0.0
            },
        }
    }

    pub fn omega(&self, user: User) -> f64 {
        match user {
            User::C => self.omega_c,
            User::R => self.omega_r,
        }
    }
}

impl SystemConfig {
    /// Built-in presets. `paper-sec6` is the reference setup with perfect
    /// SIC: m = 3, distances 800 m and 1300 m, 10 MHz, powers 20/20/10 dBm
    /// and an echo-prediction variance of 1e-8 s².
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            DEFAULT_PRESET => Ok(Self {
                bandwidth: BandwidthSplit {
                    alpha_semi: 0.0,
                    beta_semi: 0.5,
                    epsilon_semi: 0.5,
                    total_hz: 10e6,
                },
                power: PowerConfig {
                    p_c: dbm_to_watts(20.0),
                    p_r: dbm_to_watts(20.0),
                    p_bs: dbm_to_watts(10.0),
                    g_c: 1.0,
                    g_r: 1.0,
                    varsigma_c: 0.0,
                    varsigma_r: 0.0,
                },
                geometry: LinkGeometry {
                    d_c: 800.0,
                    d_r: 1300.0,
                    alpha_c: 2.5,
                    alpha_r: 4.5,
                    f_c: 1e9,
                },
                radar: RadarParams {
                    duty_cycle: 0.01,
                    pulse_duration: 1e-6,
                    sigma_rcs: 0.1,
                    sigma_tau_sq: 1e-8,
                    gamma_sq: FLAT_SPECTRUM_GAMMA_SQ,
                },
                noise: NoiseModel {
                    k_b: BOLTZMANN,
                    temperature_k: 724.0,
                },
                thresholds: Thresholds {
                    gamma_th: Thresholds::from_target_rate(1.0),
                    gamma_sic: 0.4,
                    gamma_th_oma: Thresholds::from_target_rate(1.0),
                },
                fading: FadingModel { m: 3 },
                pairing: Pairing::Auto,
            }),
            _ => Err(Error::Config(format!("unknown preset '{name}'"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.bandwidth.validate()?;
        self.power.validate()?;
        self.geometry.validate()?;
        self.radar.validate()?;
        self.noise.validate()?;
        self.thresholds.validate()?;
        FadingModel::new(self.fading.m)?;
        Ok(())
    }

    /// Noise power in the ISaC band, k_B T_temp β B.
    pub fn noise_power(&self) -> f64 {
        self.noise.power(self.bandwidth.isac_hz())
    }

    /// The configuration a scenario is evaluated on: full-band ISaC for the
    /// FD benchmark, and distances ordered to the scenario's pairing for
    /// NOMA when pairing is automatic.
    pub fn for_scenario(&self, scenario: Scenario) -> SystemConfig {
        let mut cfg = *self;
        match scenario {
            Scenario::FdIsac => {
                let (a, b, e) = BandwidthSplit::FULL_ISAC;
                cfg.bandwidth.alpha_semi = a;
                cfg.bandwidth.beta_semi = b;
                cfg.bandwidth.epsilon_semi = e;
            }
            Scenario::OmaSemi => {}
            Scenario::NomaSemiI | Scenario::NomaSemiII => {
                if cfg.pairing == Pairing::Auto {
                    let g = cfg.geometry;
                    let comm_near = g.d_c <= g.d_r;
                    if comm_near != (scenario == Scenario::NomaSemiI) && g.d_c != g.d_r {
                        cfg.geometry = g.swapped();
                    }
                }
            }
        }
        cfg
    }

    /// Resolved link budget of one sub-band.
    pub fn band(&self, kind: BandKind) -> Result<Band> {
        let (bw, residual) = match kind {
            BandKind::Isac => {
                let bw = self.bandwidth.isac_hz();
                if !(bw > 0.0) {
                    return Err(Error::Config(
                        "the ISaC band is empty (beta_semi = 0)".into(),
                    ));
                }
                (bw, self.radar.gamma_sq * bw * bw * self.radar.sigma_tau_sq)
            }
            BandKind::CommOnly => {
                let bw = self.bandwidth.comm_only_hz();
                if !(bw > 0.0) {
                    return Err(Error::Config(
                        "the communication-only band is empty (epsilon_semi = 0)".into(),
                    ));
                }
                (bw, 0.0)
            }
        };
        let g = &self.geometry;
        let c_c = g.comm_intercept();
        Ok(Band {
            kind,
            bandwidth_hz: bw,
            m: self.fading.m,
            p_c: self.power.p_c,
            p_r: self.power.p_r,
            p_bs: self.power.p_bs,
            gain_c: self.power.g_c * c_c * g.d_c.powf(-g.alpha_c),
            gain_r: self.power.g_c * c_c * g.d_r.powf(-g.alpha_c),
            echo_intercept: self.power.g_r * self.radar.intercept(g),
            d_r: g.d_r,
            alpha_r: g.alpha_r,
            residual,
            noise: self.noise.power(bw),
            varsigma_c: self.power.varsigma_c,
            varsigma_r: self.power.varsigma_r,
            thresholds: self.thresholds,
            duty_cycle: self.radar.duty_cycle,
            pulse_duration: self.radar.pulse_duration,
        })
    }

    pub fn isac_band(&self) -> Result<Band> {
        self.band(BandKind::Isac)
    }

    /// Parses a TOML or JSON configuration. Fields not given are taken from
    /// the preset named by `preset` (default `paper-sec6`).
    pub fn from_str_with_format(text: &str, format: ConfigFormat) -> Result<Self> {
        Self::from_value(parse_document(text, format)?)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_str_with_format(text, ConfigFormat::Toml)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_str_with_format(text, ConfigFormat::Json)
    }

    /// Reads a configuration file; `.json` files are JSON, everything else TOML.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_with_format(&text, ConfigFormat::from_path(path))
    }

    /// Overlays a (possibly partial) file-form document on its base preset.
    pub fn from_value(user: Value) -> Result<Self> {
        let preset = match user.get("preset") {
            None => DEFAULT_PRESET.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(other) => {
                return Err(Error::Parse(format!(
                    "preset must be a string, got {other}"
                )))
            }
        };
        let mut base = serde_json::to_value(ConfigFile::from(&Self::preset(&preset)?))
            .map_err(|e| Error::Parse(e.to_string()))?;
        merge(&mut base, user);
        let file: ConfigFile =
            serde_json::from_value(base).map_err(|e| Error::Parse(e.to_string()))?;
        let cfg = SystemConfig::from(&file);
        cfg.validate()?;
        Ok(cfg)
    }

    /// File-form document of this configuration (powers in dBm).
    pub fn to_value(&self) -> Value {
        serde_json::to_value(ConfigFile::from(self)).expect("config serialises to JSON")
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(&ConfigFile::from(self)).expect("config serialises to TOML")
    }
}

/// Parses TOML or JSON text into a JSON document tree.
pub(crate) fn parse_document(text: &str, format: ConfigFormat) -> Result<Value> {
    match format {
        ConfigFormat::Toml => {
            let t: toml::Value = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            serde_json::to_value(t).map_err(|e| Error::Parse(e.to_string()))
        }
        ConfigFormat::Json => serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string())),
    }
}

/// Deep merge of JSON objects: `patch` entries replace or extend `base`.
pub(crate) fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Structured-text encoding of a configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigFormat {
    Toml,
    Json,
}

impl ConfigFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ConfigFormat::Json,
            _ => ConfigFormat::Toml,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    pairing: Pairing,
    bandwidth: BandwidthFile,
    powers: PowersFile,
    geometry: LinkGeometry,
    radar: RadarParams,
    noise: NoiseFile,
    thresholds: ThresholdsFile,
    fading: FadingModel,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BandwidthFile {
    alpha_semi: f64,
    beta_semi: f64,
    epsilon_semi: f64,
    #[serde(rename = "B_hz")]
    total_hz: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PowersFile {
    #[serde(rename = "P_c_dBm")]
    p_c_dbm: f64,
    #[serde(rename = "P_r_dBm")]
    p_r_dbm: f64,
    #[serde(rename = "P_BS_dBm")]
    p_bs_dbm: f64,
    #[serde(rename = "G_c")]
    g_c: f64,
    #[serde(rename = "G_r")]
    g_r: f64,
    varsigma_c: f64,
    varsigma_r: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseFile {
    #[serde(rename = "k_B")]
    k_b: f64,
    #[serde(rename = "T_temp")]
    temperature_k: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdsFile {
    gamma_th: f64,
    gamma_sic: f64,
    gamma_th_oma: f64,
}

impl From<&SystemConfig> for ConfigFile {
    fn from(c: &SystemConfig) -> Self {
        Self {
            preset: None,
            pairing: c.pairing,
            bandwidth: BandwidthFile {
                alpha_semi: c.bandwidth.alpha_semi,
                beta_semi: c.bandwidth.beta_semi,
                epsilon_semi: c.bandwidth.epsilon_semi,
                total_hz: c.bandwidth.total_hz,
            },
            powers: PowersFile {
                p_c_dbm: watts_to_dbm(c.power.p_c),
                p_r_dbm: watts_to_dbm(c.power.p_r),
                p_bs_dbm: watts_to_dbm(c.power.p_bs),
                g_c: c.power.g_c,
                g_r: c.power.g_r,
                varsigma_c: c.power.varsigma_c,
                varsigma_r: c.power.varsigma_r,
            },
            geometry: c.geometry,
            radar: c.radar,
            noise: NoiseFile {
                k_b: c.noise.k_b,
                temperature_k: c.noise.temperature_k,
            },
            thresholds: ThresholdsFile {
                gamma_th: c.thresholds.gamma_th,
                gamma_sic: c.thresholds.gamma_sic,
                gamma_th_oma: c.thresholds.gamma_th_oma,
            },
            fading: c.fading,
        }
    }
}

impl From<&ConfigFile> for SystemConfig {
    fn from(f: &ConfigFile) -> Self {
        Self {
            bandwidth: BandwidthSplit {
                alpha_semi: f.bandwidth.alpha_semi,
                beta_semi: f.bandwidth.beta_semi,
                epsilon_semi: f.bandwidth.epsilon_semi,
                total_hz: f.bandwidth.total_hz,
            },
            power: PowerConfig {
                p_c: dbm_to_watts(f.powers.p_c_dbm),
                p_r: dbm_to_watts(f.powers.p_r_dbm),
                p_bs: dbm_to_watts(f.powers.p_bs_dbm),
                g_c: f.powers.g_c,
                g_r: f.powers.g_r,
                varsigma_c: f.powers.varsigma_c,
                varsigma_r: f.powers.varsigma_r,
            },
            geometry: f.geometry,
            radar: f.radar,
            noise: NoiseModel {
                k_b: f.noise.k_b,
                temperature_k: f.noise.temperature_k,
            },
            thresholds: Thresholds {
                gamma_th: f.thresholds.gamma_th,
                gamma_sic: f.thresholds.gamma_sic,
                gamma_th_oma: f.thresholds.gamma_th_oma,
            },
            fading: f.fading,
            pairing: f.pairing,
        }
    }
}

/// Shorthand constants (a, b, λ, Ω, ξ) of the configuration's ISaC band.
pub fn derive_constants(cfg: &SystemConfig) -> Result<DerivedConstants> {
    Ok(DerivedConstants::from_band(&cfg.isac_band()?))
}

/// OMA sub-channel SINR of `user` in the ISaC band.
pub fn sinr_oma(cfg: &SystemConfig, user: User, fading: &FadingSample) -> Result<f64> {
    Ok(cfg.isac_band()?.sinr_oma(user, fading))
}

/// NOMA SINR of `user` at the given SIC stage in the ISaC band.
pub fn sinr_noma(
    cfg: &SystemConfig,
    scenario: Scenario,
    user: User,
    stage: SicStage,
    fading: &FadingSample,
) -> Result<f64> {
    cfg.isac_band()?.sinr_noma(scenario, user, stage, fading)
}

/// Radar echo SNR in the ISaC band.
pub fn snr_radar_echo(cfg: &SystemConfig, fading: &FadingSample) -> Result<f64> {
    cfg.isac_band()?.snr_radar_echo(fading)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset() -> SystemConfig {
        SystemConfig::preset(DEFAULT_PRESET).unwrap()
    }

    #[test]
    fn preset_is_valid_and_a3_matches_distance_ratio() {
        let cfg = preset();
        cfg.validate().unwrap();
        let k = derive_constants(&cfg).unwrap();
        assert!((k.a3 - (800f64 / 1300.0).powf(2.5)).abs() < 1e-14);
        assert!((k.a3 * k.b3 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_distances_give_unit_ratio() {
        let mut cfg = preset();
        cfg.geometry.d_r = cfg.geometry.d_c;
        let k = derive_constants(&cfg).unwrap();
        assert!((k.a3 - 1.0).abs() < 1e-15 && (k.b3 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constants_do_not_depend_on_sic_residuals() {
        let cfg = preset();
        let mut imperfect = cfg;
        imperfect.power.varsigma_c = 0.2;
        imperfect.power.varsigma_r = 0.3;
        assert_eq!(
            derive_constants(&cfg).unwrap(),
            derive_constants(&imperfect).unwrap()
        );
    }

    #[test]
    fn bandwidth_must_sum_to_one() {
        let mut cfg = preset();
        cfg.bandwidth.epsilon_semi = 0.6;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn invalid_noma_stage_is_a_contract_error() {
        let cfg = preset();
        let f = FadingSample::UNIT;
        assert!(matches!(
            sinr_noma(&cfg, Scenario::NomaSemiI, User::R, SicStage::PreSic, &f),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            sinr_noma(&cfg, Scenario::OmaSemi, User::C, SicStage::PreSic, &f),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn toml_overlay_and_roundtrip() {
        let cfg =
            SystemConfig::from_toml_str("[powers]\nP_c_dBm = 30.0\n[fading]\nm = 2\n").unwrap();
        assert!((cfg.power.p_c - 1.0).abs() < 1e-15);
        assert_eq!(cfg.fading.m, 2);
        assert_eq!(cfg.geometry, preset().geometry);
        let back = SystemConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert!((back.power.p_c - cfg.power.p_c).abs() < 1e-15);
        assert!(SystemConfig::from_toml_str("[powers]\nP_x_dBm = 1.0\n").is_err());
        assert!(SystemConfig::from_toml_str("preset = \"nope\"\n").is_err());
    }

    #[test]
    fn auto_pairing_orders_distances() {
        let cfg = preset();
        let ii = cfg.for_scenario(Scenario::NomaSemiII);
        assert_eq!((ii.geometry.d_c, ii.geometry.d_r), (1300.0, 800.0));
        let i = ii.for_scenario(Scenario::NomaSemiI);
        assert_eq!((i.geometry.d_c, i.geometry.d_r), (800.0, 1300.0));
        let mut fixed = cfg;
        fixed.pairing = Pairing::AsGiven;
        assert_eq!(
            fixed.for_scenario(Scenario::NomaSemiII).geometry,
            cfg.geometry
        );
        let fd = cfg.for_scenario(Scenario::FdIsac);
        assert_eq!(fd.bandwidth.beta_semi, 1.0);
    }
}
