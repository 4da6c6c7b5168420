//! Independent reference computations shared by the integration tests.
//! Gamma(m, 1/m) densities are written out for integer m so the oracles do
//! not route through the library's incomplete-gamma code.
#![allow(dead_code)]

use semiisac::scenario::{dbm_to_watts, Band, Scenario, SystemConfig, User, DEFAULT_PRESET};
use semiisac::specfun::{integrate, integrate_semi_infinite, QuadratureSettings};

pub fn preset() -> SystemConfig {
    SystemConfig::preset(DEFAULT_PRESET).expect("preset exists")
}

fn ln_fact(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Density of a unit-mean Gamma(m, 1/m) power gain.
pub fn gamma_pdf(m: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return if m == 1 { 1.0 } else { 0.0 };
    }
    let mf = m as f64;
    (mf * mf.ln() + (mf - 1.0) * x.ln() - mf * x - ln_fact(m - 1)).exp()
}

/// Pr{h >= x} for a unit-mean Gamma(m, 1/m) gain, by the Erlang sum.
pub fn gamma_sf(m: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let z = m as f64 * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..m {
        term *= z / k as f64;
        sum += term;
    }
    (-z).exp() * sum
}

/// Pr{h < x}; below the mean the positive Poisson tail sum is used so that
/// tiny probabilities keep their relative accuracy.
pub fn gamma_cdf(m: u32, x: f64) -> f64 {
    let z = m as f64 * x;
    if x <= 0.0 {
        return 0.0;
    }
    if z >= m as f64 {
        return 1.0 - gamma_sf(m, x);
    }
    let mut term = (-z).exp();
    for k in 1..=m {
        term *= z / k as f64;
    }
    let mut sum = 0.0;
    let mut k = m;
    while term > 1e-18 * sum || sum == 0.0 {
        sum += term;
        k += 1;
        term *= z / k as f64;
        if term == 0.0 {
            break;
        }
    }
    sum
}

pub fn tight() -> QuadratureSettings {
    QuadratureSettings::default()
        .with_rel_tol(1e-11)
        .with_abs_tol(1e-15)
}

/// E[f(h) 1{h >= lo}] for h ~ Gamma(m, 1/m).
pub fn expect_gamma<F: Fn(f64) -> f64>(m: u32, lo: f64, f: F) -> f64 {
    let s = tight();
    let g = |x: f64| gamma_pdf(m, x) * f(x);
    let split = lo.max(1.0);
    let head = if lo < split {
        integrate(g, lo, split, &s).unwrap().value
    } else {
        0.0
    };
    head + integrate_semi_infinite(g, split, 1.0, &s).unwrap().value
}

/// (P_first, gain_first, P_second, gain_second, echo + noise) of a NOMA band.
pub fn noma_budget(band: &Band, scenario: Scenario) -> (f64, f64, f64, f64, f64) {
    let first = scenario.first_decoded().expect("NOMA scenario");
    let second = first.other();
    (
        band.power(first),
        band.gain(first),
        band.power(second),
        band.gain(second),
        band.mean_echo() + band.noise,
    )
}

/// Outage of a NOMA user straight from the SINR definitions, integrating
/// the conditional Gamma cdf of the first user's gain over the second's.
pub fn noma_op_oracle(
    band: &Band,
    scenario: Scenario,
    user: User,
    gamma_th: f64,
    gamma_sic: f64,
) -> f64 {
    let m = band.m;
    let (p1, g1, p2, g2, floor) = noma_budget(band, scenario);
    let need = |g: f64, y: f64| g * (p2 * g2 * y + floor) / (p1 * g1);
    if Some(user) == scenario.first_decoded() {
        expect_gamma(m, 0.0, |y| gamma_cdf(m, need(gamma_th, y)))
    } else {
        let y0 = gamma_th * floor / (p2 * g2);
        1.0 - expect_gamma(m, y0, |y| gamma_sf(m, need(gamma_sic, y)))
    }
}

/// Ergodic rate of a NOMA user as E[log2(1 + SINR)]; the second user earns
/// rate only when SIC succeeds.
pub fn noma_rate_oracle(band: &Band, scenario: Scenario, user: User) -> f64 {
    let m = band.m;
    let (p1, g1, p2, g2, floor) = noma_budget(band, scenario);
    if Some(user) == scenario.first_decoded() {
        expect_gamma(m, 0.0, |y| {
            let c = p1 * g1 / (p2 * g2 * y + floor);
            expect_gamma(m, 0.0, |x| (c * x).ln_1p()) / std::f64::consts::LN_2
        })
    } else {
        let gs = band.thresholds.gamma_sic;
        expect_gamma(m, 0.0, |y| {
            let sic = gamma_sf(m, gs * (p2 * g2 * y + floor) / (p1 * g1));
            sic * (p2 * g2 * y / floor).ln_1p() / std::f64::consts::LN_2
        })
    }
}

/// Effective mean echo SNR Ξ_eff of the ISaC band.
pub fn xi_eff(band: &Band) -> f64 {
    band.xi_r1() * band.d_r.powf(-band.alpha_r)
}

/// Preset with P_BS chosen so the ISaC band has the requested Ξ_eff.
pub fn preset_with_xi(target: f64) -> SystemConfig {
    let mut cfg = preset();
    let xi = xi_eff(&cfg.isac_band().unwrap());
    cfg.power.p_bs *= target / xi;
    cfg
}

pub fn with_power_dbm(mut cfg: SystemConfig, user: User, dbm: f64) -> SystemConfig {
    match user {
        User::C => cfg.power.p_c = dbm_to_watts(dbm),
        User::R => cfg.power.p_r = dbm_to_watts(dbm),
    }
    cfg
}

/// Least-squares slope of y against x.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
