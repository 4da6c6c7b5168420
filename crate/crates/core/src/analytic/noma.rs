//! Two-user uplink NOMA in the ISaC band with perfect SIC.
//!
//! Both scenarios reduce to one structure. The user decoded first has
//! normalised SINR s·x / (a·y + k), where x and y are the two unit-mean
//! Gamma(m, 1/m) power gains, s its transmit power, a the other user's
//! power scaled by the gain ratio and k = (E[I_R] + σ²) / gain. The second
//! user is decoded only after the first passes γ_SIC, and then sees
//! echo plus noise only.

use std::f64::consts::LN_2;

use super::{pow_ln, Method, MetricResult, Unit};
use crate::error::{domain, Error, Result};
use crate::scenario::{Band, Scenario, SystemConfig, User};
use crate::specfun::{
    binomial, exp_integral_en_scaled, lgamma, ln_upper_gamma, reg_lower_gamma, try_integrate,
    try_integrate_semi_infinite, QuadratureSettings,
};

/// Success probability of the decoding chain threshold search stops below this.
const RATE_TAIL: f64 = 1e-10;
const MAX_SERIES_TERMS: u32 = 200;
/// Outage below which the positive tail series replaces 1 - success.
const TAIL_SWITCH: f64 = 1e-3;
const MAX_TAIL_BLOCKS: u32 = 2000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct NomaPair {
    pub m: u32,
    pub first: User,
    /// Transmit power of the first-decoded user.
    pub s: f64,
    /// Power of the second user times gain_second / gain_first.
    pub a: f64,
    /// (E[I_R] + σ²) / gain_first.
    pub k: f64,
    /// (E[I_R] + σ²) / (gain_second · P_second).
    pub y_scale: f64,
}

impl NomaPair {
    pub fn new(band: &Band, scenario: Scenario) -> Result<Self> {
        let first = scenario
            .first_decoded()
            .ok_or_else(|| Error::Contract(format!("{scenario} is not a NOMA scenario")))?;
        let second = first.other();
        let floor = band.mean_echo() + band.noise;
        Ok(Self {
            m: band.m,
            first,
            s: band.power(first),
            a: band.power(second) * band.gain(second) / band.gain(first),
            k: floor / band.gain(first),
            y_scale: floor / (band.gain(second) * band.power(second)),
        })
    }

    /// Sum over r <= p of E[1{y >= y0} e^{-z} z^p / p!] with
    /// z = m g (a y + k) / s, the p-th Poisson block of the success series.
    fn block(&self, p: u32, g: f64, y0: f64) -> Result<f64> {
        let m = self.m as f64;
        let ratio = g * self.a / self.s;
        let shift = m * y0 * (1.0 + ratio);
        let pf = p as f64;
        let head =
            pow_ln(pf, m * g / self.s) - lgamma(pf + 1.0) - m * g * self.k / self.s - lgamma(m);
        let mut total = 0.0;
        for r in 0..=p {
            let rf = r as f64;
            let ln_t = head
                + binomial(p, r).ln()
                + pow_ln(pf - rf, self.k)
                + pow_ln(rf, self.a)
                + ln_upper_gamma(m + rf, shift)?
                - rf * m.ln()
                - (m + rf) * ratio.ln_1p();
            total += ln_t.exp();
        }
        Ok(total)
    }

    /// Pr{s x >= g (a y + k), y >= y0} as a finite double sum.
    pub fn success(&self, g: f64, y0: f64) -> Result<f64> {
        let mut total = 0.0;
        for p in 0..self.m {
            total += self.block(p, g, y0)?;
        }
        Ok(total)
    }

    /// 1 - success(g, y0). Small values are summed from the positive
    /// remainder of the Poisson series, Pr{y < y0} + Σ_{p >= m} block(p),
    /// which avoids the cancellation in the subtraction.
    pub fn failure(&self, g: f64, y0: f64) -> Result<f64> {
        let direct = 1.0 - self.success(g, y0)?;
        if direct > TAIL_SWITCH {
            return Ok(direct);
        }
        let m = self.m as f64;
        let mut total = if y0 > 0.0 {
            reg_lower_gamma(m, m * y0)?
        } else {
            0.0
        };
        for p in self.m..self.m + MAX_TAIL_BLOCKS {
            let b = self.block(p, g, y0)?;
            total += b;
            if b <= 1e-17 * total || total == 0.0 {
                return Ok(total);
            }
        }
        Ok(direct)
    }

    /// Probability that `user` decodes at rate threshold `gamma_th`.
    pub fn user_success(&self, user: User, gamma_th: f64, gamma_sic: f64) -> Result<f64> {
        if user == self.first {
            self.success(gamma_th, 0.0)
        } else {
            self.success(gamma_sic, gamma_th * self.y_scale)
        }
    }

    /// Outage probability of `user`, accurate also deep in the tail.
    pub fn user_failure(&self, user: User, gamma_th: f64, gamma_sic: f64) -> Result<f64> {
        if user == self.first {
            self.failure(gamma_th, 0.0)
        } else {
            self.failure(gamma_sic, gamma_th * self.y_scale)
        }
    }
}

fn check_thresholds(gamma_th: f64, gamma_sic: f64) -> Result<()> {
    if !(gamma_th >= 0.0) || !(gamma_sic > 0.0) {
        return Err(domain(
            "op_noma",
            format!("thresholds gamma_th = {gamma_th}, gamma_sic = {gamma_sic} out of range"),
        ));
    }
    Ok(())
}

/// NOMA outage probability of `user` for an already resolved band.
pub fn op_noma_band(
    band: &Band,
    scenario: Scenario,
    user: User,
    gamma_th: f64,
    gamma_sic: f64,
) -> Result<MetricResult> {
    check_thresholds(gamma_th, gamma_sic)?;
    let pair = NomaPair::new(band, scenario)?;
    Ok(MetricResult::probability(
        pair.user_failure(user, gamma_th, gamma_sic)?,
        Method::Analytic,
    ))
}

/// NOMA outage probability with perfect SIC. The configuration's distances
/// are paired to the scenario first (see [`SystemConfig::for_scenario`]).
pub fn op_noma(
    cfg: &SystemConfig,
    scenario: Scenario,
    user: User,
    gamma_th: f64,
    gamma_sic: f64,
) -> Result<MetricResult> {
    op_noma_band(
        &cfg.for_scenario(scenario).isac_band()?,
        scenario,
        user,
        gamma_th,
        gamma_sic,
    )
}

/// Ergodic rate (1/ln 2) ∫_0^∞ (1 - OP(γ)) / (1 + γ) dγ with the outage
/// expression of [`op_noma_band`] as integrand. For the user decoded second
/// this counts rate only when SIC succeeds.
pub fn rate_noma_band(band: &Band, scenario: Scenario, user: User) -> Result<MetricResult> {
    let pair = NomaPair::new(band, scenario)?;
    let gs = band.thresholds.gamma_sic;
    let f = |g: f64| -> Result<f64> { Ok(pair.user_success(user, g, gs)? / (1.0 + g)) };

    let mut upper = 1e-12;
    while pair.user_success(user, upper, gs)? >= RATE_TAIL {
        upper *= 2.0;
        if upper > 1e16 {
            return Err(domain(
                "rate_noma",
                "success probability does not decay; the rate integral diverges",
            ));
        }
    }
    let settings = QuadratureSettings::default()
        .with_rel_tol(1e-11)
        .with_abs_tol(1e-14);
    // decade breakpoints from well below the decay point (or from 1, where
    // 1/(1+γ) bends) up to the search bound
    let mut edges = vec![0.0];
    let mut e = (upper * 1e-3).min(1.0);
    while e < upper {
        edges.push(e);
        e *= 10.0;
    }
    edges.push(upper);
    let (mut value, mut err) = (0.0, 0.0);
    for w in edges.windows(2) {
        let r = try_integrate(f, w[0], w[1], &settings)?;
        value += r.value;
        err += r.abs_error;
        if !r.converged {
            return Err(Error::Quadrature {
                estimate: value,
                abs_error: err,
            });
        }
    }
    let tail = try_integrate_semi_infinite(f, upper, upper, &settings)?;
    value += tail.value;
    err += tail.abs_error;
    Ok(
        MetricResult::new(value / LN_2, Unit::BitsPerSecondPerHz, Method::Quadrature)
            .with_error(err / LN_2),
    )
}

pub fn rate_noma(cfg: &SystemConfig, scenario: Scenario, user: User) -> Result<MetricResult> {
    rate_noma_band(&cfg.for_scenario(scenario).isac_band()?, scenario, user)
}

/// Finite closed form of the ergodic rate of the user decoded second:
/// (1/ln 2) Σ_p Σ_r c_pr (m+r-1)! Σ_{k<m+r} e^Λ E_{k+1}(Λ).
pub fn rate_noma_closed_form(band: &Band, scenario: Scenario, user: User) -> Result<MetricResult> {
    let pair = NomaPair::new(band, scenario)?;
    if user == pair.first {
        return Err(Error::Contract(format!(
            "no finite closed form for the first-decoded user {user} in {scenario}"
        )));
    }
    let m = pair.m as f64;
    let gs = band.thresholds.gamma_sic;
    let ratio = gs * pair.a / pair.s;
    let lambda = m * pair.y_scale * (1.0 + ratio);
    let mut tail_sums = Vec::with_capacity(2 * pair.m as usize);
    let mut acc = 0.0;
    for n in 1..2 * pair.m {
        acc += exp_integral_en_scaled(n, lambda)?;
        tail_sums.push(acc);
    }
    let base = -m * gs * pair.k / pair.s - lgamma(m);
    let mut total = 0.0;
    for p in 0..pair.m {
        let pf = p as f64;
        for r in 0..=p {
            let rf = r as f64;
            let ln_c = pow_ln(pf, m * gs / pair.s) - lgamma(pf + 1.0)
                + base
                + binomial(p, r).ln()
                + pow_ln(pf - rf, pair.k)
                + pow_ln(rf, pair.a)
                - rf * m.ln()
                - (m + rf) * ratio.ln_1p()
                + lgamma(m + rf);
            total += ln_c.exp() * tail_sums[(pair.m + r - 1) as usize];
        }
    }
    Ok(MetricResult::new(
        total / LN_2,
        Unit::BitsPerSecondPerHz,
        Method::Analytic,
    ))
}

/// Outcome of the binomial-series form of the first-decoded user's rate.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesOutcome {
    Converged(MetricResult),
    /// The series was not summed because its terms stop shrinking.
    Skipped {
        reason: String,
    },
}

/// Series form of the first-decoded user's ergodic rate, obtained by
/// expanding (1 + γ a/s)^{-(m+r)} binomially and integrating term by term.
///
/// The k-th term grows like k! (a / (s Λ))^k with Λ = m k / s, so the series
/// is asymptotic rather than convergent: it is summed only while its terms
/// fall below 1e-12 of the partial sum within 200 terms, and skipped
/// otherwise.
pub fn rate_noma_series(band: &Band, scenario: Scenario, user: User) -> Result<SeriesOutcome> {
    let pair = NomaPair::new(band, scenario)?;
    if user != pair.first {
        return Err(Error::Contract(format!(
            "the series form applies to the first-decoded user of {scenario}"
        )));
    }
    let m = pair.m as f64;
    let lambda = m * pair.k / pair.s;
    let q = pair.a / pair.s;
    let mut total = 0.0;
    let mut worst_tail: f64 = 0.0;
    for p in 0..pair.m {
        let pf = p as f64;
        for r in 0..=p {
            let rf = r as f64;
            let n = pair.m + r;
            let ln_t = pow_ln(pf, m / pair.s) - lgamma(pf + 1.0)
                + binomial(p, r).ln()
                + pow_ln(pf - rf, pair.k)
                + pow_ln(rf, pair.a)
                + lgamma(m + rf)
                - lgamma(m)
                - rf * m.ln();
            let mut inner = 0.0;
            let mut prev = f64::INFINITY;
            let mut converged = false;
            for k in 0..=MAX_SERIES_TERMS {
                let kf = k as f64;
                let ln_mag = (lgamma(n as f64 + kf) - lgamma(kf + 1.0) - lgamma(n as f64))
                    + pow_ln(kf, q)
                    + exp_integral_en_scaled(p + k + 1, lambda)?.ln()
                    + lgamma(pf + kf + 1.0)
                    - (pf + kf) * lambda.ln();
                let mag = ln_mag.exp();
                if mag > prev {
                    break;
                }
                inner += if k % 2 == 0 { mag } else { -mag };
                prev = mag;
                if mag <= 1e-12 * inner.abs() {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Ok(SeriesOutcome::Skipped {
                    reason: format!(
                        "binomial series terms stop decreasing (a/(s Λ) = {:.3e}) for p = {p}, r = {r}",
                        q / lambda
                    ),
                });
            }
            worst_tail = worst_tail.max(prev * ln_t.exp());
            total += ln_t.exp() * inner;
        }
    }
    Ok(SeriesOutcome::Converged(
        MetricResult::new(total / LN_2, Unit::BitsPerSecondPerHz, Method::Series)
            .with_error(worst_tail / LN_2),
    ))
}
