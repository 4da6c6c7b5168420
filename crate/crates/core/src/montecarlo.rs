//! Monte Carlo link simulator: draws the four Nakagami power gains per
//! sample and evaluates the instantaneous SINRs of the signal model,
//! including the random radar echo and imperfect SIC residuals.
//!
//! Samples are split into fixed-size batches. Batch `b` draws from a
//! ChaCha8 generator seeded with `seed` on stream `b`, batches run in
//! parallel, and their statistics are merged pairwise in index order, so an
//! estimate depends only on the configuration, seed, sample count and batch
//! size.

use std::f64::consts::LN_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{Method, MetricResult, Unit};
use crate::channel::{FadingSample, NakagamiPower};
use crate::error::{Error, Result};
use crate::scenario::{Band, Scenario, SicStage, SystemConfig, User};
use crate::specfun::gaussian_q;

/// Sampling controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSettings {
    pub n_samples: u64,
    pub seed: u64,
    pub batch_size: u64,
    /// Two-sided confidence level of the reported interval.
    pub confidence: f64,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            n_samples: 1_000_000,
            seed: 20_240_917,
            batch_size: 1 << 15,
            confidence: 0.99,
        }
    }
}

impl McSettings {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1000 {
            return Err(Error::Config(format!(
                "n_samples = {} is below the minimum of 1000",
                self.n_samples
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be positive".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Config(format!(
                "confidence = {} must lie in (0, 1)",
                self.confidence
            )));
        }
        Ok(())
    }

    /// Standard normal quantile z with Pr{|Z| <= z} = confidence.
    pub fn z_score(&self) -> f64 {
        let tail = 0.5 * (1.0 - self.confidence);
        // Q is monotone decreasing; bisect on [0, 40]
        let (mut lo, mut hi) = (0.0f64, 40.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gaussian_q(mid) > tail {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    fn batches(&self) -> u64 {
        self.n_samples.div_ceil(self.batch_size)
    }

    fn batch_len(&self, b: u64) -> u64 {
        let start = b * self.batch_size;
        self.batch_size.min(self.n_samples - start)
    }
}

/// Whether the SIC residual factors of the configuration are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SicModel {
    Perfect,
    Imperfect,
}

/// Running count, mean and centred second moment (Welford / Chan).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Self {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * w,
        }
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    fn result(&self, unit: Unit, z: f64) -> MetricResult {
        let hw = z * (self.variance() / self.n as f64).sqrt();
        MetricResult::new(self.mean, unit, Method::MonteCarlo).with_ci(hw)
    }
}

/// Wilson score interval half-width for `k` events in `n` trials.
pub fn wilson_halfwidth(k: u64, n: u64, z: f64) -> f64 {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

fn proportion(k: u64, n: u64, z: f64) -> MetricResult {
    MetricResult::probability(k as f64 / n as f64, Method::MonteCarlo)
        .with_ci(wilson_halfwidth(k, n, z))
}

/// Per-batch sufficient statistics of one scenario: outage events and rate
/// moments for both users (indexed c = 0, r = 1) and REIR moments.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    n: u64,
    outages: [u64; 2],
    rate: [Moments; 2],
    reir: Moments,
}

impl Tally {
    fn merge(&self, o: &Self) -> Self {
        Self {
            n: self.n + o.n,
            outages: [
                self.outages[0] + o.outages[0],
                self.outages[1] + o.outages[1],
            ],
            rate: [
                self.rate[0].merge(&o.rate[0]),
                self.rate[1].merge(&o.rate[1]),
            ],
            reir: self.reir.merge(&o.reir),
        }
    }
}

fn idx(user: User) -> usize {
    match user {
        User::C => 0,
        User::R => 1,
    }
}

/// Per-sample evaluation of one scenario on a resolved band.
struct Evaluator {
    band: Band,
    scenario: Scenario,
    gamma_th: f64,
    gamma_sic: f64,
    /// (δ / 2T), and 2 T × bandwidth of the REIR expression.
    reir_scale: f64,
    reir_gain: f64,
    with_reir: bool,
}

impl Evaluator {
    fn sample(&self, f: &FadingSample, t: &mut Tally) -> Result<()> {
        t.n += 1;
        match self.scenario.first_decoded() {
            None => {
                for user in [User::C, User::R] {
                    let sinr = self.band.sinr_oma(user, f);
                    if sinr < self.gamma_th {
                        t.outages[idx(user)] += 1;
                    }
                    t.rate[idx(user)].push(0.5 * sinr.ln_1p() / LN_2);
                }
            }
            Some(first) => {
                let second = first.other();
                let s1 = self
                    .band
                    .sinr_noma(self.scenario, first, SicStage::PreSic, f)?;
                let s2 = self
                    .band
                    .sinr_noma(self.scenario, second, SicStage::PostSic, f)?;
                if s1 < self.gamma_th {
                    t.outages[idx(first)] += 1;
                }
                t.rate[idx(first)].push(s1.ln_1p() / LN_2);
                let sic_ok = s1 >= self.gamma_sic;
                if !(sic_ok && s2 >= self.gamma_th) {
                    t.outages[idx(second)] += 1;
                }
                t.rate[idx(second)].push(if sic_ok { s2.ln_1p() / LN_2 } else { 0.0 });
            }
        }
        if self.with_reir {
            let echo = self.band.snr_radar_echo(f)?;
            t.reir
                .push(self.reir_scale * (self.reir_gain * echo).ln_1p() / LN_2);
        }
        Ok(())
    }
}

fn run(eval: &Evaluator, settings: &McSettings) -> Result<Tally> {
    settings.validate()?;
    let sampler = NakagamiPower::new(eval.band.m)?;
    let tallies: Vec<Tally> = (0..settings.batches())
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
            rng.set_stream(b);
            let mut t = Tally::default();
            for _ in 0..settings.batch_len(b) {
                let f = FadingSample::draw(&sampler, &mut rng);
                eval.sample(&f, &mut t)?;
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    Ok(tree_merge(&tallies))
}

/// Pairwise reduction in index order; the shape depends only on the count.
fn tree_merge(items: &[Tally]) -> Tally {
    match items.len() {
        0 => Tally::default(),
        1 => items[0],
        n => {
            let (l, r) = items.split_at(n / 2);
            tree_merge(l).merge(&tree_merge(r))
        }
    }
}

/// Monte Carlo estimates of every metric of one scenario from a single set
/// of channel draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioEstimate {
    pub scenario: Scenario,
    pub outage_c: MetricResult,
    pub outage_r: MetricResult,
    pub rate_c: MetricResult,
    pub rate_r: MetricResult,
    /// Ergodic REIR in bits/s; `None` when the scenario has no ISaC band.
    pub reir: Option<MetricResult>,
}

impl ScenarioEstimate {
    pub fn outage(&self, user: User) -> MetricResult {
        match user {
            User::C => self.outage_c,
            User::R => self.outage_r,
        }
    }

    pub fn rate(&self, user: User) -> MetricResult {
        match user {
            User::C => self.rate_c,
            User::R => self.rate_r,
        }
    }
}

fn evaluator(
    cfg: &SystemConfig,
    scenario: Scenario,
    gamma_th: f64,
    gamma_sic: f64,
    sic: SicModel,
) -> Result<Evaluator> {
    cfg.validate()?;
    if !(gamma_th >= 0.0) || !(gamma_sic >= 0.0) {
        return Err(crate::error::domain(
            "montecarlo",
            format!(
                "thresholds gamma_th = {gamma_th}, gamma_sic = {gamma_sic} must be non-negative"
            ),
        ));
    }
    let mut eff = cfg.for_scenario(scenario);
    if sic == SicModel::Perfect {
        eff.power.varsigma_c = 0.0;
        eff.power.varsigma_r = 0.0;
    }
    let band = eff.isac_band()?;
    Ok(Evaluator {
        band,
        scenario,
        gamma_th,
        gamma_sic,
        reir_scale: band.duty_cycle / (2.0 * band.pulse_duration),
        reir_gain: 2.0 * band.pulse_duration * band.bandwidth_hz,
        with_reir: true,
    })
}

/// Joint estimate of outage (thresholds as given), ergodic rate and REIR
/// for both users of `scenario` in the ISaC band. SIC residuals follow the
/// configuration.
pub fn mc_scenario(
    cfg: &SystemConfig,
    scenario: Scenario,
    gamma_th: f64,
    gamma_sic: f64,
    settings: &McSettings,
) -> Result<ScenarioEstimate> {
    let eval = evaluator(cfg, scenario, gamma_th, gamma_sic, SicModel::Imperfect)?;
    let t = run(&eval, settings)?;
    let z = settings.z_score();
    Ok(ScenarioEstimate {
        scenario,
        outage_c: proportion(t.outages[0], t.n, z),
        outage_r: proportion(t.outages[1], t.n, z),
        rate_c: t.rate[0].result(Unit::BitsPerSecondPerHz, z),
        rate_r: t.rate[1].result(Unit::BitsPerSecondPerHz, z),
        reir: Some(t.reir.result(Unit::BitsPerSecond, z)),
    })
}

/// Empirical outage probability. For the NOMA user decoded second, a SIC
/// failure counts as outage. OMA users are compared against `gamma_th`.
pub fn mc_outage(
    cfg: &SystemConfig,
    scenario: Scenario,
    user: User,
    gamma_th: f64,
    gamma_sic: f64,
    settings: &McSettings,
) -> Result<MetricResult> {
    let mut eval = evaluator(cfg, scenario, gamma_th, gamma_sic, SicModel::Imperfect)?;
    eval.with_reir = false;
    let t = run(&eval, settings)?;
    Ok(proportion(t.outages[idx(user)], t.n, settings.z_score()))
}

/// Sample mean of log2(1 + SINR) (half of it for OMA). The user decoded
/// second earns rate only on samples where SIC succeeds at the
/// configuration's γ_SIC.
pub fn mc_rate(
    cfg: &SystemConfig,
    scenario: Scenario,
    user: User,
    settings: &McSettings,
) -> Result<MetricResult> {
    let th = cfg.thresholds;
    let mut eval = evaluator(
        cfg,
        scenario,
        th.gamma_th,
        th.gamma_sic,
        SicModel::Imperfect,
    )?;
    eval.with_reir = false;
    let t = run(&eval, settings)?;
    Ok(t.rate[idx(user)].result(Unit::BitsPerSecondPerHz, settings.z_score()))
}

/// Sample mean of (δ / 2T) log2(1 + 2 T βB γ_echo) in bits/s, with the
/// configuration's distances as given. Zero without sampling when β = 0.
pub fn mc_reir(cfg: &SystemConfig, settings: &McSettings, sic: SicModel) -> Result<MetricResult> {
    cfg.validate()?;
    if cfg.bandwidth.isac_hz() == 0.0 {
        return Ok(MetricResult::new(0.0, Unit::BitsPerSecond, Method::MonteCarlo).with_ci(0.0));
    }
    let th = cfg.thresholds;
    // OMA leaves the distances untouched; only the echo statistic is used.
    let eval = evaluator(cfg, Scenario::OmaSemi, th.gamma_th_oma, th.gamma_sic, sic)?;
    let t = run(&eval, settings)?;
    Ok(t.reir.result(Unit::BitsPerSecond, settings.z_score()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::DEFAULT_PRESET;

    #[test]
    fn z_score_of_common_levels() {
        let mut s = McSettings::default();
        assert!((s.z_score() - 2.5758293035489004).abs() < 1e-9);
        s.confidence = 0.95;
        assert!((s.z_score() - 1.959963984540054).abs() < 1e-9);
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000)
            .map(|i| ((i * 7919) % 1013) as f64 * 0.37)
            .collect();
        let mut all = Moments::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let m = a.merge(&b);
        assert_eq!(m.n, all.n);
        assert!((m.mean - all.mean).abs() < 1e-12 * all.mean);
        assert!((m.m2 - all.m2).abs() < 1e-10 * all.m2);
    }

    #[test]
    fn wilson_interval_is_positive_at_zero_events() {
        let hw = wilson_halfwidth(0, 1000, 2.576);
        assert!(hw > 0.0 && hw < 0.01);
    }

    #[test]
    fn batches_partition_the_samples() {
        let s = McSettings {
            n_samples: 10_001,
            batch_size: 1000,
            ..Default::default()
        };
        assert_eq!(s.batches(), 11);
        assert_eq!(
            (0..s.batches()).map(|b| s.batch_len(b)).sum::<u64>(),
            10_001
        );
    }

    #[test]
    fn rejects_too_few_samples() {
        let cfg = SystemConfig::preset(DEFAULT_PRESET).unwrap();
        let s = McSettings {
            n_samples: 10,
            ..Default::default()
        };
        assert!(mc_rate(&cfg, Scenario::OmaSemi, User::C, &s).is_err());
    }
}
