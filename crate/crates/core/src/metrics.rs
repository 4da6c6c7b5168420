//! Name-based metric evaluation shared by the CLI, sweeps and the FFI layer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{
    asymptotic_op, asymptotic_op_oma, channel_capacity, diversity_order, high_snr_slope, op_noma,
    op_oma, rate_noma, rate_oma, reir_asymptotic, reir_general, Method, MetricResult, Unit,
};
use crate::error::{Error, Result};
use crate::montecarlo::{mc_reir, mc_scenario, McSettings, ScenarioEstimate, SicModel};
use crate::scenario::{Scenario, SystemConfig, User};

/// Quantities a sweep or evaluation can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Outage probability per user.
    Op,
    /// High-SNR outage approximation per user.
    OpAsym,
    /// Ergodic rate per user (bits/s/Hz).
    Rate,
    /// Ergodic radar estimation information rate (bits/s).
    Reir,
    /// High-SNR approximation of the REIR.
    ReirAsym,
    /// Aggregate capacity over the bandwidth split (bits/s/Hz).
    Capacity,
    /// Diversity order per user.
    Diversity,
    /// High-SNR slope of the REIR (bits/s per unit ln P_BS).
    Slope,
    /// Mean received SNR per user, in dB.
    SnrDb,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::Op,
        Metric::OpAsym,
        Metric::Rate,
        Metric::Reir,
        Metric::ReirAsym,
        Metric::Capacity,
        Metric::Diversity,
        Metric::Slope,
        Metric::SnrDb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Op => "op",
            Metric::OpAsym => "op-asym",
            Metric::Rate => "rate",
            Metric::Reir => "reir",
            Metric::ReirAsym => "reir-asym",
            Metric::Capacity => "capacity",
            Metric::Diversity => "diversity",
            Metric::Slope => "slope",
            Metric::SnrDb => "snr-db",
        }
    }

    /// Whether rows carry a user (otherwise one row per scenario).
    pub fn per_user(self) -> bool {
        matches!(
            self,
            Metric::Op | Metric::OpAsym | Metric::Rate | Metric::Diversity | Metric::SnrDb
        )
    }

    /// Whether the Monte Carlo simulator estimates this metric.
    pub fn simulated(self) -> bool {
        matches!(self, Metric::Op | Metric::Rate | Metric::Reir)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Metric::ALL.iter().map(|m| m.name()).collect();
                Error::Parse(format!(
                    "unknown metric '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// One evaluated quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub scenario: Scenario,
    pub user: Option<User>,
    pub metric: Metric,
    pub result: MetricResult,
}

fn user_thresholds(cfg: &SystemConfig, scenario: Scenario) -> (f64, f64) {
    let t = cfg.thresholds;
    if scenario.is_noma() {
        (t.gamma_th, t.gamma_sic)
    } else {
        (t.gamma_th_oma, t.gamma_sic)
    }
}

fn analytic_user(
    cfg: &SystemConfig,
    scenario: Scenario,
    user: User,
    metric: Metric,
) -> Result<MetricResult> {
    let (g_th, g_sic) = user_thresholds(cfg, scenario);
    let eff = cfg.for_scenario(scenario);
    match (metric, scenario.is_noma()) {
        (Metric::Op, true) => op_noma(cfg, scenario, user, g_th, g_sic),
        (Metric::Op, false) => op_oma(&eff, user, g_th),
        (Metric::OpAsym, true) => asymptotic_op(cfg, scenario, user, g_th, g_sic),
        (Metric::OpAsym, false) => asymptotic_op_oma(&eff, user, g_th),
        (Metric::Rate, true) => rate_noma(cfg, scenario, user),
        (Metric::Rate, false) => rate_oma(&eff, user),
        (Metric::Diversity, _) => Ok(MetricResult::new(
            diversity_order(cfg, scenario, user)?,
            Unit::Dimensionless,
            Method::Analytic,
        )),
        (Metric::SnrDb, _) => {
            let snr = eff.isac_band()?.mean_snr(user);
            Ok(MetricResult::new(
                10.0 * snr.log10(),
                Unit::Decibel,
                Method::Analytic,
            ))
        }
        _ => unreachable!("per-user metric"),
    }
}

fn analytic_scenario(
    cfg: &SystemConfig,
    scenario: Scenario,
    metric: Metric,
) -> Result<MetricResult> {
    let eff = cfg.for_scenario(scenario);
    match metric {
        Metric::Reir => reir_general(&eff),
        Metric::ReirAsym => reir_asymptotic(&eff),
        Metric::Capacity => Ok(channel_capacity(cfg, scenario)?.0),
        Metric::Slope => high_snr_slope(&cfg.radar),
        _ => unreachable!("scenario-level metric"),
    }
}

/// Analytic rows of one metric, then (with `mc`) the simulated rows in the
/// same order.
pub fn evaluate(
    cfg: &SystemConfig,
    scenario: Scenario,
    metric: Metric,
    mc: Option<&McSettings>,
) -> Result<Vec<Row>> {
    evaluate_many(cfg, scenario, &[metric], mc)
}

/// Rows for several metrics of one scenario. One joint simulation run is
/// shared by all simulated metrics.
pub fn evaluate_many(
    cfg: &SystemConfig,
    scenario: Scenario,
    metrics: &[Metric],
    mc: Option<&McSettings>,
) -> Result<Vec<Row>> {
    cfg.validate()?;
    let needs_sim = mc.is_some() && metrics.iter().any(|m| m.simulated());
    let sim: Option<ScenarioEstimate> = match (needs_sim, mc) {
        (true, Some(s)) if cfg.for_scenario(scenario).bandwidth.isac_hz() > 0.0 => {
            let (g_th, g_sic) = user_thresholds(cfg, scenario);
            Some(mc_scenario(cfg, scenario, g_th, g_sic, s)?)
        }
        _ => None,
    };
    let mut rows = Vec::new();
    for &metric in metrics {
        let users: Vec<Option<User>> = if metric.per_user() {
            vec![Some(User::C), Some(User::R)]
        } else {
            vec![None]
        };
        for &user in &users {
            let result = match user {
                Some(u) => analytic_user(cfg, scenario, u, metric)?,
                None => analytic_scenario(cfg, scenario, metric)?,
            };
            rows.push(Row {
                scenario,
                user,
                metric,
                result,
            });
        }
        if !(metric.simulated() && mc.is_some()) {
            continue;
        }
        for &user in &users {
            let result = match (&sim, metric, user) {
                (Some(e), Metric::Op, Some(u)) => e.outage(u),
                (Some(e), Metric::Rate, Some(u)) => e.rate(u),
                (Some(e), Metric::Reir, None) => e.reir.expect("joint run estimates the echo"),
                // no ISaC band: the REIR is zero by definition
                (None, Metric::Reir, None) => mc_reir(
                    &cfg.for_scenario(scenario),
                    mc.unwrap(),
                    SicModel::Imperfect,
                )?,
                (None, _, _) => {
                    return Err(Error::Config(format!(
                        "{metric} cannot be simulated for {scenario} without an ISaC band"
                    )))
                }
                _ => unreachable!("simulated metric shapes"),
            };
            rows.push(Row {
                scenario,
                user,
                metric,
                result,
            });
        }
    }
    Ok(rows)
}
