//! Parameter sweeps: one configuration field stepped over a range, every
//! point evaluated for a list of scenarios and metrics, results written as
//! CSV in a fixed order.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::metrics::{evaluate_many, Metric, Row};
use crate::montecarlo::McSettings;
use crate::scenario::{merge, parse_document, ConfigFormat, Scenario, SystemConfig};

pub const CSV_HEADER: &str = "axis,scenario,user,metric,method,value,ci";
/// Header of single-point evaluations, which have no axis column.
pub const ROW_HEADER: &str = "scenario,user,metric,method,value,ci";

/// Spacing of the sweep points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Scale {
    #[serde(rename = "linear")]
    Linear,
    /// Geometric spacing between positive endpoints.
    #[serde(rename = "log")]
    Log,
    /// Endpoints in dB; points are evenly spaced in dB and applied as 10^(x/10).
    #[serde(rename = "dB")]
    Db,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "default_scale")]
    pub scale: Scale,
}

fn default_scale() -> Scale {
    Scale::Linear
}

impl AxisRange {
    /// Values written into the configuration field, in sweep order.
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(Error::Config(format!(
                "a sweep needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("sweep endpoints must be finite".into()));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::Config(
                "log-scale sweep endpoints must be positive".into(),
            ));
        }
        let n = self.points - 1;
        Ok((0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                // exact endpoints regardless of rounding in the interpolation
                let lerp = |a: f64, b: f64| if i == n { b } else { a + (b - a) * t };
                match self.scale {
                    Scale::Linear => lerp(self.start, self.stop),
                    Scale::Log => {
                        if i == n {
                            self.stop
                        } else {
                            (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp()
                        }
                    }
                    Scale::Db => 10f64.powf(lerp(self.start, self.stop) / 10.0),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    axis: String,
    range: AxisRange,
    scenarios: Vec<String>,
    metrics: Vec<Metric>,
    #[serde(default)]
    mc: Option<McSettings>,
    #[serde(default)]
    config: Option<Value>,
}

/// A parsed sweep specification.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Dotted path of a numeric configuration field, e.g. `powers.P_c_dBm`.
    pub axis: String,
    pub range: AxisRange,
    pub scenarios: Vec<Scenario>,
    pub metrics: Vec<Metric>,
    pub mc: Option<McSettings>,
    /// Configuration overrides applied before the axis value.
    pub config: Option<Value>,
}

impl SweepSpec {
    pub fn from_str_with_format(text: &str, format: ConfigFormat) -> Result<Self> {
        let doc = parse_document(text, format)?;
        let file: SweepFile =
            serde_json::from_value(doc).map_err(|e| Error::Parse(e.to_string()))?;
        let scenarios = file
            .scenarios
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Scenario>>>()?;
        let spec = Self {
            axis: file.axis,
            range: file.range,
            scenarios,
            metrics: file.metrics,
            mc: file.mc,
            config: file.config,
        };
        if spec.scenarios.is_empty() || spec.metrics.is_empty() {
            return Err(Error::Config(
                "a sweep needs at least one scenario and one metric".into(),
            ));
        }
        spec.range.values()?;
        if let Some(mc) = &spec.mc {
            mc.validate()?;
        }
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_with_format(&text, ConfigFormat::from_path(path))
    }

    /// The configuration of one sweep point.
    pub fn config_at(&self, base: &SystemConfig, x: f64) -> Result<SystemConfig> {
        let mut doc = base.to_value();
        if let Some(over) = &self.config {
            merge(&mut doc, over.clone());
        }
        set_axis(&mut doc, &self.axis, x)?;
        SystemConfig::from_value(doc)
    }
}

/// A copy of `base` with one numeric field, named by its dotted path in the
/// configuration file (e.g. `powers.P_BS_dBm`), set to `x`. Follows the same
/// rules as a sweep axis.
pub fn with_field(base: &SystemConfig, path: &str, x: f64) -> Result<SystemConfig> {
    let mut doc = base.to_value();
    set_axis(&mut doc, path, x)?;
    SystemConfig::from_value(doc)
}

/// Writes `x` into the numeric field at `path`. Integer fields accept only
/// integral values. Moving one bandwidth fraction rebalances the others so
/// the split still sums to one: α or β moves ε, and ε moves β.
fn set_axis(doc: &mut Value, path: &str, x: f64) -> Result<()> {
    let slot = path
        .split('.')
        .try_fold(&mut *doc, |v, key| v.get_mut(key))
        .ok_or_else(|| {
            Error::Config(format!("sweep axis '{path}' is not a configuration field"))
        })?;
    *slot = match slot {
        Value::Number(n) if n.is_u64() || n.is_i64() => {
            if x.fract() != 0.0 || x < 0.0 {
                return Err(Error::Config(format!(
                    "axis '{path}' is an integer field; {x} is not allowed"
                )));
            }
            Value::from(x as u64)
        }
        Value::Number(_) => serde_json::Number::from_f64(x)
            .map(Value::Number)
            .ok_or_else(|| Error::Config(format!("axis value {x} is not finite")))?,
        _ => {
            return Err(Error::Config(format!(
                "sweep axis '{path}' is not a scalar numeric field"
            )))
        }
    };
    let rebalance = match path {
        "bandwidth.alpha_semi" | "bandwidth.beta_semi" => {
            Some(("epsilon_semi", ["alpha_semi", "beta_semi"]))
        }
        "bandwidth.epsilon_semi" => Some(("beta_semi", ["alpha_semi", "epsilon_semi"])),
        _ => None,
    };
    if let Some((target, [a, b])) = rebalance {
        let bw = &mut doc["bandwidth"];
        let rest = 1.0 - bw[a].as_f64().unwrap_or(0.0) - bw[b].as_f64().unwrap_or(0.0);
        // absorb rounding so that e.g. β = 1 leaves ε = 0, not -1e-17
        let rest = if rest.abs() < 1e-12 { 0.0 } else { rest };
        bw[target] = Value::from(rest);
    }
    Ok(())
}

/// One CSV line of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis: f64,
    pub row: Row,
}

/// Evaluates all points (concurrently) and returns the rows in axis order,
/// then scenario, metric, user and method order. The first failing point in
/// axis order aborts the sweep.
pub fn run_sweep(spec: &SweepSpec, base: &SystemConfig) -> Result<Vec<SweepRow>> {
    let xs = spec.range.values()?;
    let per_point: Vec<Result<Vec<SweepRow>>> = xs
        .par_iter()
        .map(|&x| {
            let wrap = |e: Error| Error::SweepPoint {
                axis: spec.axis.clone(),
                value: x,
                source: Box::new(e),
            };
            let cfg = spec.config_at(base, x).map_err(wrap)?;
            let mut out = Vec::new();
            for &s in &spec.scenarios {
                let rows = evaluate_many(&cfg, s, &spec.metrics, spec.mc.as_ref()).map_err(wrap)?;
                out.extend(rows.into_iter().map(|row| SweepRow { axis: x, row }));
            }
            Ok(out)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// CSV fields of a row without the axis column (no trailing newline). A
/// value outside its valid range (an asymptote used far from its regime)
/// is written unclamped with `-out-of-range` appended to the method.
pub fn row_fields(row: &Row) -> String {
    let user = row.user.map(|u| u.name()).unwrap_or("");
    let ci = row.result.ci_halfwidth.map(fmt_f64).unwrap_or_default();
    let flag = if row.result.out_of_range {
        "-out-of-range"
    } else {
        ""
    };
    format!(
        "{},{},{},{}{flag},{},{}",
        row.scenario.name(),
        user,
        row.metric.name(),
        row.result.method.name(),
        fmt_f64(row.result.value),
        ci
    )
}

/// CSV line of a sweep row (no trailing newline).
pub fn csv_line(axis: f64, row: &Row) -> String {
    format!("{},{}", fmt_f64(axis), row_fields(row))
}

pub fn write_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", csv_line(r.axis, &r.row))?;
    }
    out.flush()?;
    Ok(())
}
