mod common;

use common::preset;
use semiisac::metrics::Metric;
use semiisac::scenario::{ConfigFormat, Scenario, User};
use semiisac::sweep::*;
use semiisac::Error;

fn spec(text: &str) -> semiisac::Result<SweepSpec> {
    SweepSpec::from_str_with_format(text, ConfigFormat::Toml)
}

const BETA: &str = r#"
axis = "bandwidth.beta_semi"
scenarios = ["oma", "noma-i"]
metrics = ["reir", "capacity", "op"]
[range]
start = 0.0
stop = 1.0
points = 3
[config.powers]
P_c_dBm = 10.0
"#;

#[test]
fn rows_come_in_axis_scenario_metric_user_order() {
    let s = spec(BETA).unwrap();
    assert_eq!(s.scenarios, [Scenario::OmaSemi, Scenario::NomaSemiI]);
    let rows = run_sweep(&s, &preset());
    // beta = 0 leaves no ISaC band, so per-user outage cannot be evaluated
    let err = rows.unwrap_err();
    assert!(
        matches!(&err, Error::SweepPoint { value, .. } if *value == 0.0),
        "{err}"
    );
    assert!(err.to_string().contains("bandwidth.beta_semi = 0"));

    let s = spec(&BETA.replace(r#", "op"]"#, "]")).unwrap();
    let rows = run_sweep(&s, &preset()).unwrap();
    assert_eq!(rows.len(), 3 * 2 * 2);
    let axes: Vec<f64> = rows.iter().map(|r| r.axis).collect();
    assert_eq!(
        axes,
        [0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0, 1.0]
    );
    assert_eq!(rows[0].row.scenario, Scenario::OmaSemi);
    assert_eq!(rows[0].row.metric, Metric::Reir);
    assert_eq!(rows[0].row.result.value, 0.0);
    assert_eq!(rows[2].row.scenario, Scenario::NomaSemiI);
    assert!(rows.iter().all(|r| r.row.user.is_none()));
}

#[test]
fn overrides_apply_before_the_axis() {
    let s = spec(BETA).unwrap();
    let cfg = s.config_at(&preset(), 0.5).unwrap();
    assert!((cfg.power.p_c - 0.01).abs() < 1e-15);
    assert_eq!(cfg.power.p_r, preset().power.p_r);
    assert_eq!(cfg.bandwidth.epsilon_semi, 0.5);
}

#[test]
fn csv_layout() {
    let s = spec(
        r#"
axis = "powers.P_r_dBm"
scenarios = ["noma-semi-ii"]
metrics = ["op", "slope"]
[range]
start = 10.0
stop = 20.0
points = 2
[mc]
n_samples = 10000
seed = 1
"#,
    )
    .unwrap();
    let rows = run_sweep(&s, &preset()).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    // per point: 2 analytic op rows, 2 simulated op rows, 1 slope row
    assert_eq!(lines.len(), 1 + 2 * 5);
    let f: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(f.len(), 7);
    assert_eq!(
        &f[..5],
        [
            "1.0000000000000000e1",
            "noma-semi-ii",
            "c",
            "op",
            "analytic"
        ]
    );
    assert_eq!(f[6], "");
    let sim: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(sim[4], "montecarlo");
    assert!(sim[6].parse::<f64>().unwrap() > 0.0);
    let slope: Vec<&str> = lines[5].split(',').collect();
    assert_eq!((slope[2], slope[3]), ("", "slope"));
    for line in &lines[1..] {
        let v = line.split(',').nth(5).unwrap();
        // 17 significant digits: one leading digit and 16 decimals
        let mantissa = v.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{v}");
        assert_eq!(
            v.parse::<f64>().unwrap().to_bits(),
            v.parse::<f64>().unwrap().to_bits()
        );
    }
    assert_eq!(rows[0].row.user, Some(User::C));
}

#[test]
fn out_of_range_values_are_flagged_in_the_method_column() {
    let s = spec(
        r#"
axis = "powers.P_BS_dBm"
scenarios = ["oma-semi"]
metrics = ["reir-asym"]
[range]
start = 0.0
stop = 80.0
points = 2
"#,
    )
    .unwrap();
    let rows = run_sweep(&s, &preset()).unwrap();
    assert!(csv_line(rows[0].axis, &rows[0].row).contains(",asymptotic-out-of-range,-"));
    assert!(csv_line(rows[1].axis, &rows[1].row).contains(",asymptotic,"));
}

#[test]
fn malformed_specs_are_rejected() {
    let ok = r#"
axis = "powers.P_c_dBm"
scenarios = ["oma-semi"]
metrics = ["op"]
[range]
start = 0.0
stop = 1.0
points = 2
"#;
    assert!(spec(ok).is_ok());
    assert!(spec(&ok.replace("points = 2", "points = 1")).is_err());
    assert!(spec(&ok.replace(r#"["op"]"#, r#"["opp"]"#)).is_err());
    assert!(spec(&ok.replace(r#"["oma-semi"]"#, r#"["tdma"]"#)).is_err());
    assert!(spec(&ok.replace(r#"["oma-semi"]"#, "[]")).is_err());
    assert!(spec(&format!("{ok}\nbogus = 1\n")).is_err());
    assert!(spec(&format!("{ok}\n[mc]\nn_samples = 5\n")).is_err());
    assert!(spec(&ok.replace("start = 0.0", "start = 0.0\nscale = \"log\"")).is_err());
    let json = r#"{"axis": "fading.m", "scenarios": ["fd"], "metrics": ["diversity"],
                   "range": {"start": 1, "stop": 3, "points": 3}}"#;
    let s = SweepSpec::from_str_with_format(json, ConfigFormat::Json).unwrap();
    let rows = run_sweep(&s, &preset()).unwrap();
    let orders: Vec<f64> = rows.iter().map(|r| r.row.result.value).collect();
    assert_eq!(orders, [1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
}

#[test]
fn shipped_sweep_specs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/sweeps");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        SweepSpec::from_path(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 3);
}
