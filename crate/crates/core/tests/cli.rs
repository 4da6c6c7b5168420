use std::path::Path;
use std::process::{Command, Output};

fn semiisac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiisac"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn configs() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn eval_prints_one_row_per_user_and_method() {
    let o = semiisac(&[
        "eval",
        "--scenario",
        "noma-semi-i",
        "--metric",
        "op",
        "--metric",
        "reir",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scenario,user,metric,method,value,ci");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("noma-semi-i,c,op,analytic,"));
    assert!(lines[3].starts_with("noma-semi-i,,reir,quadrature,"));

    let o = semiisac(&[
        "eval",
        "--scenario",
        "oma",
        "--metric",
        "rate",
        "--mc",
        "--samples",
        "20000",
        "--seed",
        "3",
    ]);
    let text = stdout(&o);
    assert_eq!(
        text.lines().filter(|l| l.contains(",montecarlo,")).count(),
        2
    );
    assert_eq!(
        text,
        stdout(&semiisac(&[
            "eval",
            "--scenario",
            "oma",
            "--metric",
            "rate",
            "--samples",
            "20000",
            "--seed",
            "3"
        ]))
    );
}

#[test]
fn eval_defaults_to_all_scenarios() {
    let o = semiisac(&["eval", "--metric", "slope"]);
    let text = stdout(&o);
    let names: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        names,
        ["fd-isac", "oma-semi", "noma-semi-i", "noma-semi-ii"]
    );
}

#[test]
fn errors_exit_non_zero_with_a_message() {
    let o = semiisac(&["eval", "--metric", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr)
        .starts_with("error: parse error: unknown metric 'bogus'"));

    let o = semiisac(&["eval", "--metric", "op", "--config", "/nonexistent.toml"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[bandwidth]\nalpha_semi = 0.5\n").unwrap();
    let o = semiisac(&["eval", "--metric", "op", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid configuration"));

    let spec = dir.path().join("spec.toml");
    std::fs::write(
        &spec,
        "axis = \"fading.m\"\nscenarios = [\"oma\"]\nmetrics = [\"op\"]\n[range]\nstart = 1.0\nstop = 2.0\npoints = 3\n",
    )
    .unwrap();
    let o = semiisac(&["sweep", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fading.m = 1.5"));

    assert_eq!(
        semiisac(&["validate", "--profile", "fast"]).status.code(),
        Some(2)
    );
    assert_eq!(semiisac(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn config_round_trips_through_a_file() {
    let text = stdout(&semiisac(&[
        "config",
        "--config",
        configs().join("imperfect-sic.toml").to_str().unwrap(),
    ]));
    assert!(text.contains("varsigma_c = 0.05"));
    assert!(text.contains("m = 1"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("full.toml");
    std::fs::write(&path, &text).unwrap();
    assert_eq!(
        stdout(&semiisac(&["config", "--config", path.to_str().unwrap()])),
        text
    );

    let json = dir.path().join("c.json");
    std::fs::write(&json, r#"{"fading": {"m": 2}}"#).unwrap();
    let o = semiisac(&[
        "eval",
        "--config",
        json.to_str().unwrap(),
        "--metric",
        "diversity",
        "--scenario",
        "oma",
    ]);
    assert!(stdout(&o).contains("oma-semi,c,diversity,analytic,2.0000000000000000e0,"));
}

#[test]
fn sweep_writes_the_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("beta.csv");
    let spec = configs().join("sweeps/beta-split.toml");
    let o = semiisac(&[
        "sweep",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("axis,scenario,user,metric,method,value,ci\n"));
    assert_eq!(text.lines().count(), 1 + 11 * 3 * 2);
}

#[test]
fn validate_reports_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = semiisac(&[
        "validate",
        "--profile",
        "quick",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("check,expected,got,tolerance,verdict")
    );
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.ends_with(",pass") || l.ends_with(",skip")));
    assert!(text.contains("constants:a3,"));
}
