use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use semiisac_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = semiisac_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn preset() -> *mut SemiIsacConfig {
    let mut h = ptr::null_mut();
    let name = c("paper-sec6");
    assert_eq!(
        unsafe { semiisac_config_from_preset(name.as_ptr(), &mut h) },
        0
    );
    assert!(!h.is_null());
    h
}

fn eval(h: *const SemiIsacConfig, scenario: &str, metric: &str, user: i32) -> Result<f64, i32> {
    let (s, m) = (c(scenario), c(metric));
    let mut v = f64::NAN;
    match unsafe { semiisac_eval(h, s.as_ptr(), m.as_ptr(), user, &mut v) } {
        0 => Ok(v),
        code => Err(code),
    }
}

#[test]
fn analytic_values_match_the_library() {
    use semiisac::analytic::{op_noma, reir_general};
    use semiisac::scenario::{Scenario, SystemConfig, User};
    let cfg = SystemConfig::preset("paper-sec6").unwrap();
    let h = preset();
    let op = eval(h, "noma-semi-i", "op", SEMIISAC_USER_R).unwrap();
    assert_eq!(
        op,
        op_noma(&cfg, Scenario::NomaSemiI, User::R, 1.0, 0.4)
            .unwrap()
            .value
    );
    let reir = eval(h, "oma-semi", "reir", SEMIISAC_USER_NONE).unwrap();
    assert_eq!(reir, reir_general(&cfg).unwrap().value);
    assert!(eval(h, "fd-isac", "capacity", SEMIISAC_USER_NONE).unwrap() > 0.0);
    unsafe { semiisac_config_free(h) };
}

#[test]
fn setting_a_field_changes_results_and_bad_paths_leave_the_handle_intact() {
    let h = preset();
    let before = eval(h, "oma-semi", "reir", SEMIISAC_USER_NONE).unwrap();
    let path = c("powers.P_BS_dBm");
    assert_eq!(unsafe { semiisac_config_set(h, path.as_ptr(), 20.0) }, 0);
    let after = eval(h, "oma-semi", "reir", SEMIISAC_USER_NONE).unwrap();
    assert!(after > before);
    let bad = c("powers.nope");
    assert_eq!(
        unsafe { semiisac_config_set(h, bad.as_ptr(), 1.0) },
        SemiIsacStatus::Config as i32
    );
    assert!(last_error().contains("powers.nope"));
    assert_eq!(
        eval(h, "oma-semi", "reir", SEMIISAC_USER_NONE).unwrap(),
        after
    );
    unsafe { semiisac_config_free(h) };
}

#[test]
fn toml_configuration() {
    let mut h = ptr::null_mut();
    let text = c("[fading]\nm = 1\n");
    assert_eq!(
        unsafe { semiisac_config_from_toml(text.as_ptr(), &mut h) },
        0
    );
    assert_eq!(
        eval(h, "noma-semi-i", "diversity", SEMIISAC_USER_C).unwrap(),
        1.0
    );
    unsafe { semiisac_config_free(h) };

    let mut h = ptr::null_mut();
    let bad = c("[fading]\nm = 0\n");
    assert_eq!(
        unsafe { semiisac_config_from_toml(bad.as_ptr(), &mut h) },
        SemiIsacStatus::Config as i32
    );
    assert!(h.is_null());
}

#[test]
fn argument_errors_are_reported_not_raised() {
    let h = preset();
    assert_eq!(
        eval(h, "noma-semi-i", "nope", 0),
        Err(SemiIsacStatus::InvalidArgument as i32)
    );
    assert!(last_error().contains("nope"));
    assert_eq!(
        eval(h, "bogus", "op", 0),
        Err(SemiIsacStatus::InvalidArgument as i32)
    );
    assert_eq!(
        eval(h, "oma-semi", "op", 7),
        Err(SemiIsacStatus::InvalidArgument as i32)
    );
    assert_eq!(
        eval(h, "oma-semi", "op", SEMIISAC_USER_NONE),
        Err(SemiIsacStatus::InvalidArgument as i32)
    );
    assert_eq!(
        eval(h, "oma-semi", "reir", SEMIISAC_USER_C),
        Err(SemiIsacStatus::InvalidArgument as i32)
    );
    assert_eq!(
        eval(ptr::null(), "oma-semi", "op", 0),
        Err(SemiIsacStatus::NullPointer as i32)
    );

    let (s, m) = (c("oma-semi"), c("op"));
    let code = unsafe { semiisac_eval(h, s.as_ptr(), m.as_ptr(), 0, ptr::null_mut()) };
    assert_eq!(code, SemiIsacStatus::NullPointer as i32);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { semiisac_config_from_preset(ptr::null(), &mut out) },
        SemiIsacStatus::NullPointer as i32
    );
    let invalid_utf8 = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { semiisac_config_from_preset(invalid_utf8.as_ptr().cast(), &mut out) },
        SemiIsacStatus::InvalidArgument as i32
    );
    unsafe { semiisac_config_free(h) };
    unsafe { semiisac_config_free(ptr::null_mut()) };
}

#[test]
fn simulation_is_reproducible_and_brackets_the_analytic_value() {
    let h = preset();
    let (s, m) = (c("noma-semi-i"), c("op"));
    let run = |seed| {
        let (mut v, mut ci) = (0.0, 0.0);
        let code = unsafe {
            semiisac_mc_eval(
                h,
                s.as_ptr(),
                m.as_ptr(),
                SEMIISAC_USER_R,
                200_000,
                seed,
                &mut v,
                &mut ci,
            )
        };
        assert_eq!(code, 0);
        (v, ci)
    };
    let (v, ci) = run(5);
    assert_eq!(run(5), (v, ci));
    let exact = eval(h, "noma-semi-i", "op", SEMIISAC_USER_R).unwrap();
    assert!((v - exact).abs() <= 3.0 * ci);

    let slope = c("slope");
    let (mut v, mut ci) = (0.0, 0.0);
    let code = unsafe {
        semiisac_mc_eval(
            h,
            s.as_ptr(),
            slope.as_ptr(),
            -1,
            10_000,
            1,
            &mut v,
            &mut ci,
        )
    };
    assert_eq!(code, SemiIsacStatus::InvalidArgument as i32);
    let code = unsafe { semiisac_mc_eval(h, s.as_ptr(), m.as_ptr(), 0, 10, 1, &mut v, &mut ci) };
    assert_eq!(code, SemiIsacStatus::Config as i32);
    unsafe { semiisac_config_free(h) };
}

#[test]
fn quick_validation_reports_no_failures() {
    let h = preset();
    let profile = c("quick");
    let mut failures = u32::MAX;
    assert_eq!(
        unsafe { semiisac_validate(h, profile.as_ptr(), &mut failures) },
        0
    );
    assert_eq!(failures, 0);
    unsafe { semiisac_config_free(h) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(semiisac_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_exported_function() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/semiisac.h"))
            .unwrap();
    for f in [
        "semiisac_last_error",
        "semiisac_version",
        "semiisac_config_from_preset",
        "semiisac_config_from_toml",
        "semiisac_config_set",
        "semiisac_config_free",
        "semiisac_eval",
        "semiisac_mc_eval",
        "semiisac_validate",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct SemiIsacConfig SemiIsacConfig;"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-std=c99"])
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/semiisac.h"))
        .status()
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    assert!(status.success());
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let deps = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = [
        deps.join("libsemiisac_ffi.a"),
        deps.parent().unwrap().join("libsemiisac_ffi.a"),
    ]
    .into_iter()
    .find(|p| p.exists());
    let (Some(lib), true) = (
        lib,
        std::process::Command::new("cc")
            .arg("--version")
            .output()
            .is_ok(),
    ) else {
        eprintln!("static library or C compiler unavailable; skipping");
        return;
    };
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg("-std=c99")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.split_whitespace().collect();
    let op: f64 = fields[0].parse().unwrap();
    let reir: f64 = fields[1].parse().unwrap();
    let h = preset();
    // the failed call must not have overwritten the output argument
    assert_eq!(op, eval(h, "noma-semi-i", "op", SEMIISAC_USER_R).unwrap());
    assert_eq!(
        reir,
        eval(h, "oma-semi", "reir", SEMIISAC_USER_NONE).unwrap()
    );
    assert_eq!(
        fields[2],
        (SemiIsacStatus::InvalidArgument as i32).to_string()
    );
    unsafe { semiisac_config_free(h) };
}
