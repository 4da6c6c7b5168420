//! C interface to the `semiisac` library.
//!
//! Configurations live behind an opaque [`SemiIsacConfig`] handle. Every
//! fallible function returns a [`SemiIsacStatus`] code as `int32_t`; on
//! failure `semiisac_last_error` describes the most recent error on the
//! calling thread. No function unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use semiisac::analytic::Method;
use semiisac::metrics::{evaluate, Metric};
use semiisac::montecarlo::McSettings;
use semiisac::scenario::{Scenario, SystemConfig, User};
use semiisac::sweep::with_field;
use semiisac::validate::{Profile, Validation};
use semiisac::Error;

/// Status codes returned by every fallible function.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiIsacStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was malformed: bad UTF-8, unknown name, wrong user code
    /// or an unsupported metric/scenario combination.
    InvalidArgument = 2,
    /// The configuration text or a configuration value was rejected.
    Config = 3,
    /// A numerical routine failed to converge or left its domain.
    Numerical = 4,
    /// An internal panic was caught.
    Panic = 5,
}

/// User selector for per-user metrics.
pub const SEMIISAC_USER_C: i32 = 0;
pub const SEMIISAC_USER_R: i32 = 1;
/// Selector for scenario-level metrics (reir, reir-asym, capacity, slope).
pub const SEMIISAC_USER_NONE: i32 = -1;

/// Opaque system configuration.
pub struct SemiIsacConfig {
    inner: SystemConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SemiIsacStatus, String);

fn status_of(e: &Error) -> SemiIsacStatus {
    match e {
        Error::Domain { .. } | Error::NoConvergence { .. } | Error::Quadrature { .. } => {
            SemiIsacStatus::Numerical
        }
        Error::Contract(_) => SemiIsacStatus::InvalidArgument,
        Error::Config(_) | Error::Parse(_) | Error::Io(_) => SemiIsacStatus::Config,
        Error::SweepPoint { source, .. } => status_of(source),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(SemiIsacStatus::InvalidArgument, msg.into())
}

/// Runs `f`, records any error or panic, and returns the status as i32.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    let status = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SemiIsacStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            SemiIsacStatus::Panic
        }
    };
    status as i32
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(
            SemiIsacStatus::NullPointer,
            format!("{name} is null"),
        ))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null or a NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{name} is not valid UTF-8")))
}

/// # Safety
/// `cfg` must be null or a live handle.
unsafe fn config<'a>(cfg: *const SemiIsacConfig) -> Result<&'a SystemConfig, Failure> {
    non_null(cfg, "config")?;
    Ok(&(*cfg).inner)
}

fn user_of(code: i32) -> Result<Option<User>, Failure> {
    match code {
        SEMIISAC_USER_C => Ok(Some(User::C)),
        SEMIISAC_USER_R => Ok(Some(User::R)),
        SEMIISAC_USER_NONE => Ok(None),
        _ => Err(invalid(format!("user code {code} is not 0, 1 or -1"))),
    }
}

fn names(
    scenario: &str,
    metric: &str,
    user: i32,
) -> Result<(Scenario, Metric, Option<User>), Failure> {
    let s: Scenario = scenario
        .parse()
        .map_err(|e: Error| invalid(e.to_string()))?;
    let m: Metric = metric.parse().map_err(|e: Error| invalid(e.to_string()))?;
    let u = user_of(user)?;
    if m.per_user() != u.is_some() {
        let want = if m.per_user() {
            "a user (0 or 1)"
        } else {
            "no user (-1)"
        };
        return Err(invalid(format!("metric '{m}' takes {want}")));
    }
    Ok((s, m, u))
}

fn store(out: *mut SemiIsacConfig, dst: *mut *mut SemiIsacConfig) {
    // SAFETY: callers check `dst` for null before building the handle.
    unsafe { *dst = out };
}

/// Message of the last error on this thread, or null if none occurred. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn semiisac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn semiisac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a configuration from a built-in preset such as "paper-sec6".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must point to writable
/// storage for a handle. Release the handle with `semiisac_config_free`.
#[no_mangle]
pub unsafe extern "C" fn semiisac_config_from_preset(
    name: *const c_char,
    out: *mut *mut SemiIsacConfig,
) -> i32 {
    guard(|| {
        non_null(out, "out")?;
        let cfg = SystemConfig::preset(text(name, "name")?)?;
        store(Box::into_raw(Box::new(SemiIsacConfig { inner: cfg })), out);
        Ok(())
    })
}

/// Creates a configuration from TOML text; unset fields come from the
/// preset it names (default "paper-sec6").
///
/// # Safety
/// As for `semiisac_config_from_preset`.
#[no_mangle]
pub unsafe extern "C" fn semiisac_config_from_toml(
    toml: *const c_char,
    out: *mut *mut SemiIsacConfig,
) -> i32 {
    guard(|| {
        non_null(out, "out")?;
        let cfg = SystemConfig::from_toml_str(text(toml, "toml")?)?;
        store(Box::into_raw(Box::new(SemiIsacConfig { inner: cfg })), out);
        Ok(())
    })
}

/// Sets one numeric field by its dotted configuration path, e.g.
/// "powers.P_BS_dBm". The handle is unchanged on failure.
///
/// # Safety
/// `cfg` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn semiisac_config_set(
    cfg: *mut SemiIsacConfig,
    path: *const c_char,
    value: f64,
) -> i32 {
    guard(|| {
        non_null(cfg, "config")?;
        let next = with_field(&(*cfg).inner, text(path, "path")?, value)?;
        (*cfg).inner = next;
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `cfg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn semiisac_config_free(cfg: *mut SemiIsacConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Evaluates a metric analytically. `user` is 0 (communication user),
/// 1 (radar target) or -1 for scenario-level metrics.
///
/// # Safety
/// `cfg` must be a live handle, `scenario` and `metric` NUL-terminated
/// strings and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn semiisac_eval(
    cfg: *const SemiIsacConfig,
    scenario: *const c_char,
    metric: *const c_char,
    user: i32,
    value: *mut f64,
) -> i32 {
    guard(|| {
        non_null(value, "value")?;
        let c = config(cfg)?;
        let (s, m, u) = names(text(scenario, "scenario")?, text(metric, "metric")?, user)?;
        let rows = evaluate(c, s, m, None)?;
        let row = rows
            .iter()
            .find(|r| r.user == u)
            .expect("one analytic row per user");
        *value = row.result.value;
        Ok(())
    })
}

/// Monte Carlo estimate of op, rate or reir with its confidence-interval
/// half-width (99 % level).
///
/// # Safety
/// As for `semiisac_eval`; `ci` must be writable.
#[no_mangle]
pub unsafe extern "C" fn semiisac_mc_eval(
    cfg: *const SemiIsacConfig,
    scenario: *const c_char,
    metric: *const c_char,
    user: i32,
    samples: u64,
    seed: u64,
    value: *mut f64,
    ci: *mut f64,
) -> i32 {
    guard(|| {
        non_null(value, "value")?;
        non_null(ci, "ci")?;
        let c = config(cfg)?;
        let (s, m, u) = names(text(scenario, "scenario")?, text(metric, "metric")?, user)?;
        if !m.simulated() {
            return Err(invalid(format!("metric '{m}' has no Monte Carlo estimate")));
        }
        let mc = McSettings {
            n_samples: samples,
            seed,
            ..McSettings::default()
        };
        mc.validate()?;
        let rows = evaluate(c, s, m, Some(&mc))?;
        let row = rows
            .iter()
            .find(|r| r.user == u && r.result.method == Method::MonteCarlo)
            .expect("one simulated row per user");
        *value = row.result.value;
        *ci = row.result.ci_halfwidth.unwrap_or(0.0);
        Ok(())
    })
}

/// Runs the self-check suite with profile "quick", "default" or "full" and
/// writes the number of failed checks to `failures`.
///
/// # Safety
/// `cfg` must be a live handle, `profile` a NUL-terminated string and
/// `failures` writable.
#[no_mangle]
pub unsafe extern "C" fn semiisac_validate(
    cfg: *const SemiIsacConfig,
    profile: *const c_char,
    failures: *mut u32,
) -> i32 {
    guard(|| {
        non_null(failures, "failures")?;
        let c = config(cfg)?;
        let p: Profile = text(profile, "profile")?
            .parse()
            .map_err(|e: Error| invalid(e.to_string()))?;
        let report = Validation::new(*c, p).run()?;
        *failures = report.failures().count() as u32;
        Ok(())
    })
}
