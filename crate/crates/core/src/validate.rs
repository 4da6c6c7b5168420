//! Self-check suite: special-function identities, closed-form constants,
//! analytic expressions against their defining integrals and each other,
//! high-SNR behaviour, and analytic-versus-simulation agreement.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::analytic::{
    asymptotic_op, channel_capacity, diversity_order, high_snr_slope, op_noma, op_oma, rate_noma,
    rate_noma_band, rate_noma_closed_form, rate_noma_series, rate_oma, rate_oma_quadrature,
    reir_asymptotic, reir_conditional, reir_general, reir_rayleigh, SeriesOutcome,
};
use crate::channel::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::montecarlo::{mc_reir, mc_scenario, McSettings, SicModel};
use crate::scenario::{
    dbm_to_watts, derive_constants, DerivedConstants, Scenario, SystemConfig, User,
};
use crate::specfun::{
    exp_integral_en, integrate, integrate_semi_infinite, ln_factorial, ln_gamma, product_gamma_pdf,
    reg_lower_gamma, reg_upper_gamma, QuadratureSettings,
};
use crate::sweep::fmt_f64;

/// Simulation effort of a validation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// 1e5 samples per simulation.
    Quick,
    /// 1e6 samples per simulation.
    Default,
    /// 4e6 samples per simulation.
    Full,
}

impl Profile {
    pub fn samples(self) -> u64 {
        match self {
            Profile::Quick => 100_000,
            Profile::Default => 1_000_000,
            Profile::Full => 4_000_000,
        }
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "default" => Ok(Profile::Default),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Parse(format!(
                "unknown profile '{s}' (quick, default, full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Not applicable to this configuration; never counts as a failure.
    Skip,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skip => "skip",
        })
    }
}

/// One report line. `expected` is a number, or a bound such as `<=0.5`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl Check {
    fn pass_if(name: String, expected: String, got: f64, tolerance: f64, ok: bool) -> Self {
        Self {
            name,
            expected,
            got,
            tolerance,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    /// |got - expected| <= tolerance.
    pub fn close(name: impl Into<String>, expected: f64, got: f64, tolerance: f64) -> Self {
        let ok = (got - expected).abs() <= tolerance;
        Self::pass_if(name.into(), fmt_f64(expected), got, tolerance, ok)
    }

    /// |got - expected| <= rel |expected|.
    pub fn relative(name: impl Into<String>, expected: f64, got: f64, rel: f64) -> Self {
        Self::close(name, expected, got, rel * expected.abs())
    }

    /// got <= bound + tolerance.
    pub fn at_most(name: impl Into<String>, bound: f64, got: f64, tolerance: f64) -> Self {
        let ok = got <= bound + tolerance;
        Self::pass_if(
            name.into(),
            format!("<={}", fmt_f64(bound)),
            got,
            tolerance,
            ok,
        )
    }

    pub fn skip(name: impl Into<String>, reason: &str) -> Self {
        Self {
            name: format!("{} ({reason})", name.into()),
            expected: String::new(),
            got: f64::NAN,
            tolerance: f64::NAN,
            verdict: Verdict::Skip,
        }
    }

    fn error(name: impl Into<String>, e: &Error) -> Self {
        Self {
            name: format!("{} ({e})", name.into()).replace(',', ";"),
            expected: String::new(),
            got: f64::NAN,
            tolerance: f64::NAN,
            verdict: Verdict::Fail,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn find(&self, prefix: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name.starts_with(prefix))
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "check,expected,got,tolerance,verdict")?;
        for c in &self.checks {
            writeln!(
                out,
                "{},{},{},{},{}",
                c.name,
                c.expected,
                fmt_f64(c.got),
                fmt_f64(c.tolerance),
                c.verdict
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

type Section = fn(&Validation, &mut Vec<Check>) -> Result<()>;

/// A configured validation run.
#[derive(Debug, Clone)]
pub struct Validation {
    cfg: SystemConfig,
    mc: McSettings,
    constants: Option<DerivedConstants>,
}

const NOMA: [(Scenario, User); 4] = [
    (Scenario::NomaSemiI, User::C),
    (Scenario::NomaSemiI, User::R),
    (Scenario::NomaSemiII, User::C),
    (Scenario::NomaSemiII, User::R),
];

impl Validation {
    pub fn new(cfg: SystemConfig, profile: Profile) -> Self {
        Self {
            cfg,
            mc: McSettings {
                n_samples: profile.samples(),
                ..McSettings::default()
            },
            constants: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.mc.seed = seed;
        self
    }

    pub fn with_samples(mut self, n: u64) -> Self {
        self.mc.n_samples = n;
        self
    }

    /// Checks the given constants instead of those the library derives.
    pub fn with_constants(mut self, k: DerivedConstants) -> Self {
        self.constants = Some(k);
        self
    }

    pub fn run(&self) -> Result<Report> {
        self.cfg.validate()?;
        self.mc.validate()?;
        let mut checks = Vec::new();
        specfun_checks(&mut checks, self.cfg.fading.m);
        self.table_checks(&mut checks)?;
        let sections: [Section; 5] = [
            Self::outage_checks,
            Self::rate_checks,
            Self::reir_checks,
            Self::high_snr_checks,
            Self::capacity_checks,
        ];
        for section in sections {
            section(self, &mut checks)?;
        }
        self.simulation_checks(&mut checks)?;
        Ok(Report { checks })
    }

    fn table_checks(&self, out: &mut Vec<Check>) -> Result<()> {
        if self.cfg.bandwidth.isac_hz() == 0.0 {
            out.push(Check::skip("constants", "no ISaC band"));
            return Ok(());
        }
        let got = match self.constants {
            Some(k) => k,
            None => derive_constants(&self.cfg)?,
        };
        let want = reference_constants(&self.cfg);
        let pairs = [
            ("a1", want.a1, got.a1),
            ("a2", want.a2, got.a2),
            ("a3", want.a3, got.a3),
            ("a4", want.a4, got.a4),
            ("a5", want.a5, got.a5),
            ("b1", want.b1, got.b1),
            ("b2", want.b2, got.b2),
            ("b3", want.b3, got.b3),
            ("lambda1", want.lambda1, got.lambda1),
            ("lambda2", want.lambda2, got.lambda2),
            ("lambda3", want.lambda3, got.lambda3),
            ("lambda4", want.lambda4, got.lambda4),
            ("lambda5", want.lambda5, got.lambda5),
            ("omega_c", want.omega_c, got.omega_c),
            ("omega_r", want.omega_r, got.omega_r),
            ("xi_r1", want.xi_r1, got.xi_r1),
        ];
        for (name, w, g) in pairs {
            out.push(Check::relative(format!("constants:{name}"), w, g, 1e-12));
        }
        Ok(())
    }

    fn outage_checks(&self, out: &mut Vec<Check>) -> Result<()> {
        let cfg = &self.cfg;
        if cfg.bandwidth.isac_hz() == 0.0 {
            out.push(Check::skip("op-definition", "no ISaC band"));
            return Ok(());
        }
        let t = cfg.thresholds;
        for user in [User::C, User::R] {
            let want = oma_op_reference(cfg, user, t.gamma_th_oma)?;
            let got = op_oma(cfg, user, t.gamma_th_oma)?.value;
            out.push(Check::close(
                format!("op-definition:oma-semi:{user}"),
                want,
                got,
                1e-9,
            ));
        }
        for (s, u) in NOMA {
            let want = noma_op_reference(cfg, s, u, t.gamma_th, t.gamma_sic)?;
            let got = op_noma(cfg, s, u, t.gamma_th, t.gamma_sic)?.value;
            out.push(Check::close(
                format!("op-definition:{s}:{u}"),
                want,
                got,
                1e-6,
            ));
        }
        Ok(())
    }

    fn rate_checks(&self, out: &mut Vec<Check>) -> Result<()> {
        let cfg = &self.cfg;
        if cfg.bandwidth.isac_hz() == 0.0 {
            return Ok(());
        }
        let band = cfg.isac_band()?;
        for user in [User::C, User::R] {
            let closed = rate_oma(cfg, user)?.value;
            let quad = rate_oma_quadrature(&band, user)?.value;
            out.push(Check::close(
                format!("rate-closed-form:oma-semi:{user}"),
                quad,
                closed,
                1e-6,
            ));
        }
        for (s, u) in NOMA {
            let b = cfg.for_scenario(s).isac_band()?;
            let quad = rate_noma_band(&b, s, u)?.value;
            if Some(u) == s.first_decoded() {
                match rate_noma_series(&b, s, u)? {
                    SeriesOutcome::Converged(r) => out.push(Check::relative(
                        format!("rate-series:{s}:{u}"),
                        quad,
                        r.value,
                        5e-3,
                    )),
                    SeriesOutcome::Skipped { .. } => out.push(Check::skip(
                        format!("rate-series:{s}:{u}"),
                        "series outside convergence",
                    )),
                }
            } else {
                let closed = rate_noma_closed_form(&b, s, u)?.value;
                out.push(Check::relative(
                    format!("rate-closed-form:{s}:{u}"),
                    quad,
                    closed,
                    1e-8,
                ));
            }
        }
        Ok(())
    }

    fn reir_checks(&self, out: &mut Vec<Check>) -> Result<()> {
        let cfg = &self.cfg;
        if cfg.bandwidth.isac_hz() == 0.0 {
            out.push(Check::close(
                "reir-zero-without-isac-band",
                0.0,
                reir_general(cfg)?.value,
                0.0,
            ));
            return Ok(());
        }
        let general = reir_general(cfg)?.value;
        out.push(Check::relative(
            "reir-conditional-route",
            general,
            reir_conditional(cfg)?.value,
            1e-6,
        ));
        if cfg.fading.m == 1 {
            out.push(Check::relative(
                "reir-rayleigh-closed-form",
                general,
                reir_rayleigh(cfg)?.value,
                1e-6,
            ));
        } else {
            out.push(Check::skip("reir-rayleigh-closed-form", "m != 1"));
        }
        let hi = with_echo_snr(cfg, 1e4)?;
        let g_hi = reir_general(&hi)?.value;
        if cfg.fading.m >= 3 {
            out.push(Check::relative(
                "reir-asymptotic-at-40dB",
                g_hi,
                reir_asymptotic(&hi)?.value,
                0.03,
            ));
        } else {
            out.push(Check::skip("reir-asymptotic-at-40dB", "m < 3"));
        }
        let slope = high_snr_slope(&cfg.radar)?.value;
        let h = 0.05;
        let mut hi2 = hi;
        hi2.power.p_bs *= f64::exp(h);
        let fd = (reir_general(&hi2)?.value - g_hi) / h;
        out.push(Check::relative("reir-high-snr-slope", slope, fd, 0.02));
        Ok(())
    }

    fn high_snr_checks(&self, out: &mut Vec<Check>) -> Result<()> {
        let cfg = &self.cfg;
        if cfg.bandwidth.isac_hz() == 0.0 {
            return Ok(());
        }
        let t = cfg.thresholds;
        for (s, u) in NOMA {
            let first = s.first_decoded().expect("NOMA");
            let d = diversity_order(cfg, s, u)?;
            if u == first {
                match fitted_slope(cfg, s, u) {
                    Ok(slope) => out.push(Check::close(
                        format!("diversity-slope:{s}:{u}"),
                        -d,
                        slope,
                        0.15,
                    )),
                    Err(e) => out.push(Check::error(format!("diversity-slope:{s}:{u}"), &e)),
                }
            } else {
                // second-decoded user: outage floors at its own link's term
                let mut loud = cfg.for_scenario(s);
                loud.pairing = crate::scenario::Pairing::AsGiven;
                set_power(
                    &mut loud,
                    first,
                    dbm_to_watts(watts_to_dbm_of(cfg, first) + 60.0),
                );
                let exact = op_noma(&loud, s, u, t.gamma_th, t.gamma_sic)?.value;
                let asym = asymptotic_op(&loud, s, u, t.gamma_th, t.gamma_sic)?.value;
                out.push(Check::relative(
                    format!("outage-floor:{s}:{u}"),
                    exact,
                    asym,
                    1e-3,
                ));
            }
        }
        Ok(())
    }

    fn capacity_checks(&self, out: &mut Vec<Check>) -> Result<()> {
        let mut cfg = self.cfg;
        for i in 0..=10 {
            let beta = i as f64 / 10.0;
            cfg.bandwidth.alpha_semi = 0.0;
            cfg.bandwidth.beta_semi = beta;
            cfg.bandwidth.epsilon_semi = 1.0 - beta;
            let fd = channel_capacity(&cfg, Scenario::FdIsac)?.0.value;
            let oma = channel_capacity(&cfg, Scenario::OmaSemi)?.0.value;
            let noma = channel_capacity(&cfg, Scenario::NomaSemiI)?.0.value;
            out.push(Check::at_most(
                format!("capacity-fd<=oma:beta={beta}"),
                oma,
                fd,
                1e-12,
            ));
            out.push(Check::at_most(
                format!("capacity-oma<=noma:beta={beta}"),
                noma,
                oma,
                1e-12,
            ));
        }
        Ok(())
    }

    fn simulation_checks(&self, out: &mut Vec<Check>) -> Result<()> {
        let cfg = &self.cfg;
        if cfg.bandwidth.isac_hz() == 0.0 {
            out.push(Check::close(
                "mc-reir-zero-without-isac-band",
                0.0,
                mc_reir(cfg, &self.mc, SicModel::Perfect)?.value,
                0.0,
            ));
            return Ok(());
        }
        let t = cfg.thresholds;
        let mut perfect = *cfg;
        perfect.power.varsigma_c = 0.0;
        perfect.power.varsigma_r = 0.0;
        for s in [
            Scenario::OmaSemi,
            Scenario::NomaSemiI,
            Scenario::NomaSemiII,
            Scenario::FdIsac,
        ] {
            let (g_th, g_sic) = if s.is_noma() {
                (t.gamma_th, t.gamma_sic)
            } else {
                (t.gamma_th_oma, t.gamma_sic)
            };
            let est = mc_scenario(&perfect, s, g_th, g_sic, &self.mc)?;
            let eff = perfect.for_scenario(s);
            for u in [User::C, User::R] {
                let (op, rate) = if s.is_noma() {
                    (
                        op_noma(&perfect, s, u, g_th, g_sic)?.value,
                        rate_noma(&perfect, s, u)?.value,
                    )
                } else {
                    (op_oma(&eff, u, g_th)?.value, rate_oma(&eff, u)?.value)
                };
                let mo = est.outage(u);
                let tol = 3.0 * mo.ci_halfwidth.unwrap_or(0.0);
                out.push(Check::close(
                    format!("mc-outage:{s}:{u}"),
                    op,
                    mo.value,
                    tol,
                ));
                let rtol = if rate < 0.5 { 0.01 } else { 0.01 * rate };
                out.push(Check::close(
                    format!("mc-rate:{s}:{u}"),
                    rate,
                    est.rate(u).value,
                    rtol,
                ));
            }
            if let Some(r) = est.reir {
                out.push(Check::relative(
                    format!("mc-reir:{s}"),
                    reir_general(&eff)?.value,
                    r.value,
                    0.01,
                ));
            }
        }
        // residual interference from imperfect SIC can only lower rates and REIR
        for v in [0.05, 0.2] {
            let mut imp = perfect;
            imp.power.varsigma_c = v;
            imp.power.varsigma_r = v;
            for s in [Scenario::NomaSemiI, Scenario::NomaSemiII] {
                let p = mc_scenario(&perfect, s, t.gamma_th, t.gamma_sic, &self.mc)?;
                let q = mc_scenario(&imp, s, t.gamma_th, t.gamma_sic, &self.mc)?;
                for u in [User::C, User::R] {
                    out.push(Check::at_most(
                        format!("imperfect-sic-rate:varsigma={v}:{s}:{u}"),
                        p.rate(u).value,
                        q.rate(u).value,
                        0.0,
                    ));
                }
                if let (Some(a), Some(b)) = (p.reir, q.reir) {
                    out.push(Check::at_most(
                        format!("imperfect-sic-reir:varsigma={v}:{s}"),
                        a.value,
                        b.value,
                        0.0,
                    ));
                }
            }
        }
        Ok(())
    }
}

fn specfun_checks(out: &mut Vec<Check>, m: u32) {
    let run = |out: &mut Vec<Check>, name: &str, f: &dyn Fn() -> Result<(f64, f64, f64)>| match f()
    {
        Ok((want, got, tol)) => out.push(Check::close(name, want, got, tol)),
        Err(e) => out.push(Check::error(name, &e)),
    };
    run(out, "specfun:gamma-complement", &|| {
        let mut worst = 0.0f64;
        for (a, x) in [(0.5, 0.2), (3.0, 2.5), (7.5, 11.0), (30.0, 25.0)] {
            worst = worst.max((reg_lower_gamma(a, x)? + reg_upper_gamma(a, x)? - 1.0).abs());
        }
        Ok((0.0, worst, 1e-14))
    });
    run(out, "specfun:en-recurrence", &|| {
        let mut worst = 0.0f64;
        for (n, x) in [(1u32, 0.3), (3, 2.5), (6, 0.05), (4, 40.0)] {
            let lhs = n as f64 * exp_integral_en(n + 1, x)? + x * exp_integral_en(n, x)?;
            worst = worst.max((lhs / (-x).exp() - 1.0).abs());
        }
        Ok((0.0, worst, 1e-12))
    });
    run(out, "specfun:gamma-recurrence", &|| {
        let mut worst = 0.0f64;
        for x in [0.3, 2.0, 7.3, 55.5] {
            worst = worst.max((ln_gamma(x + 1.0)? - ln_gamma(x)? - f64::ln(x)).abs());
        }
        Ok((0.0, worst, 1e-12))
    });
    run(out, "specfun:product-pdf-normalisation", &|| {
        let s = QuadratureSettings::default();
        let mf = m as f64;
        let mut fail = None;
        let mut f = |z: f64| match product_gamma_pdf(mf, z) {
            Ok(v) => v,
            Err(e) => {
                fail = Some(e);
                0.0
            }
        };
        let head = integrate(&mut f, 0.0, 1.0, &s)?.value;
        let tail = integrate_semi_infinite(&mut f, 1.0, 1.0, &s)?.value;
        if let Some(e) = fail {
            return Err(e);
        }
        Ok((1.0, head + tail, 1e-8))
    });
}

/// Closed-form constants recomputed from the raw configuration fields.
fn reference_constants(cfg: &SystemConfig) -> DerivedConstants {
    let g = &cfg.geometry;
    let p = &cfg.power;
    let r = &cfg.radar;
    let m = cfg.fading.m as f64;
    let bw = cfg.bandwidth.beta_semi * cfg.bandwidth.total_hz;
    let noise = cfg.noise.k_b * cfg.noise.temperature_k * bw;
    let lambda = SPEED_OF_LIGHT / g.f_c;
    let c_c = (lambda / (4.0 * PI)).powi(2);
    let c_r = r.sigma_rcs * lambda * lambda / (4.0 * PI).powi(3);
    let pl_c = p.g_c * c_c * g.d_c.powf(-g.alpha_c);
    let pl_r = p.g_c * c_c * g.d_r.powf(-g.alpha_c);
    let echo_gain = p.g_r * c_r * g.d_r.powf(-g.alpha_r);
    let residual = r.gamma_sq * bw * bw * r.sigma_tau_sq;
    let ei = p.p_bs * echo_gain * residual;
    let a1 = ei / pl_c;
    let a2 = noise / pl_c;
    let a3 = (g.d_r / g.d_c).powf(-g.alpha_c);
    let a4 = ei / pl_r;
    let a5 = noise / pl_r;
    let gs = cfg.thresholds.gamma_sic;
    DerivedConstants {
        m: cfg.fading.m,
        omega_c: m * (a1 + a2) / p.p_c,
        omega_r: m * (a4 + a5) / p.p_r,
        a1,
        a2,
        a3,
        a4,
        a5,
        b1: a4,
        b2: a5,
        b3: 1.0 / a3,
        lambda1: m * (a1 + a2) / p.p_c,
        lambda2: m * (a4 + a5) / p.p_r * (gs * a3 * p.p_r / p.p_c + 1.0),
        lambda3: m * (a4 + a5) / p.p_r,
        lambda4: m / p.p_c * (a1 + a2) * (gs * p.p_c / (a3 * p.p_r) + 1.0),
        lambda5: m * gs * (a4 + a5) / p.p_r,
        xi_r1: 2.0 * r.pulse_duration * bw * p.p_bs * p.g_r * c_r * residual / noise,
    }
}

fn gamma_density(m: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return if m == 1.0 { 1.0 } else { 0.0 };
    }
    (m * m.ln() + (m - 1.0) * x.ln() - m * x - ln_factorial(m as u32 - 1)).exp()
}

/// E[f(y) 1{y >= lo}] over a unit-mean Gamma(m, 1/m) gain.
fn expect(m: f64, lo: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    let s = QuadratureSettings::default()
        .with_rel_tol(1e-11)
        .with_abs_tol(1e-15);
    let mut fail = None;
    let mut g = |y: f64| match f(y) {
        Ok(v) => gamma_density(m, y) * v,
        Err(e) => {
            fail = Some(e);
            0.0
        }
    };
    let split = lo.max(1.0);
    let head = if lo < split {
        integrate(&mut g, lo, split, &s)?.value
    } else {
        0.0
    };
    let tail = integrate_semi_infinite(&mut g, split, 1.0, &s)?.value;
    match fail {
        Some(e) => Err(e),
        None => Ok(head + tail),
    }
}

fn oma_op_reference(cfg: &SystemConfig, user: User, g: f64) -> Result<f64> {
    let band = cfg.isac_band()?;
    let snr = band.power(user) * band.gain(user) / (band.mean_echo() + band.noise);
    let m = band.m as f64;
    // Pr{snr h < g} as the integral of the gain density up to g / snr
    let s = QuadratureSettings::default()
        .with_rel_tol(1e-12)
        .with_abs_tol(1e-300);
    Ok(integrate(|x| gamma_density(m, x), 0.0, g / snr, &s)?.value)
}

/// Outage from the SINR definitions: the conditional cdf of the first
/// user's gain integrated over the second user's gain.
fn noma_op_reference(
    cfg: &SystemConfig,
    s: Scenario,
    u: User,
    g_th: f64,
    g_sic: f64,
) -> Result<f64> {
    let band = cfg.for_scenario(s).isac_band()?;
    let first = s.first_decoded().expect("NOMA");
    let second = first.other();
    let m = band.m as f64;
    let (p1, g1) = (band.power(first), band.gain(first));
    let (p2, g2) = (band.power(second), band.gain(second));
    let floor = band.mean_echo() + band.noise;
    let need = move |g: f64, y: f64| g * (p2 * g2 * y + floor) / (p1 * g1);
    if u == first {
        expect(m, 0.0, &|y| reg_lower_gamma(m, m * need(g_th, y)))
    } else {
        let y0 = g_th * floor / (p2 * g2);
        Ok(1.0 - expect(m, y0, &|y| reg_upper_gamma(m, m * need(g_sic, y)))?)
    }
}

fn with_echo_snr(cfg: &SystemConfig, xi_target: f64) -> Result<SystemConfig> {
    let band = cfg.isac_band()?;
    let xi = band.xi_r1() * band.d_r.powf(-band.alpha_r);
    if !(xi > 0.0) {
        return Err(Error::Config(
            "the echo SNR is zero (sigma_tau_sq = 0)".into(),
        ));
    }
    let mut out = *cfg;
    out.power.p_bs *= xi_target / xi;
    Ok(out)
}

fn set_power(cfg: &mut SystemConfig, user: User, watts: f64) {
    match user {
        User::C => cfg.power.p_c = watts,
        User::R => cfg.power.p_r = watts,
    }
}

fn watts_to_dbm_of(cfg: &SystemConfig, user: User) -> f64 {
    crate::scenario::watts_to_dbm(match user {
        User::C => cfg.power.p_c,
        User::R => cfg.power.p_r,
    })
}

/// Least-squares slope of log10 OP against log10 P of the first-decoded
/// user. Power runs over two decades from where OP first drops below 1e-3;
/// the fit uses the last of them, in 1 dB steps.
fn fitted_slope(cfg: &SystemConfig, s: Scenario, u: User) -> Result<f64> {
    let t = cfg.thresholds;
    let at = |dbm: f64| -> Result<f64> {
        let mut c = *cfg;
        set_power(&mut c, u, dbm_to_watts(dbm));
        Ok(op_noma(&c, s, u, t.gamma_th, t.gamma_sic)?.value)
    };
    let base = watts_to_dbm_of(cfg, u).floor();
    let mut start = None;
    for k in 0..200 {
        let dbm = base - 40.0 + k as f64;
        if at(dbm)? < 1e-3 {
            start = Some(dbm);
            break;
        }
    }
    let start = start.ok_or_else(|| Error::Config("outage never drops below 1e-3".into()))?;
    let xs: Vec<f64> = (10..=20).map(|k| (start + k as f64) / 10.0).collect();
    let ys = xs
        .iter()
        .map(|x| Ok(at(x * 10.0)?.log10()))
        .collect::<Result<Vec<f64>>>()?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
