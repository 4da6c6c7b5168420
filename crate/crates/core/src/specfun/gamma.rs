use std::f64::consts::PI;
use std::sync::OnceLock;

use super::expint::exp_integral_en;
use crate::error::{domain, Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
// published coefficients, kept digit for digit
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const TERM_EPS: f64 = 1e-15;
const MAX_ITER: usize = 100_000;
const FPMIN: f64 = 1e-300;

const LN_FACT_TABLE_LEN: usize = 171;

fn ln_fact_table() -> &'static [f64; LN_FACT_TABLE_LEN] {
    static TABLE: OnceLock<[f64; LN_FACT_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; LN_FACT_TABLE_LEN];
        let mut f = 1.0f64;
        for (n, slot) in t.iter_mut().enumerate().skip(1) {
            f *= n as f64;
            *slot = f.ln();
        }
        t
    })
}

/// ln(n!), exact to rounding for n <= 170.
pub fn ln_factorial(n: u32) -> f64 {
    let n = n as usize;
    if n < LN_FACT_TABLE_LEN {
        ln_fact_table()[n]
    } else {
        lgamma(n as f64 + 1.0)
    }
}

/// ln Γ(x) for x > 0 without argument checks.
pub(crate) fn lgamma(x: f64) -> f64 {
    if x == x.floor() && x >= 1.0 && x <= LN_FACT_TABLE_LEN as f64 {
        return ln_fact_table()[x as usize - 1];
    }
    if x < 0.5 {
        // reflection, valid for 0 < x < 0.5
        return (PI / (PI * x).sin()).ln() - lgamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Natural logarithm of the gamma function, defined for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "ln_gamma",
            format!("x = {x} must be positive and finite"),
        ));
    }
    Ok(lgamma(x))
}

/// Binomial coefficient C(n, k) as a float.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

// Power series for the lower incomplete gamma; returns the bare sum so that
// P(a,x) = sum * exp(-x + a ln x - ln Γ(a)).
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * TERM_EPS {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        func: "reg_lower_gamma series",
        iterations: MAX_ITER,
    })
}

// Lentz continued fraction for the upper incomplete gamma; returns h with
// Q(a,x) = h * exp(-x + a ln x - ln Γ(a)).
fn upper_cf(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < TERM_EPS {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        func: "reg_upper_gamma continued fraction",
        iterations: MAX_ITER,
    })
}

fn check_pq(func: &'static str, a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(func, format!("shape a = {a} must be positive")));
    }
    if !(x >= 0.0) {
        return Err(domain(
            func,
            format!("argument x = {x} must be non-negative"),
        ));
    }
    Ok(())
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
pub fn reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    check_pq("reg_lower_gamma", a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let pref = -x + a * x.ln() - lgamma(a);
    if x < a + 1.0 {
        Ok((lower_series(a, x)? * pref.exp()).min(1.0))
    } else {
        Ok((1.0 - upper_cf(a, x)? * pref.exp()).max(0.0))
    }
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a).
pub fn reg_upper_gamma(a: f64, x: f64) -> Result<f64> {
    check_pq("reg_upper_gamma", a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let pref = -x + a * x.ln() - lgamma(a);
    if x < a + 1.0 {
        Ok((1.0 - lower_series(a, x)? * pref.exp()).max(0.0))
    } else {
        Ok((upper_cf(a, x)? * pref.exp()).min(1.0))
    }
}

/// ln Γ(a, x) for a > 0, x >= 0. Stays finite where Γ(a, x) itself underflows.
pub fn ln_upper_gamma(a: f64, x: f64) -> Result<f64> {
    check_pq("ln_upper_gamma", a, x)?;
    if x == 0.0 {
        return Ok(lgamma(a));
    }
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    if x < a + 1.0 {
        let p = lower_series(a, x)? * (-x + a * x.ln() - lgamma(a)).exp();
        Ok((-p).ln_1p() + lgamma(a))
    } else {
        Ok(-x + a * x.ln() + upper_cf(a, x)?.ln())
    }
}

/// Non-normalized upper incomplete gamma Γ(a, x).
///
/// For a > 0 any x >= 0 is accepted. For a <= 0 the argument must be
/// positive; non-positive integer orders go through Γ(-k, x) = E_{k+1}(x) / x^k
/// and other negative orders through the downward recurrence
/// Γ(a, x) = (Γ(a+1, x) - x^a e^{-x}) / a.
pub fn upper_gamma(a: f64, x: f64) -> Result<f64> {
    if !a.is_finite() {
        return Err(domain(
            "upper_gamma",
            format!("order a = {a} must be finite"),
        ));
    }
    if a > 0.0 {
        return Ok(ln_upper_gamma(a, x)?.exp());
    }
    if !(x > 0.0) {
        return Err(domain(
            "upper_gamma",
            format!("argument x = {x} must be positive when a = {a} <= 0"),
        ));
    }
    if a == a.floor() {
        let k = (-a) as u32;
        return Ok(exp_integral_en(k + 1, x)? / x.powi(k as i32));
    }
    let n = (-a).ceil() as i32;
    let mut g = upper_gamma(a + n as f64, x)?;
    for j in (0..n).rev() {
        let aj = a + j as f64;
        g = (g - x.powf(aj) * (-x).exp()) / aj;
    }
    Ok(g)
}

/// Digamma function ψ(x), for x not a non-positive integer.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() || (x <= 0.0 && x == x.floor()) {
        return Err(domain(
            "digamma",
            format!("x = {x} is a pole or not finite"),
        ));
    }
    if x < 0.0 {
        return Ok(digamma(1.0 - x)? - PI / (PI * x).tan());
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    let tail = x2
        * (1.0 / 12.0
            - x2 * (1.0 / 120.0
                - x2 * (1.0 / 252.0
                    - x2 * (1.0 / 240.0
                        - x2 * (1.0 / 132.0 - x2 * (691.0 / 32_760.0 - x2 / 12.0))))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}
