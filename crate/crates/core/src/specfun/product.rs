//! Distribution of X = |h_rd|^2 |h_ru|^2, the product of two independent
//! unit-mean Gamma(m, 1/m) power gains. Its density is
//! f(z) = 2 m^{2m} / Γ(m)^2 z^{m-1} K0(2 m sqrt z), and its CDF is the
//! Meijer-G function G^{21}_{13}(m^2 x | 1; m, m, 0) / Γ(m)^2. The CDF is
//! evaluated by integrating the density with z = t^2, which removes the
//! logarithmic behaviour of K0 at the origin.

use super::bessel::bessel_k0_scaled;
use super::expint::exp_integral_en_scaled;
use super::gamma::lgamma;
use super::quad::{try_integrate, try_integrate_semi_infinite, QuadratureSettings};
use crate::error::{domain, Result};

fn check(func: &'static str, m: f64, x: f64) -> Result<()> {
    if !(m >= 0.5) || !m.is_finite() {
        return Err(domain(
            func,
            format!("fading parameter m = {m} must be >= 0.5"),
        ));
    }
    if !(x >= 0.0) {
        return Err(domain(func, format!("x = {x} must be non-negative")));
    }
    Ok(())
}

fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
        .with_rel_tol(1e-13)
        .with_abs_tol(1e-300)
}

// Density of t = sqrt(X): 4 m^{2m} / Γ(m)^2 t^{2m-1} K0(2 m t).
fn sqrt_density(m: f64, ln_pref: f64, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let arg = 2.0 * m * t;
    let ln_v = ln_pref + (2.0 * m - 1.0) * t.ln() + bessel_k0_scaled(arg)?.ln() - arg;
    Ok(ln_v.exp())
}

fn ln_prefactor(m: f64) -> f64 {
    4f64.ln() + 2.0 * m * m.ln() - 2.0 * lgamma(m)
}

/// Density of the product of two unit-mean Gamma(m, 1/m) variables.
pub fn product_gamma_pdf(m: f64, z: f64) -> Result<f64> {
    check("product_gamma_pdf", m, z)?;
    if z == 0.0 {
        return Ok(if m <= 1.0 { f64::INFINITY } else { 0.0 });
    }
    let arg = 2.0 * m * z.sqrt();
    let ln_v = 2f64.ln() + 2.0 * m * m.ln() - 2.0 * lgamma(m)
        + (m - 1.0) * z.ln()
        + bessel_k0_scaled(arg)?.ln()
        - arg;
    Ok(ln_v.exp())
}

fn lower_part(m: f64, x: f64) -> Result<f64> {
    let lp = ln_prefactor(m);
    let r = try_integrate(|t| sqrt_density(m, lp, t), 0.0, x.sqrt(), &settings())?;
    r.require()
}

fn upper_part(m: f64, x: f64) -> Result<f64> {
    let lp = ln_prefactor(m);
    let r = try_integrate_semi_infinite(|t| sqrt_density(m, lp, t), x.sqrt(), 1.0, &settings())?;
    r.require()
}

/// CDF of the product of two unit-mean Gamma(m, 1/m) variables, i.e.
/// G^{21}_{13}(m^2 x | 1; m, m, 0) / Γ(m)^2.
pub fn meijer_cdf_product_gamma(m: f64, x: f64) -> Result<f64> {
    check("meijer_cdf_product_gamma", m, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    if x <= 1.0 {
        Ok(lower_part(m, x)?.clamp(0.0, 1.0))
    } else {
        Ok((1.0 - upper_part(m, x)?).clamp(0.0, 1.0))
    }
}

/// Survival function 1 - F(x) of the same product, accurate in the far tail.
pub fn product_gamma_sf(m: f64, x: f64) -> Result<f64> {
    check("product_gamma_sf", m, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x <= 1.0 {
        Ok((1.0 - lower_part(m, x)?).clamp(0.0, 1.0))
    } else {
        Ok(upper_part(m, x)?.clamp(0.0, 1.0))
    }
}

/// Kernel of the Rayleigh (m = 1) ergodic estimation rate,
/// K(a) = ∫_0^∞ (1 - F_1(a z)) / (1 + z) dz, a > 0.
///
/// Conditioning on one exponential factor u turns the inner integral into
/// e^{a/u} E1(a/u), so K(a) = ∫_0^∞ e^{-u} e^{a/u} E1(a/u) du. This equals
/// the G^{13}_{31} form of the Rayleigh estimation rate.
pub fn meijer_rayleigh_reir_kernel(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(
            "meijer_rayleigh_reir_kernel",
            format!("a = {a} must be positive"),
        ));
    }
    let r = try_integrate_semi_infinite(
        |u| {
            if u <= 0.0 {
                return Ok(0.0);
            }
            Ok((-u).exp() * exp_integral_en_scaled(1, a / u)?)
        },
        0.0,
        1.0,
        &settings(),
    )?;
    r.require()
}
