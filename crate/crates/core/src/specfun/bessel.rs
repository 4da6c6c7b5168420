use std::f64::consts::PI;

use super::gamma::EULER_GAMMA;
use crate::error::{domain, Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

// Temme's series at order zero, valid for 0 < x <= 2. Returns (K0, K1).
fn temme_k01(x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let mut ff = -EULER_GAMMA - x2.ln();
    let mut sum = ff;
    let mut p = 0.5;
    let mut q = 0.5;
    let mut c = 1.0;
    let d = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi);
        c *= d / fi;
        p /= fi;
        q /= fi;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            return Ok((sum, sum1 * 2.0 / x));
        }
    }
    Err(Error::NoConvergence {
        func: "bessel_k temme series",
        iterations: MAX_ITER,
    })
}

// Steed's continued fraction CF2 at order zero for x > 2.
// Returns (e^x K0, e^x K1).
fn steed_k01_scaled(x: f64) -> Result<(f64, f64)> {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            let h = a1 * h;
            let k0 = (PI / (2.0 * x)).sqrt() / s;
            let k1 = k0 * (x + 0.5 - h) / x;
            return Ok((k0, k1));
        }
    }
    Err(Error::NoConvergence {
        func: "bessel_k continued fraction",
        iterations: MAX_ITER,
    })
}

fn check(func: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0) || x.is_nan() {
        return Err(domain(func, format!("x = {x} must be positive")));
    }
    Ok(())
}

fn k01_scaled(x: f64) -> Result<(f64, f64)> {
    if x <= 2.0 {
        let (k0, k1) = temme_k01(x)?;
        let e = x.exp();
        Ok((k0 * e, k1 * e))
    } else {
        steed_k01_scaled(x)
    }
}

/// Modified Bessel function of the second kind K0(x), x > 0.
pub fn bessel_k0(x: f64) -> Result<f64> {
    check("bessel_k0", x)?;
    if x <= 2.0 {
        Ok(temme_k01(x)?.0)
    } else {
        Ok(steed_k01_scaled(x)?.0 * (-x).exp())
    }
}

/// Modified Bessel function of the second kind K1(x), x > 0.
pub fn bessel_k1(x: f64) -> Result<f64> {
    check("bessel_k1", x)?;
    if x <= 2.0 {
        Ok(temme_k01(x)?.1)
    } else {
        Ok(steed_k01_scaled(x)?.1 * (-x).exp())
    }
}

/// e^x K0(x).
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    check("bessel_k0_scaled", x)?;
    Ok(k01_scaled(x)?.0)
}

/// e^x K1(x).
pub fn bessel_k1_scaled(x: f64) -> Result<f64> {
    check("bessel_k1_scaled", x)?;
    Ok(k01_scaled(x)?.1)
}

/// K_n(x) for integer order through forward recurrence from K0 and K1,
/// which is stable for this function family.
pub fn bessel_k(n: u32, x: f64) -> Result<f64> {
    check("bessel_k", x)?;
    let (k0, k1) = k01_scaled(x)?;
    let scale = (-x).exp();
    if n == 0 {
        return Ok(k0 * scale);
    }
    let (mut km, mut k) = (k0, k1);
    for j in 1..n {
        let next = km + 2.0 * j as f64 / x * k;
        km = k;
        k = next;
    }
    Ok(k * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((bessel_k0(1.0).unwrap() - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!((bessel_k1(1.0).unwrap() - 0.601_907_230_197_234_6).abs() < 1e-15);
        assert!((bessel_k0(0.01).unwrap() - 4.721_244_730_161_095).abs() < 1e-13);
        assert!((bessel_k0(5.0).unwrap() - 3.691_098_334_042_594e-3).abs() < 1e-17);
        assert!((bessel_k1(10.0).unwrap() - 1.864_877_345_382_558e-5).abs() < 1e-19);
        assert!((bessel_k(2, 1.0).unwrap() - 1.624_838_898_635_177).abs() < 1e-14);
        assert!(bessel_k0(0.0).is_err());
    }

    #[test]
    fn branches_agree_at_switch_point() {
        let lo = temme_k01(2.0).unwrap();
        let hi = steed_k01_scaled(2.0).unwrap();
        let e = (-2.0f64).exp();
        assert!((lo.0 - hi.0 * e).abs() < 1e-15);
        assert!((lo.1 - hi.1 * e).abs() < 1e-15);
    }

    #[test]
    fn wronskian_like_identity() {
        // I0 K1 + I1 K0 = 1/x with I from its power series
        for &x in &[0.3f64, 1.5, 2.5, 6.0] {
            let (mut i0, mut i1) = (0.0, 0.0);
            let mut t0 = 1.0f64;
            for k in 0..60 {
                if k > 0 {
                    t0 *= (x / 2.0).powi(2) / (k * k) as f64;
                }
                i0 += t0;
                i1 += t0 * (x / 2.0) / (k + 1) as f64;
            }
            let w = i0 * bessel_k1(x).unwrap() + i1 * bessel_k0(x).unwrap();
            assert!((w * x - 1.0).abs() < 1e-13, "x={x}");
        }
    }
}
