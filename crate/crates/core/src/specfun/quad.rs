use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances for adaptive quadrature. The run stops once the summed error
/// estimate is below `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSettings {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Outcome of an adaptive integration. `converged` is false when the
/// subdivision budget ran out before the tolerance was met; `value` then
/// holds the best estimate available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Converts a non-converged run into [`Error::Quadrature`].
    pub fn require(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature {
                estimate: self.value,
                abs_error: self.abs_error,
            })
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.is_finite() {
        return Err(domain(
            "integrate",
            format!("integrand not finite on [{a}, {b}]"),
        ));
    }
    Ok((value, err))
}

/// Adaptive 21-point Gauss-Kronrod integration of a fallible integrand on a
/// finite interval. Endpoints are never evaluated, so integrable endpoint
/// singularities are allowed.
pub fn try_integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(settings.rel_tol > 0.0 && settings.abs_tol > 0.0 && settings.max_subdivisions >= 1) {
        return Err(domain(
            "integrate",
            "tolerances must be positive and max_subdivisions >= 1",
        ));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain(
            "integrate",
            format!("bounds [{a}, {b}] must be finite"),
        ));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let (v, e) = gk21(&mut f, a, b)?;
    let mut evaluations = 21;
    let mut total = v;
    let mut total_err = e;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        error: e,
    });
    let mut splits = 0;
    while total_err > settings.abs_tol.max(settings.rel_tol * total.abs()) {
        if splits >= settings.max_subdivisions {
            return Ok(QuadResult {
                value: total,
                abs_error: total_err,
                evaluations,
                converged: false,
            });
        }
        let seg = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // interval exhausted at machine precision
            heap.push(seg);
            return Ok(QuadResult {
                value: total,
                abs_error: total_err,
                evaluations,
                converged: false,
            });
        }
        let (v1, e1) = gk21(&mut f, seg.a, mid)?;
        let (v2, e2) = gk21(&mut f, mid, seg.b)?;
        evaluations += 42;
        splits += 1;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        if splits % 64 == 0 {
            // resum to limit drift from the running updates
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    Ok(QuadResult {
        value: total,
        abs_error: total_err,
        evaluations,
        converged: true,
    })
}

/// Adaptive integration of an infallible integrand on [a, b].
pub fn integrate<F>(mut f: F, a: f64, b: f64, settings: &QuadratureSettings) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, settings)
}

/// Integral over [a, ∞) through x = a + s t/(1-t), t in [0, 1). The scale
/// `s` should be near the width over which f varies.
pub fn try_integrate_semi_infinite<F>(
    mut f: F,
    a: f64,
    scale: f64,
    settings: &QuadratureSettings,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(domain(
            "integrate_semi_infinite",
            format!("scale {scale} must be positive"),
        ));
    }
    try_integrate(
        |t| {
            let u = 1.0 - t;
            let x = a + scale * t / u;
            if !x.is_finite() {
                return Ok(0.0);
            }
            let v = f(x)?;
            if v == 0.0 {
                Ok(0.0)
            } else {
                Ok(v * scale / (u * u))
            }
        },
        0.0,
        1.0,
        settings,
    )
}

/// Infallible counterpart of [`try_integrate_semi_infinite`].
pub fn integrate_semi_infinite<F>(
    mut f: F,
    a: f64,
    scale: f64,
    settings: &QuadratureSettings,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), a, scale, settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(
            |x| 3.0 * x * x + 1.0,
            0.0,
            2.0,
            &QuadratureSettings::default(),
        )
        .unwrap();
        assert!((r.value - 10.0).abs() < 1e-13);
        assert!(r.converged);
    }

    #[test]
    fn endpoint_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let r = integrate(|x| x.ln(), 0.0, 1.0, &QuadratureSettings::default()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_gaussian() {
        let r =
            integrate_semi_infinite(|x| (-x * x).exp(), 0.0, 1.0, &QuadratureSettings::default())
                .unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let s = QuadratureSettings {
            max_subdivisions: 2,
            ..QuadratureSettings::default()
        };
        let r = integrate(|x| (1.0 / x).sin(), 1e-3, 1.0, &s).unwrap();
        assert!(!r.converged);
        assert!(r.require().is_err());
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let r = integrate(|_| f64::NAN, 0.0, 1.0, &QuadratureSettings::default());
        assert!(r.is_err());
    }
}
