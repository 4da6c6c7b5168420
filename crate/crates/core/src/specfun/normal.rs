use std::f64::consts::SQRT_2;

/// Gaussian Q-function, the upper tail of the standard normal distribution.
pub fn gaussian_q(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}
