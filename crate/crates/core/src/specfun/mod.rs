//! Special functions and numerical integration used by the closed-form
//! expressions: gamma family, generalized exponential integrals, modified
//! Bessel functions of the second kind, the Gaussian Q-function and an
//! adaptive Gauss-Kronrod integrator.

mod bessel;
mod expint;
mod gamma;
mod normal;
mod product;
mod quad;

pub use bessel::{bessel_k, bessel_k0, bessel_k0_scaled, bessel_k1, bessel_k1_scaled};
pub use expint::{exp_integral_en, exp_integral_en_scaled};
pub use gamma::{
    digamma, ln_factorial, ln_gamma, ln_upper_gamma, reg_lower_gamma, reg_upper_gamma, upper_gamma,
    EULER_GAMMA,
};
pub use normal::gaussian_q;
pub use product::{
    meijer_cdf_product_gamma, meijer_rayleigh_reir_kernel, product_gamma_pdf, product_gamma_sf,
};
pub use quad::{
    integrate, integrate_semi_infinite, try_integrate, try_integrate_semi_infinite, QuadResult,
    QuadratureSettings,
};

pub(crate) use gamma::{binomial, lgamma};
