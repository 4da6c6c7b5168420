use std::f64::consts::PI;

use super::{Method, MetricResult};
use crate::error::{domain, Result};
use crate::specfun::gaussian_q;

/// M-PSK bit-error approximation a Q(sqrt(b γ)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerParams {
    pub order: u32,
    pub a_ber: f64,
    pub b_ber: f64,
}

impl BerParams {
    /// a = 2 / log2 M and b = 2 log2 M sin(π/M). With `standard_psk` the
    /// textbook sin²(π/M) is used instead.
    pub fn new(order: u32, standard_psk: bool) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() {
            return Err(domain(
                "BerParams::new",
                format!("PSK order {order} must be a power of two >= 2"),
            ));
        }
        let bits = order.trailing_zeros() as f64;
        let s = (PI / order as f64).sin();
        Ok(Self {
            order,
            a_ber: 2.0 / bits,
            b_ber: 2.0 * bits * if standard_psk { s * s } else { s },
        })
    }
}

pub fn ber_mpsk(params: &BerParams, gamma: f64) -> Result<MetricResult> {
    if !(gamma >= 0.0) {
        return Err(domain(
            "ber_mpsk",
            format!("gamma = {gamma} must be non-negative"),
        ));
    }
    Ok(MetricResult::probability(
        params.a_ber * gaussian_q((params.b_ber * gamma).sqrt()),
        Method::Analytic,
    ))
}
