//! Numerical substrate shared by the rest of the crate.

mod airy;
mod linalg;
mod quadrature;

pub use airy::{airy, AiryValue, AIRY_MAX, AIRY_MIN, NEGATIVE_ASYMPTOTIC_SWITCH, POSITIVE_ASYMPTOTIC_SWITCH};
pub use linalg::Matrix;
pub use quadrature::{
    integrate_1d, integrate_2d, integrate_line, GaussLegendre, Integrand2d, LineIntegral, QuadratureSpec,
    Rect, TRUNCATION_RATIO,
};

/// `sin(u)/u`, continued analytically through `u = 0`.
#[inline]
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        libm::sin(u) / u
    }
}
