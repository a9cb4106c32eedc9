//! Special functions and quadrature engines.

mod oscillatory;
mod quadrature;
mod special;

pub use oscillatory::{integrate_oscillatory, OscillatoryKernel};
pub use quadrature::{
    integrate_adaptive, integrate_semi_infinite, integrate_semi_infinite_scaled, IntegralResult,
    QuadValue, QuadratureSpec,
};
pub use special::{bessel_j, bessel_j_scaled, bessel_j_zero, gamma_fn, BesselOrder};
