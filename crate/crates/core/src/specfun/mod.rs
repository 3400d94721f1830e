//! Special functions and quadrature engines.

pub mod bessel;
pub mod hermite;
pub mod quadrature;

pub use bessel::bessel_k0_scaled;
pub use hermite::{hermite_functions, phi_n};
pub use quadrature::{integrate_1d, integrate_2d, QuadEstimate, QuadScheme, QuadratureSpec};
