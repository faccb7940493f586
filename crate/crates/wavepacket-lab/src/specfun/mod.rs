//! Special functions and quadrature engines.

mod bessel;
mod gegenbauer;
mod oscillatory;
mod quadrature;

pub(crate) use bessel::ln_gamma_half;
pub use bessel::{
    bessel_j, bessel_j_asymptotic, bessel_j_halfint_integral, bessel_j_halfint_integral_complex, bessel_j_orders,
    bessel_j_poisson, check_bessel_recursion, BesselOrder,
};
pub(crate) use gegenbauer::gegenbauer_unchecked;
pub use gegenbauer::{gegenbauer, gegenbauer_recurrence_residual};
pub use oscillatory::{oscillatory_integrate, OscillatoryOptions, OscillatoryResult};
pub use quadrature::{gauss_legendre_reference, QuadratureRule};
