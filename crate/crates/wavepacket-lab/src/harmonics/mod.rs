//! Real spherical harmonics on S¹, S² and zonal S³, angular quadrature, the
//! |Ω|^s calculus and dyadic angular projections.
//!
//! Inner products on the sphere use the normalised measure dω/|S^{n-1}|, so
//! the basis is orthonormal and Σ_i |Y^l_i(ω)|² = dim 𝒴_l. The polar axis is
//! the first coordinate axis in every dimension.

mod basis;
mod calculus;
mod quadrature;
mod sphere_function;
mod synth;

pub(crate) use basis::zonal_table;
pub use basis::{
    addition_theorem_residual, all_indices, dim_y, eigenvalue, eval_basis, flat_offset, legendre_single, legendre_slot,
    legendre_table, point_s2, sphere_area, zonal, zonal_s3, HarmonicIndex, SUPPORTED_DIMS,
};
pub use calculus::{
    bernstein_ratio, dyadic_project, hs_omega_norm, omega_power, partition_constants, theta0, DyadicLevel,
    BERNSTEIN_CONSTANT,
};
pub use quadrature::{AngularLayout, AngularQuadrature};
pub use sphere_function::SphereFunction;
pub use synth::{flatten, sup_norm, GridSynthesizer};
