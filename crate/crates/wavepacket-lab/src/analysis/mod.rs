//! Space-time norms of sampled solutions and the estimate-verification harness.
//!
//! An [`EvaluationGrid`] fixes composite Gauss–Legendre nodes in t and r and an
//! angular rule; [`slice_norms`] and [`mixed_norm`] evaluate L^q_t L^r_x norms
//! over it, optionally inside a radial window following the light cone.
//! [`CubeSampler`] gives cube-localised L² masses for the dual-scale norms and
//! [`morawetz`] holds the weighted local-energy quantities. The `verify_*`
//! functions scan parameters, fit exponents and return [`EstimateReport`]s.

mod cubes;
mod grid;
pub mod morawetz;
mod norms;
mod report;
mod verify;

pub use cubes::{dual_scale_norm, CubeMasses, CubeSampler, CELLS_PER_UNIT};
pub use grid::{CubePartition, EvaluationGrid, GridSpec, RadialWindow};
pub use morawetz::{morawetz_integral, morawetz_negativity_scan, verify_energy_momentum_identity};
pub use norms::{lr_norm, lr_norm_fn, mixed_norm, slice_norms, time_profile, TimeProfile};
pub use report::{
    least_squares, log_log_fit, short_hash, EstimateReport, LinearFit, ScanPoint, Verdict, FLAT_FIT_RMS, MIN_R_SQUARED,
};
pub use verify::*;
