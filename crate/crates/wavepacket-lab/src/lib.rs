//! Numerical laboratory for the spherical-harmonic and Hankel-transform
//! description of the free wave equation.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Bessel and Gegenbauer functions, Gauss–Legendre panels and
//!   an oscillatory quadrature driver.
//! * [`harmonics`]: real spherical-harmonic bases on S¹, S² and zonal S³,
//!   angular quadrature, the |Ω|^s calculus and dyadic angular projections.
//! * [`propagator`]: per-mode Hankel evolution of unit-frequency data, data
//!   generators (radial bump, Knapp block, random angular data) and field
//!   samplers.
//! * [`wavepackets`]: the radial Fourier-series localisation of profiles
//!   into translated packets ψ and the fitted asymptotic bounds for them.
//! * [`analysis`]: mixed-norm, dual-scale and Morawetz quadratures and the
//!   estimate-verification harness producing [`analysis::EstimateReport`]s.
//! * [`cli`]: configuration and orchestration used by the `wavepacket-lab`
//!   binary.

pub mod analysis;
pub mod cli;
mod error;
pub mod harmonics;
mod linalg;
pub mod propagator;
pub mod specfun;
pub mod wavepackets;

pub use error::{LabError, Result};
