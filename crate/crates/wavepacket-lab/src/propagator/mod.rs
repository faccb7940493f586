//! Evolution of unit-frequency data by per-mode Hankel transforms.
//!
//! Data are stored as radial Fourier profiles ĉ^l_i(ρ) per harmonic (a
//! [`ModeSet`]). A [`FieldSampler`] evaluates u(t, rω) for e^{∓it√−Δ};
//! [`AxisymmetricSampler`] evaluates axisymmetric data directly in
//! cylindrical frequency coordinates, which is cheaper at large times.

mod axisym;
mod generators;
mod kernel;
mod modeset;
mod profile;
mod sampler;

pub use axisym::{AxisymmetricGrid, AxisymmetricSampler};
pub use generators::{
    knapp_cap, knapp_default_l_max, knapp_fourier, knapp_fourier_volume, make_knapp, make_radial_bump,
    make_random_family, make_random_localized, make_random_radial, split_half_waves, RandomFamily,
    RANDOM_TRIG_HALF_DEGREE,
};
pub use kernel::{radial_kernel, radial_kernel_orders, EngineOptions, RadialEngine, TimePhases};
pub use modeset::ModeSet;
pub use profile::{
    canonical_profile_rule, plateau, radial_bump, ProfileTerm, RadialProfile, BUMP_KAPPA, PROFILE_SUPPORT,
};
pub use sampler::{
    energy_norms, evaluate_field, hankel_mode, hankel_mode_with, time_derivative_data, write_field_dump, FieldSampler,
    Propagation,
};
