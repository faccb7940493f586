//! Localisation of radial profiles into translated wave packets.
//!
//! A profile on (1/2, 2) is expanded in the period-4 Fourier series
//! ĉ(ρ) = Σ c_k e^{iπkρ/2}; each term evolves into the packet
//! ψ^l_{t−k/4}(r). [`fit_constants`] measures the constants in the
//! three-regime decay bounds for ψ on a finite grid.

mod bounds;
mod packets;
mod psi;

pub use bounds::{asymptotic_bound, bound_shape, fit_constants, ConstantRow, ConstantsTable, Regime, ScanGrid};
pub use packets::{
    eval_series, reconstruct_mode, to_packets, to_packets_fn, PacketCoefficients, DEFAULT_K_MAX, PACKET_TAIL_TOLERANCE,
};
pub use psi::{chi, psi, psi_grid, psi_with, PacketEnvelope, CHI_SUPPORT};
