//! Single-photon excitation of surface plasmon polaritons in attenuated
//! reflection (Otto and Kretschmann-Raether) geometries.
//!
//! The crate is organised bottom-up:
//!
//! - [`materials`]: Drude permittivity of the metal and the layer stack.
//! - [`dispersion`]: SPP wavevector, decay constants, mode matching, group velocity.
//! - [`layered_modes`]: SPP and three-layer mode profiles and their overlap.
//! - [`coupling`]: transfer-matrix coefficients, coupling `g(ω)`, thickness optimisation.
//! - [`propagation`]: lossy propagation of the excited SPP wavepacket.
//! - [`statistics`]: counting moments and `g²(0)` under loss.
//! - [`config`]: the line-oriented material/sweep configuration grammar.
//!
//! All quantities are SI: frequencies in rad/s, lengths in metres.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod coupling;
pub mod dispersion;
mod error;
pub mod layered_modes;
pub mod materials;
mod numeric;
pub mod propagation;
pub mod statistics;

pub use num_complex::Complex64;

pub use crate::config::{ConfigFile, Section, SectionKind};
pub use crate::coupling::{
    deformation_metrics, optimize_thickness, penetration_factor, transfer_coefficients,
    DeformationReport, ThicknessOptimum, TransferCoefficients,
};
pub use crate::dispersion::{
    group_velocity, matching_angle, matching_limit, spp_wavevector_lossless, spp_wavevector_lossy,
    MatchCondition, SppWavevector,
};
pub use crate::error::{Error, Result};
pub use crate::layered_modes::{
    overlap, spp_profile, three_layer_profile, FresnelPair, ModeProfile, Piece, Term,
};
pub use crate::materials::{Geometry, LayerStack, MaterialRegistry, PermittivityModel};
pub use crate::propagation::{
    commutator_check, detector_counts, flux, sigma_from_bandwidth, temporal_profile,
    PropagationResult, WavepacketSpec,
};
pub use crate::statistics::{
    apply_loss_chain, fock_loss_distribution, fock_loss_oracle, g2_classical_bound_check, g2_fock,
    Classification, CountingMoments, LossChain,
};

/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
