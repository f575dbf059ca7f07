//! Photon blockade in two coupled driven Kerr cavities.
//!
//! The crate builds the effective Kerr Hamiltonian (or the rotating-frame
//! model with explicit mechanical modes), solves the Lindblad master
//! equation for steady states and trajectories, and extracts photon
//! statistics: equal-time and delayed `g2`, the Cauchy-Schwarz witness,
//! Bell-CHSH parameters and Bell-state fidelities. A perturbative
//! weak-drive solver provides closed-form amplitudes as an independent
//! check on the numerics.

pub mod analytic;
pub mod bell;
pub mod correlations;
pub mod error;
pub mod hilbert;
pub mod lindblad;
pub mod model;
pub mod sweep;

pub use error::{Error, Result};
