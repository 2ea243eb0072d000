//! Simulation library for a pair of capacitively coupled transmons, each
//! truncated to its three lowest energy levels and each immersed in its own
//! Markovian bosonic bath.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense complex-matrix primitives (Kronecker products,
//!   Hermitian eigendecompositions, partial transposes, matrix functions);
//! - [`circuit`]: transmon Hamiltonians, the qutrit truncation, and the
//!   composite two-transmon system;
//! - [`bath`]: Ohmic spectral densities, thermal transition rates, and the
//!   jump channels of the dissipator;
//! - [`dynamics`]: GKSL time evolution, the vectorized Liouvillian, and the
//!   steady state;
//! - [`measures`]: coherence and entanglement monotones evaluated on states
//!   and trajectories;
//! - [`power`]: the entanglement generating power functional and the
//!   random-separable-state search that maximizes it;
//! - [`states`]: named initial states used throughout.
//!
//! Energies are measured in units of the transmon charging energy and times
//! in the inverse of that energy scale (`hbar = 1`), so every frequency-like
//! quantity in the API is dimensionless.

pub mod bath;
pub mod circuit;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod measures;
pub mod power;
pub mod states;

pub use error::{Error, Result};

/// Shorthand for the complex scalar type used everywhere in the crate.
pub type C64 = num_complex::Complex64;

/// Crate version, as compiled; recorded in output metadata by front ends.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
