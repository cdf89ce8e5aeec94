//! Numerical toolkit for a five-party hybrid GHZ experiment: three two-level
//! transmon qubits and two truncated bosonic cavity modes.
//!
//! The crate is organised bottom-up:
//!
//! * [`fockspace`] tensor-product state vectors over qubit and oscillator modes,
//! * [`device`] dispersive/Kerr parameters and the diagonal Hamiltonian,
//! * [`pulsesim`] ideal gates (displacements, rotations, parity mapping),
//! * [`ghzbuilder`] the generation sequence, analytic target and chain extension,
//! * [`tomography`] displaced parity and (conditional) Wigner functions,
//! * [`mermin`] the 16-term Bell operator, bounds, sweeps, sampling and optimisation,
//! * [`detection`] readout/parity fidelity model and Bell-signal visibility.

pub mod detection;
pub mod device;
pub mod error;
pub mod fockspace;
pub mod ghzbuilder;
pub mod mermin;
pub mod pulsesim;
pub mod tolerance;
pub mod tomography;

pub use error::{Error, Result};
pub use num_complex::Complex64;
