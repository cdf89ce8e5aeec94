//! Hybrid GHZ generation: sequence execution, analytic target, cat-amplitude
//! extraction, and chain extension by one party at a time.

mod beta;
mod chain;
mod sequence;
mod target;

pub use beta::{extract_beta, extract_beta_with, BetaSearch};
pub use chain::{extend_with_cavity, extend_with_qubit};
pub use sequence::{
    generate_ghz, n_axis_azimuth, phi2_for_beta_magnitude, KerrMode, SequenceParams, PAPER_ALPHA, PAPER_BETA1, PAPER_BETA2,
};
pub use target::{analytic_target_state, CatEncoding};
