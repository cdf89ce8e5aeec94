//! Tensor-product Hilbert space over qubit and truncated-oscillator modes.
//!
//! Basis ordering is row-major over the declared mode order: the last mode
//! varies fastest. For the canonical layout `(Q1, Q2, Q3, S1, S2)` the flat
//! index of `|q1 q2 q3 n1 n2>` is `(((q1*2 + q2)*2 + q3)*N + n1)*N + n2`.

mod coherent;
mod layout;
mod operators;
mod state;

pub use coherent::{coherent_amplitudes, coherent_state, poisson_tail, CoherentAmplitudes};
pub use layout::{ModeKind, ModeSpec, SystemLayout, CANONICAL_LABELS};
pub use operators::{
    annihilation, expectation, number_diagonal, parity_diagonal, DiagonalOperator, Observable,
};
pub use state::{ground_state, StateVector};
