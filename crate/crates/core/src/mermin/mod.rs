//! Five-party Mermin operator over three qubits and two cat-encoded cavities.
//!
//! Party order is `(Q1, Q2, Q3, S1, S2)` in the logical basis where
//! `|up>` is `|e>` for Q1, `|g>` for Q2 and Q3, `|0>` for S1 and `|beta2>`
//! for S2, so the generated state reads `(|up^5> + e^{-i theta} |down^5>)/sqrt 2`.

mod bounds;
mod expectation;
mod nelder_mead;
mod optimize;
mod pauli;
mod plan;
mod sampling;
mod sweeps;
mod terms;

pub use bounds::{classical_bound_bruteforce, classical_extremes, four_partite_bound_check, FourPartiteReport};
pub use expectation::{bell_expectation, outcome_distribution, term_expectation, term_expectations, OUTCOMES};
pub use nelder_mead::{nelder_mead, SimplexOptions, SimplexResult};
pub use optimize::{optimize_bell, OptimizeBounds, OptimizeOptions, OptimizeResult, TracePoint};
pub use pauli::{ghz5, pauli_bell, pauli_word_expectation};
pub use plan::{MeasurementPlan, YDisplacement};
pub use sampling::{sample_bell, sample_correlation, BellSample, CorrelationEstimate};
pub use sweeps::{
    adequate_dim, bell_theta_sweep, fit_sinusoid, ideal_bell_vs_amplitude, max_over_theta, measurement_encoding, sigma_y_single_cavity,
    theta_grid, AmplitudePoint,
    SinusoidFit, ThetaMax,
};
pub use terms::{enumerate_terms, BellTerm, Letter};
