//! Numerical tolerances shared across the crate.

/// Norm drift accepted after an operation that promises normalisation.
pub const NORM: f64 = 1e-10;

/// Imaginary residue accepted on the expectation of a Hermitian operator.
pub const HERMITIAN_IMAG: f64 = 1e-10;

/// Population of the top Fock levels above which a displacement is treated
/// as having run into the truncation edge.
pub const TRUNCATION_EDGE: f64 = 1e-6;

/// Number of top Fock levels inspected by the truncation guard.
pub const TRUNCATION_EDGE_LEVELS: usize = 2;

/// Branch probability below which a measurement outcome is not renormalised.
pub const DEGENERATE_BRANCH: f64 = 1e-14;

/// Excited-state population tolerated on an ancilla that must start in `|g>`.
pub const ANCILLA_RESET: f64 = 1e-8;

/// Smallest projection probability accepted before conditional tomography.
pub const MIN_PROJECTION: f64 = 0.01;

/// Largest `exp(-|beta|^2)` for which `{|0>, |beta>}` is treated as a qubit.
pub const ENCODING_OVERLAP: f64 = 0.05;

/// Default Fock truncation per cavity (`N_max = 30`).
pub const DEFAULT_CAVITY_DIM: usize = 31;
