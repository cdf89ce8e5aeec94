//! Ideal-gate primitives of the generation and readout sequence.
//!
//! Every gate is an instantaneous unitary. Qubit rotations use
//! `R_n(angle) = exp(-i angle (cos(phi) X + sin(phi) Y) / 2)` with `|g>` as
//! basis index 0, so `R_y(pi/2)|g> = (|g> + |e>)/sqrt(2)`.

mod displacement;
mod gates;
mod measure;

pub use displacement::{displace, displace_vector, displace_with_limit, displacement_matrix, edge_population};
pub use gates::{
    conditional_cavity_phase, conditional_phase_matrix, conditional_qubit_rotation, conditional_rotation_matrix,
    rotate_qubit, rotation_matrix, BlochAxis,
};
pub use measure::{measure_qubit, parity_map, Branch, ParityProtocol, QubitMeasurement};
