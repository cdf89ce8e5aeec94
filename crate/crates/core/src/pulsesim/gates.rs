use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fockspace::{ModeKind, StateVector};
use crate::{Error, Result};

/// Rotation axis in the equatorial plane of the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochAxis {
    /// Angle from the x-axis, radians.
    pub azimuth: f64,
}

impl BlochAxis {
    pub const X: Self = Self { azimuth: 0.0 };
    pub const Y: Self = Self { azimuth: FRAC_PI_2 };
    pub const MINUS_X: Self = Self { azimuth: PI };
    pub const MINUS_Y: Self = Self { azimuth: -FRAC_PI_2 };

    pub fn new(azimuth: f64) -> Self {
        Self { azimuth }
    }

    pub fn offset(self, delta: f64) -> Self {
        Self { azimuth: self.azimuth + delta }
    }
}

/// `exp(-i angle (cos(phi) X + sin(phi) Y) / 2)` in the `(|g>, |e>)` basis.
pub fn rotation_matrix(axis: BlochAxis, angle: f64) -> DMatrix<Complex64> {
    let (s, c) = (angle / 2.0).sin_cos();
    let off = Complex64::new(0.0, -s);
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            off * Complex64::from_polar(1.0, -axis.azimuth),
            off * Complex64::from_polar(1.0, axis.azimuth),
            Complex64::new(c, 0.0),
        ],
    )
}

pub fn rotate_qubit(state: &StateVector, qubit: &str, axis: BlochAxis, angle: f64) -> Result<StateVector> {
    let k = state.layout().index_of_kind(qubit, ModeKind::TwoLevel)?;
    let mut out = state.clone();
    out.apply_mode_index(k, &rotation_matrix(axis, angle))?;
    Ok(out)
}

/// Pair operator on `(qubit, cavity)`: rotation on the qubit inside the
/// cavity's Fock-`selected_n` subspace, identity elsewhere.
pub fn conditional_rotation_matrix(cavity_dim: usize, selected_n: usize, axis: BlochAxis, angle: f64) -> DMatrix<Complex64> {
    let d = 2 * cavity_dim;
    let mut m = DMatrix::<Complex64>::identity(d, d);
    let r = rotation_matrix(axis, angle);
    for q in 0..2 {
        for p in 0..2 {
            m[(q * cavity_dim + selected_n, p * cavity_dim + selected_n)] = r[(q, p)];
        }
    }
    m
}

pub fn conditional_qubit_rotation(
    state: &StateVector,
    qubit: &str,
    cavity: &str,
    selected_n: usize,
    axis: BlochAxis,
    angle: f64,
) -> Result<StateVector> {
    let layout = state.layout();
    layout.index_of_kind(qubit, ModeKind::TwoLevel)?;
    let c = layout.index_of_kind(cavity, ModeKind::Oscillator)?;
    let dim = layout.dim(c);
    if selected_n >= dim {
        return Err(Error::InvalidArgument(format!("selected Fock level {selected_n} >= cavity dimension {dim}")));
    }
    state.apply_pair_local(qubit, cavity, &conditional_rotation_matrix(dim, selected_n, axis, angle))
}

/// Pair operator on `(qubit, cavity)`: `exp(i phi n)` on the cavity when the qubit is `|e>`.
pub fn conditional_phase_matrix(cavity_dim: usize, phi: f64) -> DMatrix<Complex64> {
    let d = 2 * cavity_dim;
    let mut m = DMatrix::<Complex64>::identity(d, d);
    for n in 0..cavity_dim {
        m[(cavity_dim + n, cavity_dim + n)] = Complex64::from_polar(1.0, phi * n as f64);
    }
    m
}

/// Qubit-conditioned cavity phase: `|e>|alpha> -> |e>|alpha e^{i phi}>`.
pub fn conditional_cavity_phase(state: &StateVector, qubit: &str, cavity: &str, phi: f64) -> Result<StateVector> {
    let layout = state.layout();
    layout.index_of_kind(qubit, ModeKind::TwoLevel)?;
    let c = layout.index_of_kind(cavity, ModeKind::Oscillator)?;
    state.apply_pair_local(qubit, cavity, &conditional_phase_matrix(layout.dim(c), phi))
}
