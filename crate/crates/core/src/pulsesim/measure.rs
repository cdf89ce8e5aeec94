use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::gates::{conditional_cavity_phase, rotate_qubit, BlochAxis};
use crate::fockspace::{ModeKind, StateVector};
use crate::tolerance;
use crate::{Error, Result};

/// One outcome of a projective qubit measurement.
#[derive(Clone, Debug)]
pub struct Branch {
    pub probability: f64,
    /// Collapsed state; renormalised unless `normalizable` is false.
    pub state: StateVector,
    pub normalizable: bool,
}

#[derive(Clone, Debug)]
pub struct QubitMeasurement {
    pub g: Branch,
    pub e: Branch,
}

impl QubitMeasurement {
    /// `<Z>` with outcome `|g>` counted as +1 and `|e>` as -1.
    pub fn mean_value(&self) -> f64 {
        self.g.probability - self.e.probability
    }
}

/// Optional pre-rotation followed by a projective readout in `{|g>, |e>}`.
pub fn measure_qubit(state: &StateVector, qubit: &str, pre_rotation: Option<(BlochAxis, f64)>) -> Result<QubitMeasurement> {
    state.layout().index_of_kind(qubit, ModeKind::TwoLevel)?;
    let rotated = match pre_rotation {
        Some((axis, angle)) => rotate_qubit(state, qubit, axis, angle)?,
        None => state.clone(),
    };
    let branch = |level: usize| -> Result<Branch> {
        let mut s = rotated.project_mode(qubit, level)?;
        let probability = s.norm_sqr();
        let normalizable = probability >= tolerance::DEGENERATE_BRANCH;
        if normalizable {
            s.normalize()?;
        }
        Ok(Branch { probability, state: s, normalizable })
    };
    Ok(QubitMeasurement { g: branch(0)?, e: branch(1)? })
}

/// Ramsey-type parity mapping variants; they differ in the axis of the
/// second `pi/2` pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityProtocol {
    /// `R_y(pi/2) . C_pi . R_y(pi/2)`: odd parity ends in `|g>`.
    ZeroZero,
    /// `R_y(pi/2) . C_pi . R_-y(pi/2)`: even parity ends in `|g>`.
    ZeroPi,
}

impl ParityProtocol {
    pub fn second_axis(self) -> BlochAxis {
        match self {
            ParityProtocol::ZeroZero => BlochAxis::Y,
            ParityProtocol::ZeroPi => BlochAxis::MINUS_Y,
        }
    }

    /// Parity (+1 even, -1 odd) signalled by the ancilla ending in `|g>`.
    pub fn parity_of_ground(self) -> f64 {
        match self {
            ParityProtocol::ZeroZero => -1.0,
            ParityProtocol::ZeroPi => 1.0,
        }
    }
}

/// Maps the photon-number parity of `cavity` onto the ancilla `qubit`.
pub fn parity_map(state: &StateVector, qubit: &str, cavity: &str, protocol: ParityProtocol) -> Result<StateVector> {
    state.layout().index_of_kind(cavity, ModeKind::Oscillator)?;
    let excited: f64 = state.project_mode(qubit, 1)?.norm_sqr();
    if excited > tolerance::ANCILLA_RESET {
        return Err(Error::AncillaNotReset(qubit.to_string()));
    }
    let s = rotate_qubit(state, qubit, BlochAxis::Y, FRAC_PI_2)?;
    let s = conditional_cavity_phase(&s, qubit, cavity, PI)?;
    rotate_qubit(&s, qubit, protocol.second_axis(), FRAC_PI_2)
}
