use num_complex::Complex64;

use crate::fockspace::{ModeKind, StateVector};
use crate::pulsesim::{conditional_cavity_phase, conditional_qubit_rotation, displace, BlochAxis};
use crate::tolerance;
use crate::{Error, Result};

/// Vacuum population a branch must reach before a vacuum-conditioned flip.
const BRANCH_VACUUM: f64 = 0.9;

/// Entangles a fresh cavity with `qubit`: `D(alpha)` then a `phi` phase
/// conditioned on `|e>`.
pub fn extend_with_cavity(state: &StateVector, qubit: &str, new_cavity: &str, alpha: Complex64, phi: f64) -> Result<StateVector> {
    state.layout().index_of_kind(qubit, ModeKind::TwoLevel)?;
    state.layout().index_of_kind(new_cavity, ModeKind::Oscillator)?;
    let p0 = state.mode_populations(new_cavity)?[0] / state.norm_sqr();
    if p0 < 1.0 - tolerance::ANCILLA_RESET {
        return Err(Error::CavityNotVacuum(new_cavity.to_string()));
    }
    conditional_cavity_phase(&displace(state, new_cavity, alpha)?, qubit, new_cavity, phi)
}

/// Displaces `cavity` so one branch sits in vacuum, then flips the fresh
/// `new_qubit` on that branch with a vacuum-conditioned `pi` rotation.
pub fn extend_with_qubit(state: &StateVector, cavity: &str, new_qubit: &str, axis: BlochAxis, displacement_to_vacuum: Complex64) -> Result<StateVector> {
    let layout = state.layout().clone();
    let q = layout.index_of_kind(new_qubit, ModeKind::TwoLevel)?;
    layout.index_of_kind(cavity, ModeKind::Oscillator)?;
    let total = state.norm_sqr();
    if state.mode_populations(new_qubit)?[1] / total > tolerance::ANCILLA_RESET {
        return Err(Error::AncillaNotReset(new_qubit.to_string()));
    }
    let shifted = displace(state, cavity, displacement_to_vacuum)?;
    let mut found = 0.0f64;
    for (k, mode) in layout.modes().iter().enumerate() {
        if mode.kind != ModeKind::TwoLevel || k == q {
            continue;
        }
        for level in 0..2 {
            let branch = shifted.project_mode(&mode.label, level)?;
            let w = branch.norm_sqr();
            if w / total > tolerance::MIN_PROJECTION {
                found = found.max(branch.mode_populations(cavity)?[0] / w);
            }
        }
    }
    if found <= BRANCH_VACUUM {
        return Err(Error::NoVacuumBranch { label: cavity.to_string(), population: found });
    }
    conditional_qubit_rotation(&shifted, new_qubit, cavity, 0, axis, std::f64::consts::PI)
}
