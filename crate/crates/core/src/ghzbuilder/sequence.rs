use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::target::CatEncoding;
use crate::device::{conditional_phase_angles, dispersive_hamiltonian, tau_for_phi2, DeviceParams};
use crate::fockspace::{ground_state, StateVector, SystemLayout};
use crate::pulsesim::{conditional_qubit_rotation, displace, rotate_qubit, BlochAxis};
use crate::{Error, Result};

/// First displacement amplitude used in the experiment.
pub const PAPER_ALPHA: f64 = 1.782;
pub const PAPER_BETA1: Complex64 = Complex64::new(-2.7, -0.2);
pub const PAPER_BETA2: Complex64 = Complex64::new(0.8, 2.3);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KerrMode {
    /// Dispersive couplings only.
    #[default]
    Ideal,
    /// Self- and cross-Kerr active during the waits.
    Kerr,
}

impl KerrMode {
    pub fn include_kerr(self) -> bool {
        self == KerrMode::Kerr
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SequenceParams {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub alpha3: Complex64,
    pub alpha4: Complex64,
    /// Conditional-phase wait (s).
    pub tau: f64,
    /// Duration of the vacuum-conditioned rotations (s).
    pub tau_prime: f64,
    pub theta: f64,
    pub kerr_mode: KerrMode,
}

impl SequenceParams {
    /// Second displacements chosen so the cavity branches that should end in
    /// vacuum do so: `alpha3 = -alpha1`, `alpha4 = -alpha2 e^{i phi2}`.
    pub fn with_closure(device: &DeviceParams, alpha1: Complex64, alpha2: Complex64, tau: f64, theta: f64, kerr_mode: KerrMode) -> Result<Self> {
        let (_, phi2) = conditional_phase_angles(device, tau)?;
        Ok(Self {
            alpha1,
            alpha2,
            alpha3: -alpha1,
            alpha4: -alpha2 * Complex64::from_polar(1.0, phi2),
            tau,
            tau_prime: 0.0,
            theta,
            kerr_mode,
        })
    }

    /// Real `alpha1 = alpha2 = alpha` with `tau` set from the S2 phase `phi2`.
    pub fn from_phi2(device: &DeviceParams, alpha: f64, phi2: f64, theta: f64, kerr_mode: KerrMode) -> Result<Self> {
        let a = Complex64::new(alpha, 0.0);
        Self::with_closure(device, a, a, tau_for_phi2(device, phi2)?, theta, kerr_mode)
    }

    /// Experimental amplitudes with `phi2` fixed by the closure on the
    /// main-text `|beta2|`.
    pub fn paper(device: &DeviceParams, kerr_mode: KerrMode) -> Result<Self> {
        let phi2 = phi2_for_beta_magnitude(PAPER_ALPHA, PAPER_BETA2.norm())?;
        Self::from_phi2(device, PAPER_ALPHA, phi2, 0.0, kerr_mode)
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let amps = [self.alpha1, self.alpha2, self.alpha3, self.alpha4];
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) || !self.theta.is_finite() {
            return Err(Error::InvalidArgument("sequence amplitudes and theta must be finite".into()));
        }
        if !(self.tau >= 0.0) || !(self.tau_prime >= 0.0) || !self.tau.is_finite() || !self.tau_prime.is_finite() {
            return Err(Error::InvalidArgument(format!("tau = {}, tau' = {} must be >= 0", self.tau, self.tau_prime)));
        }
        Ok(())
    }

    /// Cat amplitudes predicted without Kerr: the S1 amplitude on the `|e>_3`
    /// branch and the S2 amplitude on the `|g>_3` branch.
    pub fn ideal_encoding(&self, device: &DeviceParams) -> Result<CatEncoding> {
        let (phi1, _) = conditional_phase_angles(device, self.tau)?;
        let (rot1, _) = conditional_phase_angles(device, self.tau_prime)?;
        let beta1 = (self.alpha1 * Complex64::from_polar(1.0, phi1) + self.alpha3) * Complex64::from_polar(1.0, rot1);
        let beta2 = self.alpha2 + self.alpha4;
        Ok(CatEncoding::unchecked(beta1, beta2))
    }
}

/// Root of `|beta2| = 2 |alpha2| |sin(phi2/2)|` in `(pi, 2pi)`, the branch
/// that also gives S1 a sizeable conditional phase.
pub fn phi2_for_beta_magnitude(alpha2: f64, beta2: f64) -> Result<f64> {
    let ratio = beta2 / (2.0 * alpha2.abs());
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidArgument(format!("|beta2| = {beta2} unreachable from |alpha2| = {alpha2}")));
    }
    Ok(2.0 * PI - 2.0 * ratio.asin())
}

/// Azimuth of the `n` axis, `pi/2 + |a1|^2 sin(phi1) + |a2|^2 sin(phi2)`,
/// which folds the two displacement phases into one relative phase.
pub fn n_axis_azimuth(alpha1: Complex64, alpha2: Complex64, phi1: f64, phi2: f64) -> f64 {
    FRAC_PI_2 + alpha1.norm_sqr() * phi1.sin() + alpha2.norm_sqr() * phi2.sin()
}

/// Runs the generation sequence from the all-ground state.
pub fn generate_ghz(device: &DeviceParams, layout: &Arc<SystemLayout>, seq: &SequenceParams) -> Result<StateVector> {
    layout.ensure_canonical()?;
    seq.validate()?;
    let h = dispersive_hamiltonian(device, layout, seq.kerr_mode.include_kerr())?;
    let (phi1, phi2) = conditional_phase_angles(device, seq.tau)?;

    let mut s = ground_state(layout);
    s = displace(&s, "S1", seq.alpha1)?;
    s = displace(&s, "S2", seq.alpha2)?;
    s = rotate_qubit(&s, "Q3", BlochAxis::Y, FRAC_PI_2)?;
    s.evolve_diagonal_mut(&h, seq.tau)?;
    s = displace(&s, "S1", seq.alpha3)?;
    s = displace(&s, "S2", seq.alpha4)?;
    let n_axis = BlochAxis::new(n_axis_azimuth(seq.alpha1, seq.alpha2, phi1, phi2));
    s = conditional_qubit_rotation(&s, "Q1", "S1", 0, n_axis.offset(seq.theta), PI)?;
    s = conditional_qubit_rotation(&s, "Q2", "S2", 0, BlochAxis::Y, PI)?;
    s.evolve_diagonal_mut(&h, seq.tau_prime)?;
    if seq.kerr_mode == KerrMode::Ideal {
        if let Ok(enc) = seq.ideal_encoding(device) {
            if !enc.is_valid() {
                log::warn!("cat amplitudes {} / {} are too small for a faithful encoding", enc.beta1, enc.beta2);
            }
        }
    }
    Ok(s)
}
