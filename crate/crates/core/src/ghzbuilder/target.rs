use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::fockspace::{coherent_amplitudes, StateVector, SystemLayout};
use crate::tolerance;
use crate::{Error, Result};

/// Cat-qubit amplitudes: S1 encodes `{|0>, |beta1>}`, S2 encodes `{|beta2>, |0>}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CatEncoding {
    pub beta1: Complex64,
    pub beta2: Complex64,
}

impl CatEncoding {
    /// Rejects amplitudes whose vacuum overlap `e^{-|beta|^2}` is 0.05 or more.
    pub fn new(beta1: Complex64, beta2: Complex64) -> Result<Self> {
        let enc = Self { beta1, beta2 };
        if !enc.is_valid() {
            let [o1, o2] = enc.vacuum_overlaps();
            return Err(Error::InvalidArgument(format!("encoding overlaps {o1:.3e}, {o2:.3e} exceed {}", tolerance::ENCODING_OVERLAP)));
        }
        Ok(enc)
    }

    pub fn unchecked(beta1: Complex64, beta2: Complex64) -> Self {
        Self { beta1, beta2 }
    }

    /// `|<beta_j|0>|^2 = e^{-|beta_j|^2}`.
    pub fn vacuum_overlaps(&self) -> [f64; 2] {
        [(-self.beta1.norm_sqr()).exp(), (-self.beta2.norm_sqr()).exp()]
    }

    pub fn is_valid(&self) -> bool {
        self.vacuum_overlaps().iter().all(|&o| o < tolerance::ENCODING_OVERLAP)
    }
}

/// `(|e g g>|0>|beta2> + e^{-i theta} |g e e>|beta1>|0>) / N` with `N`
/// computed from the truncated amplitudes.
pub fn analytic_target_state(layout: &Arc<SystemLayout>, enc: &CatEncoding, theta: f64) -> Result<StateVector> {
    layout.ensure_canonical()?;
    let (d1, d2) = (layout.dim(3), layout.dim(4));
    let b1 = coherent_amplitudes(enc.beta1, d1).amplitudes;
    let b2 = coherent_amplitudes(enc.beta2, d2).amplitudes;
    let phase = Complex64::from_polar(1.0, -theta);
    let mut amps = vec![Complex64::new(0.0, 0.0); layout.total_dim()];
    for n2 in 0..d2 {
        amps[layout.flat_index(&[1, 0, 0, 0, n2])?] += b2[n2];
    }
    for n1 in 0..d1 {
        amps[layout.flat_index(&[0, 1, 1, n1, 0])?] += phase * b1[n1];
    }
    StateVector::from_amplitudes(layout, amps)?.normalized()
}
