use std::sync::Arc;

use num_complex::Complex64;

use super::layout::{ModeKind, SystemLayout};
use super::state::{ground_state, StateVector};
use crate::Result;

/// Truncated coherent-state amplitudes and the probability mass cut off.
#[derive(Clone, Debug)]
pub struct CoherentAmplitudes {
    pub amplitudes: Vec<Complex64>,
    pub leakage: f64,
}

/// `c_n = exp(-|a|^2/2) a^n / sqrt(n!)` for `n < dim`.
pub fn coherent_amplitudes(alpha: Complex64, dim: usize) -> CoherentAmplitudes {
    let mut amplitudes = Vec::with_capacity(dim);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        amplitudes.push(c);
    }
    let leakage = poisson_tail(alpha.norm_sqr(), dim);
    CoherentAmplitudes { amplitudes, leakage }
}

/// `P[N >= dim]` for `N ~ Poisson(mean)`, summed forward from `dim`.
pub fn poisson_tail(mean: f64, dim: usize) -> f64 {
    if mean == 0.0 {
        return if dim == 0 { 1.0 } else { 0.0 };
    }
    // log p_dim = -mean + dim ln(mean) - ln(dim!)
    let log_fact: f64 = (1..=dim).map(|k| (k as f64).ln()).sum();
    let mut term = (-mean + dim as f64 * mean.ln() - log_fact).exp();
    let mut sum = 0.0;
    let mut n = dim;
    while term > 0.0 {
        sum += term;
        n += 1;
        term *= mean / n as f64;
        if term < sum * 1e-18 && n as f64 > mean {
            break;
        }
    }
    sum.min(1.0)
}

/// Normalised coherent state on one oscillator, all other modes in their ground level.
pub fn coherent_state(layout: &Arc<SystemLayout>, label: &str, alpha: Complex64) -> Result<StateVector> {
    let k = layout.index_of_kind(label, ModeKind::Oscillator)?;
    let c = coherent_amplitudes(alpha, layout.dim(k));
    let mut psi = ground_state(layout);
    let stride = layout.stride(k);
    let amps = psi.amplitudes_mut();
    amps[0] = Complex64::new(0.0, 0.0);
    for (n, a) in c.amplitudes.into_iter().enumerate() {
        amps[n * stride] = a;
    }
    psi.normalized()
}
