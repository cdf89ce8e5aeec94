use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::expectation::bell_expectation;
use super::plan::{YDisplacement, CAVITY_EPSILON};
use crate::device::DeviceParams;
use crate::fockspace::{coherent_amplitudes, poisson_tail, StateVector, SystemLayout};
use crate::ghzbuilder::{analytic_target_state, extract_beta, generate_ghz, CatEncoding, KerrMode, SequenceParams};
use crate::pulsesim::displace_vector;
use crate::{Error, Result};

/// `n` equally spaced angles covering `[0, 2 pi]` inclusive.
pub fn theta_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| TAU * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Cat amplitudes used to set the cavity measurement displacements: the
/// closed-form prediction in ideal mode, the Wigner peaks otherwise.
pub fn measurement_encoding(device: &DeviceParams, state: &StateVector, seq: &SequenceParams) -> Result<CatEncoding> {
    match seq.kerr_mode {
        KerrMode::Ideal => seq.ideal_encoding(device),
        KerrMode::Kerr => Ok(CatEncoding::unchecked(extract_beta(state, 1)?, extract_beta(state, 2)?)),
    }
}

/// `(theta, <B>)` for each angle, with the encoding fixed from the first
/// generated state (theta only moves the relative branch phase).
pub fn bell_theta_sweep(
    device: &DeviceParams,
    layout: &Arc<SystemLayout>,
    seq: &SequenceParams,
    thetas: &[f64],
    y_form: YDisplacement,
) -> Result<Vec<(f64, f64)>> {
    let Some(&first) = thetas.first() else {
        return Ok(Vec::new());
    };
    let s0 = generate_ghz(device, layout, &seq.with_theta(first))?;
    let enc = measurement_encoding(device, &s0, seq)?;
    thetas
        .par_iter()
        .map(|&theta| {
            let s = generate_ghz(device, layout, &seq.with_theta(theta))?;
            Ok((theta, bell_expectation(&s, &enc, y_form)?))
        })
        .collect()
}

/// `A cos(theta - theta0) + c` fitted by linear least squares.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SinusoidFit {
    pub amplitude: f64,
    pub theta0: f64,
    pub offset: f64,
    pub rms_residual: f64,
    /// `rms_residual / amplitude`.
    pub relative_residual: f64,
}

pub fn fit_sinusoid(points: &[(f64, f64)]) -> Result<SinusoidFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 points, got {}", points.len())));
    }
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for &(t, y) in points {
        let row = Vector3::new(t.cos(), t.sin(), 1.0);
        ata += row * row.transpose();
        atb += row * y;
    }
    let coef = ata.lu().solve(&atb).ok_or_else(|| Error::InvalidArgument("degenerate angle set".into()))?;
    let (a, b, c) = (coef[0], coef[1], coef[2]);
    let rss: f64 = points.iter().map(|&(t, y)| (y - a * t.cos() - b * t.sin() - c).powi(2)).sum();
    let rms_residual = (rss / points.len() as f64).sqrt();
    let amplitude = a.hypot(b);
    Ok(SinusoidFit { amplitude, theta0: b.atan2(a).rem_euclid(TAU), offset: c, rms_residual, relative_residual: rms_residual / amplitude })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaMax {
    pub theta: f64,
    pub bell: f64,
    pub amplitude: f64,
    pub offset: f64,
}

/// `<B>` is an exact first harmonic in theta, so three angles fix it.
fn max_from_three(eval: impl Fn(f64) -> Result<f64>) -> Result<ThetaMax> {
    let thetas = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
    let mut values = [0.0; 3];
    for (v, &t) in values.iter_mut().zip(&thetas) {
        *v = eval(t)?;
    }
    let offset = values.iter().sum::<f64>() / 3.0;
    let a = 2.0 / 3.0 * thetas.iter().zip(&values).map(|(t, v)| v * t.cos()).sum::<f64>();
    let b = 2.0 / 3.0 * thetas.iter().zip(&values).map(|(t, v)| v * t.sin()).sum::<f64>();
    let amplitude = a.hypot(b);
    let bell = offset + amplitude;
    if !bell.is_finite() {
        return Err(Error::NonFinite(format!("Bell maximum from {values:?}")));
    }
    Ok(ThetaMax { theta: b.atan2(a).rem_euclid(TAU), bell, amplitude, offset })
}

/// Largest `<B>` over theta for the generated state.
pub fn max_over_theta(device: &DeviceParams, layout: &Arc<SystemLayout>, seq: &SequenceParams, y_form: YDisplacement) -> Result<ThetaMax> {
    let s0 = generate_ghz(device, layout, &seq.with_theta(0.0))?;
    let enc = measurement_encoding(device, &s0, seq)?;
    max_from_three(|theta| {
        let s = if theta == 0.0 { s0.clone() } else { generate_ghz(device, layout, &seq.with_theta(theta))? };
        bell_expectation(&s, &enc, y_form)
    })
}

/// Smallest truncation `>= min_dim` whose Poisson tail at `|beta|^2` is
/// below `1e-12`.
pub fn adequate_dim(beta: f64, min_dim: usize) -> usize {
    let mean = beta * beta;
    let mut d = min_dim.max(2);
    while poisson_tail(mean, d) > 1e-12 {
        d += 1;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AmplitudePoint {
    pub beta: f64,
    /// NaN when the encoding is degenerate.
    pub bell: f64,
    pub theta: f64,
    pub encoding_valid: bool,
    pub dim: usize,
}

/// Ideal-state `<B>` at the theta optimum with `beta1 = beta2 = beta` real.
pub fn ideal_bell_vs_amplitude(betas: &[f64], min_dim: usize, y_form: YDisplacement) -> Result<Vec<AmplitudePoint>> {
    betas
        .iter()
        .map(|&beta| {
            if !(beta >= 0.0) || !beta.is_finite() {
                return Err(Error::InvalidArgument(format!("beta = {beta} must be >= 0")));
            }
            let dim = adequate_dim(beta, min_dim);
            let layout = SystemLayout::canonical(dim)?;
            let b = Complex64::new(beta, 0.0);
            let enc = CatEncoding::unchecked(b, b);
            let encoding_valid = enc.is_valid();
            let point = max_from_three(|theta| bell_expectation(&analytic_target_state(&layout, &enc, theta)?, &enc, y_form));
            match point {
                Ok(m) => Ok(AmplitudePoint { beta, bell: m.bell, theta: m.theta, encoding_valid, dim }),
                Err(e) => {
                    log::warn!("beta = {beta}: Bell value undefined ({e})");
                    Ok(AmplitudePoint { beta, bell: f64::NAN, theta: f64::NAN, encoding_valid, dim })
                }
            }
        })
        .collect()
}

/// `Y`-setting displaced parity of S1 on `(|0> + i|beta>)/N`, a `+1`
/// eigenstate of the logical `sigma_y`.
pub fn sigma_y_single_cavity(beta: f64, min_dim: usize, y_form: YDisplacement) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be > 0")));
    }
    let dim = adequate_dim(beta, min_dim);
    let b = Complex64::new(beta, 0.0);
    let mut v = coherent_amplitudes(b, dim).amplitudes;
    v.iter_mut().for_each(|z| *z *= Complex64::i());
    v[0] += 1.0;
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let gamma = b / 2.0 + y_form.delta(b, CAVITY_EPSILON[0])?;
    displace_vector(-gamma, &mut v);
    let parity: f64 = v.iter().enumerate().map(|(n, z)| if n % 2 == 0 { z.norm_sqr() } else { -z.norm_sqr() }).sum();
    Ok(parity / norm)
}
