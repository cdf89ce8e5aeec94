use num_complex::Complex64;

use crate::fockspace::StateVector;
use crate::tomography::{projected_density, GridSpec, QubitLevel};
use crate::{Error, Result};

/// Peak search settings for [`extract_beta_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaSearch {
    pub half_width: f64,
    pub points_per_axis: usize,
    /// Minimum accepted peak, as a fraction of the vacuum value `2/pi`.
    pub threshold_fraction: f64,
}

impl Default for BetaSearch {
    fn default() -> Self {
        Self { half_width: 4.0, points_per_axis: 41, threshold_fraction: 0.1 }
    }
}

/// Location of the positive Wigner peak of S1 (`which = 1`, Q3 projected to
/// `|e>`) or S2 (`which = 2`, Q3 projected to `|g>`).
pub fn extract_beta(state: &StateVector, which: usize) -> Result<Complex64> {
    extract_beta_with(state, which, &BetaSearch::default())
}

pub fn extract_beta_with(state: &StateVector, which: usize, search: &BetaSearch) -> Result<Complex64> {
    let (level, cavity) = match which {
        1 => (QubitLevel::E, "S1"),
        2 => (QubitLevel::G, "S2"),
        _ => return Err(Error::InvalidArgument(format!("cavity index must be 1 or 2, got {which}"))),
    };
    let rho = projected_density(state, level, cavity)?;
    let center = rho.mean_amplitude();
    let spec = GridSpec { half_width: search.half_width, points_per_axis: search.points_per_axis };
    let grid = rho.wigner_grid(center, spec)?;
    let threshold = search.threshold_fraction * std::f64::consts::FRAC_2_PI;
    let (i, j, peak) = grid.argmax().ok_or(Error::NoPeak { threshold, max: f64::NAN })?;
    if peak < threshold {
        return Err(Error::NoPeak { threshold, max: peak });
    }
    let axis = grid.axis();
    let h = if axis.len() > 1 { axis[1] - axis[0] } else { 0.0 };
    let at = |a: isize, b: isize| -> Option<f64> {
        let (a, b) = (i as isize + a, j as isize + b);
        if a < 0 || b < 0 || a as usize >= axis.len() || b as usize >= axis.len() {
            return None;
        }
        let v = grid.values[(a as usize, b as usize)];
        (v.is_finite() && v > 0.0).then_some(v)
    };
    let dx = vertex_offset(at(-1, 0), peak, at(1, 0)) * h;
    let dy = vertex_offset(at(0, -1), peak, at(0, 1)) * h;
    Ok(center + Complex64::new(axis[i] + dx, axis[j] + dy))
}

/// Vertex of the parabola through `ln` of three equally spaced samples, in
/// units of the spacing (exact for a Gaussian peak).
fn vertex_offset(left: Option<f64>, mid: f64, right: Option<f64>) -> f64 {
    let (Some(l), Some(r)) = (left, right) else { return 0.0 };
    let (l, m, r) = (l.ln(), mid.ln(), r.ln());
    let curvature = l - 2.0 * m + r;
    if curvature >= 0.0 {
        return 0.0;
    }
    (0.5 * (l - r) / curvature).clamp(-1.0, 1.0)
}
