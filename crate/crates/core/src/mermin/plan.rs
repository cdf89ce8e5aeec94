use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::terms::{BellTerm, Letter};
use crate::ghzbuilder::CatEncoding;
use crate::pulsesim::BlochAxis;
use crate::{Error, Result};

/// Form of the small second displacement `delta` in the cavity `Y` setting
/// `gamma = beta/2 + delta`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YDisplacement {
    /// `delta = -i eps pi beta / (4 |beta|^2)`, always perpendicular to `beta`.
    #[default]
    Perpendicular,
    /// `delta = -i eps pi / (4 beta)`; agrees with the above only for real `beta`.
    Literal,
}

/// Cavity sign `eps_j`: -1 for S1, +1 for S2.
pub const CAVITY_EPSILON: [f64; 2] = [-1.0, 1.0];

impl YDisplacement {
    pub fn delta(self, beta: Complex64, epsilon: f64) -> Result<Complex64> {
        if beta.norm_sqr() == 0.0 {
            return Err(Error::InvalidArgument("cavity Y setting needs beta != 0".into()));
        }
        let k = Complex64::new(0.0, -epsilon * PI / 4.0);
        Ok(match self {
            YDisplacement::Perpendicular => k * beta / beta.norm_sqr(),
            YDisplacement::Literal => k / beta,
        })
    }
}

/// Physical settings realising one Bell term: a `pi/2` pre-rotation axis per
/// qubit and a parity-displacement amplitude per cavity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementPlan {
    pub qubit_axes: [BlochAxis; 3],
    pub cavity_gamma: [Complex64; 2],
}

impl MeasurementPlan {
    pub fn for_term(term: &BellTerm, enc: &CatEncoding, y_form: YDisplacement) -> Result<Self> {
        let qubit_axes = std::array::from_fn(|k| match (term.letters[k], k) {
            (Letter::X, _) => BlochAxis::MINUS_Y,
            (Letter::Y, 0) => BlochAxis::MINUS_X,
            (Letter::Y, _) => BlochAxis::X,
        });
        let betas = [enc.beta1, enc.beta2];
        let mut cavity_gamma = [Complex64::new(0.0, 0.0); 2];
        for j in 0..2 {
            cavity_gamma[j] = betas[j] / 2.0;
            if term.letters[3 + j] == Letter::Y {
                cavity_gamma[j] += y_form.delta(betas[j], CAVITY_EPSILON[j])?;
            }
        }
        Ok(Self { qubit_axes, cavity_gamma })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_agree_for_real_beta() {
        let beta = Complex64::new(2.3, 0.0);
        for eps in [-1.0, 1.0] {
            let a = YDisplacement::Perpendicular.delta(beta, eps).unwrap();
            let b = YDisplacement::Literal.delta(beta, eps).unwrap();
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn perpendicular_form_is_perpendicular() {
        let beta = Complex64::new(0.8, 2.3);
        let d = YDisplacement::Perpendicular.delta(beta, 1.0).unwrap();
        assert!((beta.conj() * d).re.abs() < 1e-15);
        assert!(((beta.conj() * d).im + PI / 4.0).abs() < 1e-15);
        let lit = YDisplacement::Literal.delta(beta, 1.0).unwrap();
        assert!((beta.conj() * lit).re.abs() > 0.1);
        assert!(YDisplacement::Perpendicular.delta(Complex64::new(0.0, 0.0), 1.0).is_err());
    }
}
