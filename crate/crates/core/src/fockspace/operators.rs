use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::SystemLayout;
use super::state::StateVector;
use crate::{Error, Result};

/// Real diagonal operator over the full product basis.
#[derive(Clone, Debug)]
pub struct DiagonalOperator {
    layout: Arc<SystemLayout>,
    diagonal: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(layout: &Arc<SystemLayout>, diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch { expected: layout.total_dim(), actual: diagonal.len() });
        }
        Ok(Self { layout: layout.clone(), diagonal })
    }

    /// Builds the diagonal from a function of the per-mode digits.
    pub fn from_fn(layout: &Arc<SystemLayout>, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut digits = vec![0; layout.len()];
        let diagonal = (0..layout.total_dim())
            .map(|i| {
                for (k, d) in digits.iter_mut().enumerate() {
                    *d = layout.digit(i, k);
                }
                f(&digits)
            })
            .collect();
        Self { layout: layout.clone(), diagonal }
    }

    pub fn layout(&self) -> &Arc<SystemLayout> {
        &self.layout
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }
}

/// `n` of mode `label` as a full-space diagonal.
pub fn number_diagonal(layout: &Arc<SystemLayout>, label: &str) -> Result<DiagonalOperator> {
    let k = layout.index_of(label)?;
    Ok(DiagonalOperator::from_fn(layout, |d| d[k] as f64))
}

/// Photon-number parity `(-1)^n` of mode `label`.
pub fn parity_diagonal(layout: &Arc<SystemLayout>, label: &str) -> Result<DiagonalOperator> {
    let k = layout.index_of(label)?;
    Ok(DiagonalOperator::from_fn(layout, |d| if d[k] % 2 == 0 { 1.0 } else { -1.0 }))
}

/// Truncated annihilation operator `a` on `dim` levels.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Operator whose expectation can be taken on a [`StateVector`].
#[derive(Clone, Debug)]
pub enum Observable {
    Diagonal(DiagonalOperator),
    /// Tensor product of mode-local factors (identity on unlisted modes).
    Product(Vec<(String, DMatrix<Complex64>)>),
}

/// `<psi|O|psi>`.
pub fn expectation(state: &StateVector, observable: &Observable) -> Result<Complex64> {
    match observable {
        Observable::Diagonal(op) => {
            if **op.layout() != **state.layout() {
                return Err(Error::LayoutMismatch);
            }
            Ok(state
                .amplitudes()
                .iter()
                .zip(op.diagonal())
                .map(|(a, h)| Complex64::new(a.norm_sqr() * h, 0.0))
                .sum())
        }
        Observable::Product(factors) => {
            let mut image = state.clone();
            for (label, m) in factors {
                image.apply_mode_local_mut(label, m)?;
            }
            state.inner(&image)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{coherent_state, ModeSpec};

    fn single_cavity(dim: usize) -> Arc<SystemLayout> {
        SystemLayout::build(vec![ModeSpec::oscillator("S", dim)]).unwrap()
    }

    #[test]
    fn number_moments_of_coherent_state() {
        let layout = single_cavity(40);
        let alpha = Complex64::new(1.2, -0.7);
        let psi = coherent_state(&layout, "S", alpha).unwrap();
        let n = number_diagonal(&layout, "S").unwrap();
        let mean = expectation(&psi, &Observable::Diagonal(n.clone())).unwrap();
        let n2 = DiagonalOperator::new(&layout, n.diagonal().iter().map(|x| x * x).collect()).unwrap();
        let second = expectation(&psi, &Observable::Diagonal(n2)).unwrap();
        let m = alpha.norm_sqr();
        assert!((mean.re - m).abs() < 1e-10);
        // Poisson: E[n^2] = m^2 + m
        assert!((second.re - (m * m + m)).abs() < 1e-9);
        assert!(mean.im.abs() < 1e-10);
    }

    #[test]
    fn identity_expectation_is_one() {
        let layout = single_cavity(20);
        let psi = coherent_state(&layout, "S", Complex64::new(0.5, 0.5)).unwrap();
        let id = Observable::Product(vec![("S".into(), DMatrix::identity(20, 20))]);
        assert!((expectation(&psi, &id).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn product_observable_matches_diagonal() {
        let layout = single_cavity(25);
        let psi = coherent_state(&layout, "S", Complex64::new(1.1, 0.3)).unwrap();
        let a = annihilation(25);
        let n_matrix = a.adjoint() * &a;
        let via_matrix = expectation(&psi, &Observable::Product(vec![("S".into(), n_matrix)])).unwrap();
        let via_diag = expectation(&psi, &Observable::Diagonal(number_diagonal(&layout, "S").unwrap())).unwrap();
        assert!((via_matrix - via_diag).norm() < 1e-12);
    }

    #[test]
    fn layout_mismatch_is_rejected() {
        let psi = coherent_state(&single_cavity(10), "S", Complex64::new(0.1, 0.0)).unwrap();
        let other = number_diagonal(&single_cavity(11), "S").unwrap();
        assert!(matches!(expectation(&psi, &Observable::Diagonal(other)), Err(Error::LayoutMismatch)));
    }
}
