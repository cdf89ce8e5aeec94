use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::fockspace::{ModeKind, StateVector};
use crate::tolerance;
use crate::{Error, Result};

type QuadratureEigen = Arc<(DMatrix<f64>, DVector<f64>)>;

/// Eigen-decomposition of the truncated quadrature `a + a†`, cached per dimension.
fn quadrature_eigen(dim: usize) -> QuadratureEigen {
    static CACHE: OnceLock<Mutex<HashMap<usize, QuadratureEigen>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(e) = cache.lock().unwrap().get(&dim) {
        return e.clone();
    }
    let mut x = DMatrix::<f64>::zeros(dim, dim);
    for n in 1..dim {
        let s = (n as f64).sqrt();
        x[(n - 1, n)] = s;
        x[(n, n - 1)] = s;
    }
    let eig = SymmetricEigen::new(x);
    let entry = Arc::new((eig.eigenvectors, eig.eigenvalues));
    cache.lock().unwrap().insert(dim, entry.clone());
    entry
}

/// `D(alpha) = exp(alpha a† - alpha* a)` on the truncated space.
///
/// With `alpha = r e^{i phi}` the generator equals
/// `-i r R X R†` where `X = a + a†` and `R = exp(i (phi + pi/2) n)`, so the
/// exponential reduces to the spectral decomposition of `X`.
pub fn displacement_matrix(alpha: Complex64, dim: usize) -> DMatrix<Complex64> {
    let r = alpha.norm();
    if r == 0.0 {
        return DMatrix::identity(dim, dim);
    }
    let eig = quadrature_eigen(dim);
    let (vecs, vals) = (&eig.0, &eig.1);
    let psi = alpha.arg() + std::f64::consts::FRAC_PI_2;
    let phases: Vec<Complex64> = vals.iter().map(|l| Complex64::from_polar(1.0, -r * l)).collect();
    let mut d = DMatrix::<Complex64>::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, p) in phases.iter().enumerate() {
                acc += p * (vecs[(m, k)] * vecs[(n, k)]);
            }
            d[(m, n)] = acc * Complex64::from_polar(1.0, psi * (m as f64 - n as f64));
        }
    }
    d
}

/// Applies `D(alpha)` to a single-mode amplitude vector in `O(dim^2)`
/// without forming the matrix.
pub fn displace_vector(alpha: Complex64, v: &mut [Complex64]) {
    let r = alpha.norm();
    if r == 0.0 {
        return;
    }
    let dim = v.len();
    let eig = quadrature_eigen(dim);
    let (vecs, vals) = (&eig.0, &eig.1);
    let psi = alpha.arg() + std::f64::consts::FRAC_PI_2;
    for (n, z) in v.iter_mut().enumerate() {
        *z *= Complex64::from_polar(1.0, -psi * n as f64);
    }
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    for (k, wk) in w.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, z) in v.iter().enumerate() {
            acc += z * vecs[(n, k)];
        }
        *wk = acc * Complex64::from_polar(1.0, -r * vals[k]);
    }
    for (m, z) in v.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, wk) in w.iter().enumerate() {
            acc += wk * vecs[(m, k)];
        }
        *z = acc * Complex64::from_polar(1.0, psi * m as f64);
    }
}

/// Population in the top `tolerance::TRUNCATION_EDGE_LEVELS` levels of `label`.
pub fn edge_population(state: &StateVector, label: &str) -> Result<f64> {
    let pops = state.mode_populations(label)?;
    let keep = pops.len().saturating_sub(tolerance::TRUNCATION_EDGE_LEVELS);
    Ok(pops[keep..].iter().sum())
}

/// Displaces cavity `label` by `alpha`, failing with [`Error::Truncation`]
/// when the result populates the truncation edge above the default limit.
pub fn displace(state: &StateVector, label: &str, alpha: Complex64) -> Result<StateVector> {
    displace_with_limit(state, label, alpha, tolerance::TRUNCATION_EDGE)
}

pub fn displace_with_limit(state: &StateVector, label: &str, alpha: Complex64, limit: f64) -> Result<StateVector> {
    let k = state.layout().index_of_kind(label, ModeKind::Oscillator)?;
    if alpha.norm() == 0.0 {
        return Ok(state.clone());
    }
    let d = displacement_matrix(alpha, state.layout().dim(k));
    let mut out = state.clone();
    out.apply_mode_index(k, &d)?;
    let leakage = edge_population(&out, label)?;
    if leakage > limit {
        return Err(Error::Truncation { label: label.to_string(), leakage, limit });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{coherent_amplitudes, ground_state, ModeSpec, SystemLayout};

    /// Scaling-and-squaring Taylor exponential of the truncated generator.
    fn expm_oracle(alpha: Complex64, dim: usize) -> DMatrix<Complex64> {
        let a = crate::fockspace::annihilation(dim);
        let g = a.adjoint() * Complex64::new(alpha.re, alpha.im) - &a * alpha.conj();
        let squarings = 12;
        let scaled = g / Complex64::new(2f64.powi(squarings), 0.0);
        let mut term = DMatrix::<Complex64>::identity(dim, dim);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &scaled / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn matches_taylor_exponential() {
        for (alpha, dim) in [
            (Complex64::new(1.782, 0.0), 31),
            (Complex64::new(-0.4, 1.3), 20),
            (Complex64::new(2.2, -1.1), 41),
        ] {
            let d = displacement_matrix(alpha, dim);
            let o = expm_oracle(alpha, dim);
            let err = (&d - &o).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{alpha}: {err}");
        }
    }

    #[test]
    fn vacuum_column_is_coherent_state() {
        for alpha in [Complex64::new(1.782, 0.0), Complex64::new(-2.7, -0.2), Complex64::new(0.8, 2.3)] {
            let d = displacement_matrix(alpha, 31);
            let c = coherent_amplitudes(alpha, 31);
            // truncation only disturbs the top of the ladder
            for n in 0..20 {
                assert!((d[(n, 0)] - c.amplitudes[n]).norm() < 1e-9, "{alpha} n={n}");
            }
        }
    }

    #[test]
    fn vector_kernel_matches_matrix() {
        let alpha = Complex64::new(-0.7, 1.9);
        let v: Vec<Complex64> = (0..20).map(|n| Complex64::new((n as f64).sin(), (n as f64 * 0.3).cos()) / 5.0).collect();
        let expected = displacement_matrix(alpha, 20) * DVector::from_vec(v.clone());
        let mut got = v;
        displace_vector(alpha, &mut got);
        for (a, b) in got.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn is_unitary_and_inverse() {
        let alpha = Complex64::new(1.2, 0.9);
        let d = displacement_matrix(alpha, 25);
        let id = DMatrix::<Complex64>::identity(25, 25);
        assert!((d.adjoint() * &d - &id).iter().all(|z| z.norm() < 1e-12));
        let back = displacement_matrix(-alpha, 25);
        assert!((back * &d - id).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn zero_is_identity_and_guard_fires() {
        let l = SystemLayout::build(vec![ModeSpec::oscillator("S", 12)]).unwrap();
        let psi = ground_state(&l);
        let same = displace(&psi, "S", Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(same.amplitudes(), psi.amplitudes());
        assert!(matches!(displace(&psi, "S", Complex64::new(3.0, 0.0)), Err(Error::Truncation { .. })));
    }
}
