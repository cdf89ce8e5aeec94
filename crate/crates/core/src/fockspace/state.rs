use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::SystemLayout;
use super::operators::DiagonalOperator;
use crate::{Error, Result};

/// Complex amplitude vector over a [`SystemLayout`].
///
/// Gate methods come in two flavours: `apply_*` returns a new state and
/// `apply_*_mut` transforms in place behind `&mut self`.
#[derive(Clone, Debug)]
pub struct StateVector {
    layout: Arc<SystemLayout>,
    amplitudes: Vec<Complex64>,
}

/// All modes in their lowest level (`|g>` for qubits, `|0>` for oscillators).
pub fn ground_state(layout: &Arc<SystemLayout>) -> StateVector {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.total_dim()];
    amplitudes[0] = Complex64::new(1.0, 0.0);
    StateVector { layout: layout.clone(), amplitudes }
}

impl StateVector {
    pub fn from_amplitudes(layout: &Arc<SystemLayout>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch { expected: layout.total_dim(), actual: amplitudes.len() });
        }
        Ok(Self { layout: layout.clone(), amplitudes })
    }

    /// Product state from one amplitude vector per mode, in layout order.
    pub fn product(layout: &Arc<SystemLayout>, factors: &[Vec<Complex64>]) -> Result<Self> {
        if factors.len() != layout.len() {
            return Err(Error::DimensionMismatch { expected: layout.len(), actual: factors.len() });
        }
        for (k, f) in factors.iter().enumerate() {
            if f.len() != layout.dim(k) {
                return Err(Error::DimensionMismatch { expected: layout.dim(k), actual: f.len() });
            }
        }
        let amplitudes = (0..layout.total_dim())
            .map(|i| {
                factors
                    .iter()
                    .enumerate()
                    .fold(Complex64::new(1.0, 0.0), |acc, (k, f)| acc * f[layout.digit(i, k)])
            })
            .collect();
        Ok(Self { layout: layout.clone(), amplitudes })
    }

    pub fn layout(&self) -> &Arc<SystemLayout> {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm. Fails on a (numerically) zero vector.
    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NonFinite("cannot normalise a zero state".into()));
        }
        let inv = 1.0 / n;
        self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        Ok(n)
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    fn check_layout(&self, other: &SystemLayout) -> Result<()> {
        if *self.layout != *other {
            return Err(Error::LayoutMismatch);
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_layout(&other.layout)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2` for normalised inputs.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.amplitudes.iter_mut().for_each(|a| *a *= factor);
    }

    pub fn apply_mode_local(&self, label: &str, matrix: &DMatrix<Complex64>) -> Result<Self> {
        let mut out = self.clone();
        out.apply_mode_local_mut(label, matrix)?;
        Ok(out)
    }

    /// Applies `I ⊗ … ⊗ M ⊗ … ⊗ I` with `M` acting on mode `label`.
    pub fn apply_mode_local_mut(&mut self, label: &str, matrix: &DMatrix<Complex64>) -> Result<()> {
        let k = self.layout.index_of(label)?;
        self.apply_mode_index(k, matrix)
    }

    pub(crate) fn apply_mode_index(&mut self, k: usize, matrix: &DMatrix<Complex64>) -> Result<()> {
        let d = self.layout.dim(k);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: matrix.nrows().max(matrix.ncols()) });
        }
        let stride = self.layout.stride(k);
        let block = d * stride;
        let mut gathered = vec![Complex64::new(0.0, 0.0); d];
        for outer in (0..self.amplitudes.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (j, g) in gathered.iter_mut().enumerate() {
                    *g = self.amplitudes[base + j * stride];
                }
                for i in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, g) in gathered.iter().enumerate() {
                        acc += matrix[(i, j)] * g;
                    }
                    self.amplitudes[base + i * stride] = acc;
                }
            }
        }
        Ok(())
    }

    pub fn apply_pair_local(&self, mode_a: &str, mode_b: &str, matrix: &DMatrix<Complex64>) -> Result<Self> {
        let mut out = self.clone();
        out.apply_pair_local_mut(mode_a, mode_b, matrix)?;
        Ok(out)
    }

    /// Applies a `(da*db) x (da*db)` operator on modes `(mode_a, mode_b)`;
    /// the operator's row index is `ia * db + ib`, independent of the
    /// modes' positions in the layout.
    pub fn apply_pair_local_mut(&mut self, mode_a: &str, mode_b: &str, matrix: &DMatrix<Complex64>) -> Result<()> {
        let a = self.layout.index_of(mode_a)?;
        let b = self.layout.index_of(mode_b)?;
        if a == b {
            return Err(Error::InvalidArgument(format!("pair operator needs two distinct modes, got `{mode_a}` twice")));
        }
        let (da, db) = (self.layout.dim(a), self.layout.dim(b));
        let d = da * db;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: matrix.nrows().max(matrix.ncols()) });
        }
        let (sa, sb) = (self.layout.stride(a), self.layout.stride(b));
        let offsets: Vec<usize> = (0..d).map(|ij| (ij / db) * sa + (ij % db) * sb).collect();
        let mut gathered = vec![Complex64::new(0.0, 0.0); d];
        for base in 0..self.amplitudes.len() {
            if self.layout.digit(base, a) != 0 || self.layout.digit(base, b) != 0 {
                continue;
            }
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amplitudes[base + off];
            }
            for (i, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, g) in gathered.iter().enumerate() {
                    acc += matrix[(i, j)] * g;
                }
                self.amplitudes[base + off] = acc;
            }
        }
        Ok(())
    }

    pub fn evolve_diagonal(&self, hamiltonian: &DiagonalOperator, t: f64) -> Result<Self> {
        let mut out = self.clone();
        out.evolve_diagonal_mut(hamiltonian, t)?;
        Ok(out)
    }

    /// `psi_i <- psi_i * exp(-i H_i t)`; phase-only, so norm is preserved exactly.
    pub fn evolve_diagonal_mut(&mut self, hamiltonian: &DiagonalOperator, t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("evolution time must be >= 0, got {t}")));
        }
        self.check_layout(hamiltonian.layout())?;
        for (a, h) in self.amplitudes.iter_mut().zip(hamiltonian.diagonal()) {
            *a *= Complex64::from_polar(1.0, -h * t);
        }
        Ok(())
    }

    /// Population of each level of mode `label`.
    pub fn mode_populations(&self, label: &str) -> Result<Vec<f64>> {
        let k = self.layout.index_of(label)?;
        let mut pops = vec![0.0; self.layout.dim(k)];
        for (i, a) in self.amplitudes.iter().enumerate() {
            pops[self.layout.digit(i, k)] += a.norm_sqr();
        }
        Ok(pops)
    }

    /// Reduced density matrix of a single mode, `rho_{jk} = sum_rest psi_{..j..} psi*_{..k..}`.
    pub fn reduced_density_matrix(&self, label: &str) -> Result<DMatrix<Complex64>> {
        let k = self.layout.index_of(label)?;
        let d = self.layout.dim(k);
        let stride = self.layout.stride(k);
        let mut rho = DMatrix::zeros(d, d);
        for outer in (0..self.amplitudes.len()).step_by(d * stride) {
            for inner in 0..stride {
                let base = outer + inner;
                for i in 0..d {
                    let ai = self.amplitudes[base + i * stride];
                    if ai == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in 0..d {
                        rho[(i, j)] += ai * self.amplitudes[base + j * stride].conj();
                    }
                }
            }
        }
        Ok(rho)
    }

    /// Zeroes every amplitude whose `label` digit differs from `level`
    /// (unnormalised projection).
    pub fn project_mode(&self, label: &str, level: usize) -> Result<Self> {
        let k = self.layout.index_of(label)?;
        if level >= self.layout.dim(k) {
            return Err(Error::InvalidArgument(format!("level {level} out of range for `{label}`")));
        }
        let mut out = self.clone();
        for (i, a) in out.amplitudes.iter_mut().enumerate() {
            if self.layout.digit(i, k) != level {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(out)
    }
}
