//! Displaced-parity expectations and Wigner functions.
//!
//! `W(g1, g2) = (4/pi^2) <P1(g1) P2(g2)>` with `Pj(g) = D(g) (-1)^n D(g)†`.
//! Grid points whose displaced state populates the truncation edge are
//! reported as `NaN` instead of a number.

use std::f64::consts::{FRAC_2_PI, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fockspace::{ModeKind, StateVector};
use crate::pulsesim::{displace, displace_vector, displacement_matrix, rotate_qubit, BlochAxis};
use crate::tolerance;
use crate::{Error, Result};

const TWO_MODE_NORM: f64 = 4.0 / (PI * PI);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WignerCut {
    /// `g1, g2` both real.
    ReRe,
    /// `g1, g2` both imaginary.
    ImIm,
    /// Full complex plane of one mode.
    Single,
}

/// Outcome group of the product `X1 X2 X3` of the three qubit readouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Plus,
    Minus,
}

impl Condition {
    pub fn value(self) -> i8 {
        match self {
            Condition::Plus => 1,
            Condition::Minus => -1,
        }
    }
}

/// Which state Q3 is projected onto before a single-cavity map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitLevel {
    G,
    E,
}

impl QubitLevel {
    pub fn index(self) -> usize {
        match self {
            QubitLevel::G => 0,
            QubitLevel::E => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points_per_axis: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { half_width: 2.5, points_per_axis: 51 }
    }
}

impl GridSpec {
    pub fn axis(&self) -> Vec<f64> {
        let n = self.points_per_axis;
        if n == 1 {
            return vec![0.0];
        }
        (0..n).map(|i| -self.half_width + 2.0 * self.half_width * i as f64 / (n - 1) as f64).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.points_per_axis == 0 || !(self.half_width >= 0.0) {
            return Err(Error::InvalidArgument("grid needs >= 1 point and a non-negative half width".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WignerGrid {
    pub cut: WignerCut,
    /// Phase-space point of each mode sitting at the grid origin.
    pub centers: Vec<Complex64>,
    pub half_width: f64,
    pub points_per_axis: usize,
    /// `values[(i, j)]`: row `i` walks the first axis, column `j` the second.
    #[serde(skip)]
    pub values: DMatrix<f64>,
}

impl WignerGrid {
    pub fn axis(&self) -> Vec<f64> {
        GridSpec { half_width: self.half_width, points_per_axis: self.points_per_axis }.axis()
    }

    /// Displacement arguments `(g1, g2)` of grid point `(i, j)`, relative to the centers.
    pub fn point(&self, i: usize, j: usize) -> (Complex64, Complex64) {
        let axis = self.axis();
        let (a, b) = (axis[i], axis[j]);
        match self.cut {
            WignerCut::ReRe => (Complex64::new(a, 0.0), Complex64::new(b, 0.0)),
            WignerCut::ImIm => (Complex64::new(0.0, a), Complex64::new(0.0, b)),
            WignerCut::Single => (Complex64::new(a, b), Complex64::new(0.0, 0.0)),
        }
    }

    /// Largest finite value and its grid indices.
    pub fn argmax(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.values.nrows() {
            for j in 0..self.values.ncols() {
                let v = self.values[(i, j)];
                if v.is_finite() && best.is_none_or(|b| v > b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        best
    }
}

fn parity_sum(amplitudes: &[Complex64], digit: impl Fn(usize) -> usize) -> f64 {
    amplitudes
        .iter()
        .enumerate()
        .map(|(i, z)| if digit(i) % 2 == 0 { z.norm_sqr() } else { -z.norm_sqr() })
        .sum()
}

/// `<D(g) P D(g)†>` on cavity `label`.
pub fn displaced_parity_expect(state: &StateVector, label: &str, gamma: Complex64) -> Result<f64> {
    let k = state.layout().index_of_kind(label, ModeKind::Oscillator)?;
    let shifted = displace(state, label, -gamma)?;
    let layout = shifted.layout().clone();
    Ok(parity_sum(shifted.amplitudes(), |i| layout.digit(i, k)))
}

/// Joint displaced-parity `<P1(g1) P2(g2)>` over cavities `S1`, `S2`.
pub fn joint_displaced_parity(state: &StateVector, gamma1: Complex64, gamma2: Complex64) -> Result<f64> {
    let layout = state.layout().clone();
    let (k1, k2) = (layout.index_of_kind("S1", ModeKind::Oscillator)?, layout.index_of_kind("S2", ModeKind::Oscillator)?);
    let shifted = displace(&displace(state, "S1", -gamma1)?, "S2", -gamma2)?;
    Ok(parity_sum(shifted.amplitudes(), |i| layout.digit(i, k1) + layout.digit(i, k2)))
}

pub fn joint_wigner(state: &StateVector, gamma1: Complex64, gamma2: Complex64) -> Result<f64> {
    Ok(TWO_MODE_NORM * joint_displaced_parity(state, gamma1, gamma2)?)
}

/// Exact branch enumeration of a joint-Wigner cut after `R_-y(pi/2)` on
/// every qubit, grouped by the product of the three readout values.
#[derive(Clone, Debug)]
pub struct JointWignerBranches {
    pub p_plus: f64,
    pub p_minus: f64,
    pub plus: WignerGrid,
    pub minus: WignerGrid,
    pub unconditional: WignerGrid,
}

impl JointWignerBranches {
    pub fn select(&self, condition: Condition) -> (f64, &WignerGrid) {
        match condition {
            Condition::Plus => (self.p_plus, &self.plus),
            Condition::Minus => (self.p_minus, &self.minus),
        }
    }
}

/// Evaluates the `cut` on a grid after pre-displacing `S1`, `S2` by
/// `pre_displacement` (use `-beta/2` to move the fringe centre to the origin).
pub fn joint_wigner_branches(
    state: &StateVector,
    cut: WignerCut,
    spec: GridSpec,
    pre_displacement: [Complex64; 2],
) -> Result<JointWignerBranches> {
    spec.validate()?;
    if cut == WignerCut::Single {
        return Err(Error::InvalidArgument("joint Wigner needs a ReRe or ImIm cut".into()));
    }
    let layout = state.layout().clone();
    layout.ensure_canonical()?;
    let mut rotated = state.clone();
    for q in ["Q1", "Q2", "Q3"] {
        rotated = rotate_qubit(&rotated, q, BlochAxis::MINUS_Y, std::f64::consts::FRAC_PI_2)?;
    }
    rotated = displace(&displace(&rotated, "S1", pre_displacement[0])?, "S2", pre_displacement[1])?;

    let total = layout.total_dim();
    let sign: Vec<bool> = (0..total).map(|i| (layout.digit(i, 0) + layout.digit(i, 1) + layout.digit(i, 2)) % 2 == 0).collect();
    let (mut p_plus, mut p_minus) = (0.0, 0.0);
    for (z, &plus) in rotated.amplitudes().iter().zip(&sign) {
        if plus {
            p_plus += z.norm_sqr();
        } else {
            p_minus += z.norm_sqr();
        }
    }

    let axis = spec.axis();
    let n = axis.len();
    let to_gamma = |x: f64| match cut {
        WignerCut::ReRe => Complex64::new(x, 0.0),
        _ => Complex64::new(0.0, x),
    };
    let (d1, d2) = (layout.dim(3), layout.dim(4));
    let m1: Vec<DMatrix<Complex64>> = axis.iter().map(|&x| displacement_matrix(-to_gamma(x), d1)).collect();
    let m2: Vec<DMatrix<Complex64>> = axis.iter().map(|&x| displacement_matrix(-to_gamma(x), d2)).collect();
    let edge = tolerance::TRUNCATION_EDGE_LEVELS;

    let mut plus = DMatrix::<f64>::zeros(n, n);
    let mut minus = DMatrix::<f64>::zeros(n, n);
    let mut all = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut s2 = rotated.clone();
        s2.apply_mode_index(4, &m2[j])?;
        for i in 0..n {
            let mut s = s2.clone();
            s.apply_mode_index(3, &m1[i])?;
            let (mut w_plus, mut w_minus, mut leak) = (0.0, 0.0, 0.0);
            for (idx, z) in s.amplitudes().iter().enumerate() {
                let (n1, n2) = (layout.digit(idx, 3), layout.digit(idx, 4));
                let p = z.norm_sqr();
                if n1 + edge >= d1 || n2 + edge >= d2 {
                    leak += p;
                }
                let v = if (n1 + n2) % 2 == 0 { p } else { -p };
                if sign[idx] {
                    w_plus += v;
                } else {
                    w_minus += v;
                }
            }
            if leak > tolerance::TRUNCATION_EDGE {
                plus[(i, j)] = f64::NAN;
                minus[(i, j)] = f64::NAN;
                all[(i, j)] = f64::NAN;
                continue;
            }
            all[(i, j)] = TWO_MODE_NORM * (w_plus + w_minus);
            plus[(i, j)] = if p_plus > tolerance::DEGENERATE_BRANCH { TWO_MODE_NORM * w_plus / p_plus } else { f64::NAN };
            minus[(i, j)] = if p_minus > tolerance::DEGENERATE_BRANCH { TWO_MODE_NORM * w_minus / p_minus } else { f64::NAN };
        }
    }
    let centers = vec![-pre_displacement[0], -pre_displacement[1]];
    let grid = |values| WignerGrid { cut, centers: centers.clone(), half_width: spec.half_width, points_per_axis: n, values };
    Ok(JointWignerBranches { p_plus, p_minus, plus: grid(plus), minus: grid(minus), unconditional: grid(all) })
}

/// Joint Wigner cut conditioned on `X1 X2 X3 = condition`.
pub fn conditional_joint_wigner(
    state: &StateVector,
    condition: Condition,
    cut: WignerCut,
    spec: GridSpec,
    pre_displacement: [Complex64; 2],
) -> Result<WignerGrid> {
    let branches = joint_wigner_branches(state, cut, spec, pre_displacement)?;
    let (p, grid) = branches.select(condition);
    if p < tolerance::DEGENERATE_BRANCH {
        return Err(Error::NegligibleProjection(p));
    }
    Ok(grid.clone())
}

/// Single-mode density matrix kept as its eigen-decomposition, so each
/// displaced-parity evaluation costs `O(rank * dim^2)`.
#[derive(Clone, Debug)]
pub struct SingleModeDensity {
    dim: usize,
    components: Vec<(f64, Vec<Complex64>)>,
    edge_limit: f64,
}

impl SingleModeDensity {
    pub fn from_matrix(rho: &DMatrix<Complex64>) -> Result<Self> {
        let dim = rho.nrows();
        if rho.ncols() != dim || dim == 0 {
            return Err(Error::DimensionMismatch { expected: dim, actual: rho.ncols() });
        }
        let trace: f64 = (0..dim).map(|i| rho[(i, i)].re).sum();
        if !(trace > tolerance::DEGENERATE_BRANCH) {
            return Err(Error::NegligibleProjection(trace));
        }
        let hermitian = (rho + rho.adjoint()) / Complex64::new(2.0 * trace, 0.0);
        let eig = SymmetricEigen::new(hermitian);
        let components = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > tolerance::DEGENERATE_BRANCH)
            .map(|(k, &l)| (l, eig.eigenvectors.column(k).iter().copied().collect()))
            .collect();
        Ok(Self { dim, components, edge_limit: tolerance::TRUNCATION_EDGE })
    }

    /// Reduced state of `label`, renormalised.
    pub fn from_state(state: &StateVector, label: &str) -> Result<Self> {
        state.layout().index_of_kind(label, ModeKind::Oscillator)?;
        Self::from_matrix(&state.reduced_density_matrix(label)?)
    }

    pub fn with_edge_limit(mut self, limit: f64) -> Self {
        self.edge_limit = limit;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Tr(rho a)`.
    pub fn mean_amplitude(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, v) in &self.components {
            for n in 1..self.dim {
                acc += v[n - 1].conj() * v[n] * (n as f64).sqrt() * *l;
            }
        }
        acc
    }

    /// `<D(g) P D(g)†>`, or `None` when the displaced state reaches the truncation edge.
    pub fn displaced_parity(&self, gamma: Complex64) -> Option<f64> {
        let edge = tolerance::TRUNCATION_EDGE_LEVELS;
        let (mut parity, mut leak) = (0.0, 0.0);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.dim];
        for (l, v) in &self.components {
            buf.copy_from_slice(v);
            displace_vector(-gamma, &mut buf);
            for (n, z) in buf.iter().enumerate() {
                let p = l * z.norm_sqr();
                parity += if n % 2 == 0 { p } else { -p };
                if n + edge >= self.dim {
                    leak += p;
                }
            }
        }
        (leak <= self.edge_limit).then_some(parity)
    }

    /// `(2/pi) <D(g) P D(g)†>`, `NaN` past the truncation edge.
    pub fn wigner(&self, gamma: Complex64) -> f64 {
        self.displaced_parity(gamma).map_or(f64::NAN, |p| FRAC_2_PI * p)
    }

    pub fn wigner_grid(&self, center: Complex64, spec: GridSpec) -> Result<WignerGrid> {
        spec.validate()?;
        let axis = spec.axis();
        let n = axis.len();
        let values = DMatrix::from_fn(n, n, |i, j| self.wigner(center + Complex64::new(axis[i], axis[j])));
        Ok(WignerGrid { cut: WignerCut::Single, centers: vec![center], half_width: spec.half_width, points_per_axis: n, values })
    }
}

/// Projects Q3 onto `level`, traces down to `cavity`, and maps its Wigner
/// function over the plane around `center`.
pub fn conditional_single_wigner(
    state: &StateVector,
    project_q3: QubitLevel,
    cavity: &str,
    center: Complex64,
    spec: GridSpec,
) -> Result<WignerGrid> {
    projected_density(state, project_q3, cavity)?.wigner_grid(center, spec)
}

pub(crate) fn projected_density(state: &StateVector, project_q3: QubitLevel, cavity: &str) -> Result<SingleModeDensity> {
    state.layout().index_of_kind("Q3", ModeKind::TwoLevel)?;
    let projected = state.project_mode("Q3", project_q3.index())?;
    let p = projected.norm_sqr() / state.norm_sqr();
    if p < tolerance::MIN_PROJECTION {
        return Err(Error::NegligibleProjection(p));
    }
    SingleModeDensity::from_state(&projected, cavity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{coherent_amplitudes, coherent_state, ground_state, ModeSpec, SystemLayout};
    use crate::pulsesim::displacement_matrix;

    fn single(dim: usize) -> std::sync::Arc<SystemLayout> {
        SystemLayout::build(vec![ModeSpec::oscillator("S1", dim)]).unwrap()
    }

    #[test]
    fn vacuum_and_fock_parity() {
        let l = single(10);
        let vac = ground_state(&l);
        assert!((displaced_parity_expect(&vac, "S1", Complex64::new(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-14);
        let mut amps = vec![Complex64::new(0.0, 0.0); 10];
        amps[1] = Complex64::new(1.0, 0.0);
        let one = StateVector::from_amplitudes(&l, amps).unwrap();
        assert!((displaced_parity_expect(&one, "S1", Complex64::new(0.0, 0.0)).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn coherent_displaced_parity() {
        let l = single(40);
        let alpha = Complex64::new(0.9, -0.6);
        let s = coherent_state(&l, "S1", alpha).unwrap();
        for gamma in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.5), Complex64::new(-1.0, 0.2)] {
            let got = displaced_parity_expect(&s, "S1", gamma).unwrap();
            assert!((got - (-2.0 * (alpha - gamma).norm_sqr()).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn matches_explicit_operator() {
        let dim = 16;
        let l = SystemLayout::build(vec![ModeSpec::qubit("Q"), ModeSpec::oscillator("S1", dim)]).unwrap();
        let amps: Vec<Complex64> = (0..2 * dim)
            .map(|i| {
                let n = (i % dim) as f64;
                Complex64::new((1.0 + 0.3 * i as f64).cos(), 0.2 * (n * 0.7).sin()) * (-(n * n) / 8.0).exp()
            })
            .collect();
        let s = StateVector::from_amplitudes(&l, amps).unwrap().normalized().unwrap();
        let gamma = Complex64::new(0.3, -0.4);
        let d = displacement_matrix(gamma, dim);
        let p = DMatrix::<Complex64>::from_fn(dim, dim, |i, j| if i == j { Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0) } else { Complex64::new(0.0, 0.0) });
        let op = &d * p * d.adjoint();
        let full = DMatrix::<Complex64>::identity(2, 2).kronecker(&op);
        let v = nalgebra::DVector::from_vec(s.amplitudes().to_vec());
        let expected = (v.adjoint() * full * &v)[(0, 0)].re;
        let got = displaced_parity_expect(&s, "S1", gamma).unwrap();
        assert!((got - expected).abs() < 1e-10);
    }

    #[test]
    fn density_route_agrees_with_state_route() {
        let l = single(30);
        let alpha = Complex64::new(1.2, 0.4);
        let s = coherent_state(&l, "S1", alpha).unwrap();
        let rho = SingleModeDensity::from_state(&s, "S1").unwrap();
        assert!((rho.mean_amplitude() - alpha).norm() < 1e-9);
        for gamma in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.4, -0.8)] {
            let a = rho.displaced_parity(gamma).unwrap();
            let b = displaced_parity_expect(&s, "S1", gamma).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn edge_points_are_masked() {
        let l = single(12);
        let s = ground_state(&l);
        let rho = SingleModeDensity::from_state(&s, "S1").unwrap();
        assert!(rho.wigner(Complex64::new(3.0, 0.0)).is_nan());
        assert!(rho.wigner(Complex64::new(0.0, 0.0)) > 0.63);
        assert!(displaced_parity_expect(&s, "S1", Complex64::new(3.0, 0.0)).is_err());
    }

    #[test]
    fn product_coherent_factorizes() {
        let l = SystemLayout::canonical(20).unwrap();
        let (a1, a2) = (Complex64::new(0.6, 0.1), Complex64::new(-0.3, 0.7));
        let c1 = coherent_amplitudes(a1, 20).amplitudes;
        let c2 = coherent_amplitudes(a2, 20).amplitudes;
        let g = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let s = StateVector::product(&l, &[g.clone(), g.clone(), g, c1, c2]).unwrap().normalized().unwrap();
        let (g1, g2) = (Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.5));
        let expected = TWO_MODE_NORM * (-2.0 * (a1 - g1).norm_sqr()).exp() * (-2.0 * (a2 - g2).norm_sqr()).exp();
        assert!((joint_wigner(&s, g1, g2).unwrap() - expected).abs() < 1e-9);
        let vac = ground_state(&l);
        assert!((joint_wigner(&vac, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap() - TWO_MODE_NORM).abs() < 1e-12);
    }

    #[test]
    fn grid_axis() {
        let spec = GridSpec::default();
        let axis = spec.axis();
        assert_eq!(axis.len(), 51);
        assert_eq!(axis[0], -2.5);
        assert!((axis[50] - 2.5).abs() < 1e-15);
        assert!(axis[25].abs() < 1e-15);
    }
}
