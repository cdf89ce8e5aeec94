use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::pauli::pauli_bell;
use super::terms::{enumerate_terms, BellTerm, Letter};

/// Minimum and maximum of `sum sign * prod(x_k or y_k)` over all 4^5
/// deterministic assignments `x_k, y_k in {+1, -1}`.
pub fn classical_extremes(terms: &[BellTerm]) -> (i32, i32) {
    let (mut lo, mut hi) = (i32::MAX, i32::MIN);
    for strategy in 0u32..1024 {
        let value = |k: usize, l: Letter| -> i32 {
            let bit = 2 * k + usize::from(l == Letter::Y);
            if strategy >> bit & 1 == 1 { -1 } else { 1 }
        };
        let total: i32 = terms
            .iter()
            .map(|t| t.sign as i32 * t.letters.iter().enumerate().map(|(k, &l)| value(k, l)).product::<i32>())
            .sum();
        lo = lo.min(total);
        hi = hi.max(total);
    }
    (lo, hi)
}

pub fn classical_bound_bruteforce() -> i32 {
    classical_extremes(&enumerate_terms()).1
}

#[derive(Clone, Debug, Serialize)]
pub struct FourPartiteReport {
    pub samples: usize,
    /// Largest `|<B>|` found over all samples after the phase search.
    pub max_abs: f64,
    /// `GHZ4 x |+>` evaluated with all measurement phases aligned.
    pub ghz4_aligned: f64,
    pub values: Vec<f64>,
}

impl FourPartiteReport {
    pub fn within(&self, bound: f64) -> bool {
        self.values.iter().all(|v| *v <= bound)
    }
}

/// Applies `diag(1, e^{i a_k})` to every party.
fn phase_rotate(psi: &[Complex64], phases: &[f64; 5]) -> Vec<Complex64> {
    psi.iter()
        .enumerate()
        .map(|(i, z)| {
            let a: f64 = (0..5).filter(|k| i >> (4 - k) & 1 == 1).map(|k| phases[k]).sum();
            z * Complex64::from_polar(1.0, a)
        })
        .collect()
}

/// Coordinate search over one phase per party: a coarse scan followed by a
/// golden-section polish.
fn max_over_phases(psi: &[Complex64]) -> f64 {
    let eval = |p: &[f64; 5]| pauli_bell(&phase_rotate(psi, p)).abs();
    let mut phases = [0.0; 5];
    let mut best = eval(&phases);
    let coarse = 24;
    let h = TAU / coarse as f64;
    for _ in 0..2 {
        for k in 0..5 {
            for s in 0..coarse {
                let mut p = phases;
                p[k] = s as f64 * h;
                let v = eval(&p);
                if v > best {
                    best = v;
                    phases = p;
                }
            }
            let g = (5f64.sqrt() - 1.0) / 2.0;
            let (mut a, mut b) = (phases[k] - h, phases[k] + h);
            for _ in 0..40 {
                let (c, d) = (b - g * (b - a), a + g * (b - a));
                let mut pc = phases;
                pc[k] = c;
                let mut pd = phases;
                pd[k] = d;
                if eval(&pc) > eval(&pd) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let mut p = phases;
            p[k] = 0.5 * (a + b);
            let v = eval(&p);
            if v > best {
                best = v;
                phases = p;
            }
        }
    }
    best
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `four x single` product with the single party at position `alone`.
fn embed(four: &[Complex64], single: &[Complex64], alone: usize) -> Vec<Complex64> {
    (0..32)
        .map(|i| {
            let b = i >> (4 - alone) & 1;
            let high = i >> (5 - alone);
            let low = i & ((1 << (4 - alone)) - 1);
            let rest = high << (4 - alone) | low;
            four[rest] * single[b]
        })
        .collect()
}

/// Samples states with at most four-party entanglement (a random
/// four-party state, partly steered towards GHZ4, times a random one-party
/// state, cycling the lone party through all five positions) and records
/// the phase-optimised `|<B>|` of each.
pub fn four_partite_bound_check(samples: usize, seed: u64) -> FourPartiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ghz4 = vec![Complex64::new(0.0, 0.0); 16];
    ghz4[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    ghz4[15] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let plus = [Complex64::new(FRAC_1_SQRT_2, 0.0); 2];
    let ghz4_aligned = pauli_bell(&embed(&ghz4, &plus, 4));

    let mut values = Vec::with_capacity(samples);
    for s in 0..samples {
        let noise = random_unit(&mut rng, 16);
        let mix: f64 = rng.random_range(0.0..1.0);
        let phase = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
        let mut four: Vec<Complex64> = noise.iter().map(|z| z * mix).collect();
        four[0] += (1.0 - mix) * FRAC_1_SQRT_2;
        four[15] += (1.0 - mix) * FRAC_1_SQRT_2 * phase;
        let norm = four.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        four.iter_mut().for_each(|z| *z /= norm);
        let single = random_unit(&mut rng, 2);
        values.push(max_over_phases(&embed(&four, &single, s % 5)));
    }
    let max_abs = values.iter().copied().fold(0.0, f64::max);
    FourPartiteReport { samples, max_abs, ghz4_aligned, values }
}
