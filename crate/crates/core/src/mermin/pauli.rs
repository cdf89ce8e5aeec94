//! Exact Pauli-word evaluation for five two-level parties (32 amplitudes,
//! party 0 most significant, `|0> = |up>`).

use num_complex::Complex64;

use super::terms::{enumerate_terms, Letter};

/// `<psi| sigma_1 x ... x sigma_5 |psi>` with `X|0> = |1>`, `Y|0> = i|1>`, `Y|1> = -i|0>`.
pub fn pauli_word_expectation(psi: &[Complex64], letters: &[Letter; 5]) -> f64 {
    assert_eq!(psi.len(), 32);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, z) in psi.iter().enumerate() {
        let mut j = i;
        let mut phase = Complex64::new(1.0, 0.0);
        for (k, l) in letters.iter().enumerate() {
            let bit = 1 << (4 - k);
            if *l == Letter::Y {
                phase *= if i & bit == 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
            }
            j ^= bit;
        }
        acc += psi[j].conj() * phase * z;
    }
    acc.re
}

pub fn pauli_bell(psi: &[Complex64]) -> f64 {
    enumerate_terms().iter().map(|t| t.sign as f64 * pauli_word_expectation(psi, &t.letters)).sum()
}

/// `(|00000> + e^{i phi} |11111>) / sqrt 2`.
pub fn ghz5(phi: f64) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 32];
    v[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[31] = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phi);
    v
}
