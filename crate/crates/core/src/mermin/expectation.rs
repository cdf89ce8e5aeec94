use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::plan::{MeasurementPlan, YDisplacement};
use super::terms::{enumerate_terms, BellTerm, Letter};
use crate::fockspace::StateVector;
use crate::ghzbuilder::CatEncoding;
use crate::pulsesim::{displace, rotate_qubit, BlochAxis};
use crate::Result;

/// Number of joint readout outcomes of the five parties.
pub const OUTCOMES: usize = 32;

fn shift_cavities(state: &StateVector, gamma: [Complex64; 2]) -> Result<StateVector> {
    displace(&displace(state, "S1", -gamma[0])?, "S2", -gamma[1])
}

fn readout(shifted: &StateVector, axes: &[BlochAxis; 3]) -> Result<[f64; OUTCOMES]> {
    let mut s = shifted.clone();
    for (q, axis) in ["Q1", "Q2", "Q3"].iter().zip(axes) {
        s = rotate_qubit(&s, q, *axis, FRAC_PI_2)?;
    }
    let layout = s.layout().clone();
    let mut p = [0.0; OUTCOMES];
    for (i, z) in s.amplitudes().iter().enumerate() {
        let d = layout.multi_index(i);
        let o = d[0] << 4 | d[1] << 3 | d[2] << 2 | (d[3] & 1) << 1 | (d[4] & 1);
        p[o] += z.norm_sqr();
    }
    Ok(p)
}

/// Joint outcome probabilities for `plan`. Bit `4 - k` of the index is set
/// when party `k` reads -1 (qubit `|e>`, odd displaced parity).
pub fn outcome_distribution(state: &StateVector, plan: &MeasurementPlan) -> Result<[f64; OUTCOMES]> {
    state.layout().ensure_canonical()?;
    readout(&shift_cavities(state, plan.cavity_gamma)?, &plan.qubit_axes)
}

pub(crate) fn product_mean(p: &[f64; OUTCOMES]) -> f64 {
    p.iter().enumerate().map(|(o, &w)| if o.count_ones() % 2 == 0 { w } else { -w }).sum()
}

/// Unsigned correlation `<prod_k sigma_k>` of one term.
pub fn term_expectation(state: &StateVector, term: &BellTerm, enc: &CatEncoding, y_form: YDisplacement) -> Result<f64> {
    let plan = MeasurementPlan::for_term(term, enc, y_form)?;
    Ok(product_mean(&outcome_distribution(state, &plan)?) / state.norm_sqr())
}

/// All 16 correlations, sharing the cavity displacements between terms.
pub fn term_expectations(state: &StateVector, enc: &CatEncoding, y_form: YDisplacement) -> Result<Vec<(BellTerm, f64)>> {
    state.layout().ensure_canonical()?;
    let norm = state.norm_sqr();
    let terms = enumerate_terms();
    let mut groups: BTreeMap<(Letter, Letter), Vec<usize>> = BTreeMap::new();
    for (i, t) in terms.iter().enumerate() {
        groups.entry((t.letters[3], t.letters[4])).or_default().push(i);
    }
    let mut values = vec![0.0; terms.len()];
    for members in groups.values() {
        let plan = MeasurementPlan::for_term(&terms[members[0]], enc, y_form)?;
        let shifted = shift_cavities(state, plan.cavity_gamma)?;
        for &i in members {
            let plan = MeasurementPlan::for_term(&terms[i], enc, y_form)?;
            values[i] = product_mean(&readout(&shifted, &plan.qubit_axes)?) / norm;
        }
    }
    Ok(terms.into_iter().zip(values).collect())
}

/// `sum_t sign_t <t>`.
pub fn bell_expectation(state: &StateVector, enc: &CatEncoding, y_form: YDisplacement) -> Result<f64> {
    Ok(term_expectations(state, enc, y_form)?.iter().map(|(t, v)| t.sign as f64 * v).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{ground_state, SystemLayout};
    use crate::ghzbuilder::{analytic_target_state, PAPER_BETA1, PAPER_BETA2};

    #[test]
    fn grouped_and_single_term_routes_agree() {
        let layout = SystemLayout::canonical(31).unwrap();
        let enc = CatEncoding::new(PAPER_BETA1, PAPER_BETA2).unwrap();
        let s = analytic_target_state(&layout, &enc, 0.3).unwrap();
        let all = term_expectations(&s, &enc, YDisplacement::Perpendicular).unwrap();
        for (t, v) in &all {
            let single = term_expectation(&s, t, &enc, YDisplacement::Perpendicular).unwrap();
            assert!((single - v).abs() < 1e-12);
            assert!(v.abs() < 1.0);
        }
        let mut phased = s.clone();
        phased.scale(Complex64::from_polar(1.0, 0.77));
        let a = bell_expectation(&s, &enc, YDisplacement::Perpendicular).unwrap();
        let b = bell_expectation(&phased, &enc, YDisplacement::Perpendicular).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn paper_state_violates_four_partite_bound() {
        let layout = SystemLayout::canonical(31).unwrap();
        let enc = CatEncoding::new(PAPER_BETA1, PAPER_BETA2).unwrap();
        let s = analytic_target_state(&layout, &enc, 0.0).unwrap();
        let b = bell_expectation(&s, &enc, YDisplacement::Perpendicular).unwrap();
        assert!(b > 8.0 && b < 16.0, "{b}");
        // regression baseline
        assert!((b - 13.3).abs() < 0.3, "{b}");
        let literal = bell_expectation(&s, &enc, YDisplacement::Literal).unwrap();
        assert!(literal < b - 1.0, "{literal}");
    }

    #[test]
    fn ground_state_has_no_x_correlation() {
        let layout = SystemLayout::canonical(20).unwrap();
        let enc = CatEncoding::new(Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)).unwrap();
        let s = ground_state(&layout);
        let t = enumerate_terms()[0];
        assert!(term_expectation(&s, &t, &enc, YDisplacement::Perpendicular).unwrap().abs() < 1e-12);
    }
}
