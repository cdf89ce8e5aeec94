use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::expectation::outcome_distribution;
use super::plan::{MeasurementPlan, YDisplacement};
use super::terms::{enumerate_terms, BellTerm, Letter};
use crate::detection::ShotErrorChannels;
use crate::fockspace::StateVector;
use crate::ghzbuilder::CatEncoding;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BellSample {
    pub estimate: f64,
    pub std_error: f64,
    pub terms: Vec<(BellTerm, CorrelationEstimate)>,
}

/// Each term draws from its own ChaCha stream so terms can be sampled in any
/// order (or in parallel) with identical results.
fn term_rng(seed: u64, term: &BellTerm) -> ChaCha8Rng {
    let stream = term.letters.iter().enumerate().filter(|(_, l)| **l == Letter::Y).map(|(k, _)| 1u64 << (4 - k)).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_with(
    state: &StateVector,
    term: &BellTerm,
    enc: &CatEncoding,
    y_form: YDisplacement,
    shots: usize,
    channels: &ShotErrorChannels,
    rng: &mut ChaCha8Rng,
) -> Result<CorrelationEstimate> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    let plan = MeasurementPlan::for_term(term, enc, y_form)?;
    let probs = outcome_distribution(state, &plan)?;
    let outcomes = WeightedIndex::new(probs).map_err(|e| Error::InvalidArgument(format!("outcome distribution: {e}")))?;
    if let Some(p) = channels.flip.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!("flip probability {p} outside [0, 1]")));
    }

    let mut sum = 0i64;
    for _ in 0..shots {
        let mut o = outcomes.sample(rng);
        // one uniform per party and shot keeps the stream aligned across channels
        for (k, p) in channels.flip.iter().enumerate() {
            if rng.random::<f64>() < *p {
                o ^= 1 << (4 - k);
            }
        }
        sum += if o.count_ones() % 2 == 0 { 1 } else { -1 };
    }
    let n = shots as f64;
    let mean = sum as f64 / n;
    let var = if shots > 1 { (1.0 - mean * mean).max(0.0) * n / (n - 1.0) } else { 0.0 };
    Ok(CorrelationEstimate { estimate: mean, std_error: (var / n).sqrt() })
}

/// Shot-by-shot estimate of the unsigned correlation `<prod_k sigma_k>`.
/// Outcomes are drawn from the exact 32-way readout distribution, then each
/// party's bit is flipped independently with `channels.flip[k]`.
pub fn sample_correlation(
    state: &StateVector,
    term: &BellTerm,
    enc: &CatEncoding,
    y_form: YDisplacement,
    shots: usize,
    channels: &ShotErrorChannels,
    seed: u64,
) -> Result<CorrelationEstimate> {
    sample_with(state, term, enc, y_form, shots, channels, &mut term_rng(seed, term))
}

/// Samples all 16 terms with `shots` each and combines them with their signs.
pub fn sample_bell(
    state: &StateVector,
    enc: &CatEncoding,
    y_form: YDisplacement,
    shots: usize,
    channels: &ShotErrorChannels,
    seed: u64,
) -> Result<BellSample> {
    let terms = enumerate_terms()
        .into_par_iter()
        .map(|t| Ok((t, sample_correlation(state, &t, enc, y_form, shots, channels, seed)?)))
        .collect::<Result<Vec<_>>>()?;
    let estimate = terms.iter().map(|(t, c)| t.sign as f64 * c.estimate).sum();
    let std_error = terms.iter().map(|(_, c)| c.std_error.powi(2)).sum::<f64>().sqrt();
    Ok(BellSample { estimate, std_error, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::SystemLayout;
    use crate::ghzbuilder::analytic_target_state;
    use crate::mermin::term_expectation;
    use num_complex::Complex64;

    fn fixture() -> (StateVector, CatEncoding) {
        let layout = SystemLayout::canonical(24).unwrap();
        let enc = CatEncoding::new(Complex64::new(2.6, 0.0), Complex64::new(0.0, 2.6)).unwrap();
        (analytic_target_state(&layout, &enc, 0.4).unwrap(), enc)
    }

    #[test]
    fn reproducible_under_seed() {
        let (s, enc) = fixture();
        let t = enumerate_terms()[3];
        let a = sample_correlation(&s, &t, &enc, YDisplacement::Perpendicular, 500, &ShotErrorChannels::NONE, 9).unwrap();
        let b = sample_correlation(&s, &t, &enc, YDisplacement::Perpendicular, 500, &ShotErrorChannels::NONE, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn certain_flip_negates_correlation() {
        let (s, enc) = fixture();
        let t = enumerate_terms()[5];
        let plain = sample_correlation(&s, &t, &enc, YDisplacement::Perpendicular, 2000, &ShotErrorChannels::NONE, 4).unwrap();
        for k in 0..5 {
            let mut ch = ShotErrorChannels::NONE;
            ch.flip[k] = 1.0;
            let flipped = sample_correlation(&s, &t, &enc, YDisplacement::Perpendicular, 2000, &ch, 4).unwrap();
            assert!((flipped.estimate + plain.estimate).abs() < 1e-12);
        }
    }

    #[test]
    fn converges_to_exact_value() {
        let (s, enc) = fixture();
        for t in enumerate_terms().iter().step_by(3) {
            let exact = term_expectation(&s, t, &enc, YDisplacement::Perpendicular).unwrap();
            let est = sample_correlation(&s, t, &enc, YDisplacement::Perpendicular, 20_000, &ShotErrorChannels::NONE, 11).unwrap();
            assert!((est.estimate - exact).abs() < 4.0 * est.std_error.max(1e-3), "{t}: {} vs {exact}", est.estimate);
        }
    }

    #[test]
    fn zero_shots_rejected() {
        let (s, enc) = fixture();
        let t = enumerate_terms()[0];
        assert!(sample_correlation(&s, &t, &enc, YDisplacement::Perpendicular, 0, &ShotErrorChannels::NONE, 1).is_err());
    }
}
