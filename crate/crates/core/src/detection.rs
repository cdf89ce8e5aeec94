//! Detection-imperfection model: qubit readout and cavity parity fidelities,
//! and their effect on the visibility of the Bell signal.
//!
//! Five independent error sources enter, one per measured party: the
//! terminal readout of Q3 (`p_Q`), the QND readouts of Q1 and Q2 that
//! precede their use as parity ancillas (`p_QND`), and the two cavity
//! parity measurements (`p_S`).

use serde::{Deserialize, Serialize};

/// QND repeat fidelities and state distinguishability of one qubit readout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitReadout {
    pub pgg: f64,
    pub pee: f64,
    pub pm: f64,
}

/// Parity-measurement fidelities for both mapping protocols and both parities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavityParity {
    pub p00_even: f64,
    pub p00_odd: f64,
    pub p0pi_even: f64,
    pub p0pi_odd: f64,
}

impl CavityParity {
    pub const PERFECT: Self = Self { p00_even: 1.0, p00_odd: 1.0, p0pi_even: 1.0, p0pi_odd: 1.0 };
}

impl QubitReadout {
    pub const PERFECT: Self = Self { pgg: 1.0, pee: 1.0, pm: 1.0 };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionModel {
    /// Q1, Q2, Q3.
    pub qubits: [QubitReadout; 3],
    /// S1, S2.
    pub cavities: [CavityParity; 2],
    /// Readout duration `T_r`, seconds.
    pub readout_time: f64,
    /// Qubit `T_1`, seconds (Q1, Q2, Q3).
    pub t1: [f64; 3],
}

/// The five fidelities that enter the visibility estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorFidelities {
    pub p_q3: f64,
    pub p_qnd1: f64,
    pub p_qnd2: f64,
    pub p_s1: f64,
    pub p_s2: f64,
}

impl ErrorFidelities {
    pub fn as_array(&self) -> [f64; 5] {
        [self.p_q3, self.p_qnd1, self.p_qnd2, self.p_s1, self.p_s2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Visibility {
    /// Probability of no detection error.
    pub p0: f64,
    /// Probability of exactly one detection error (first order).
    pub p1: f64,
    /// `p0 - p1`.
    pub v: f64,
    /// `prod(2 p_i - 1)`: the exact scaling for independent sign flips.
    pub exact_product: f64,
    pub fidelities: ErrorFidelities,
}

/// Independent flip probabilities attached to each measured party, in the
/// Bell party order `(Q1, Q2, Q3, S1, S2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShotErrorChannels {
    pub flip: [f64; 5],
}

impl ShotErrorChannels {
    pub const NONE: Self = Self { flip: [0.0; 5] };
}

impl DetectionModel {
    pub fn perfect() -> Self {
        Self {
            qubits: [QubitReadout::PERFECT; 3],
            cavities: [CavityParity::PERFECT; 2],
            readout_time: 0.0,
            t1: [f64::INFINITY; 3],
        }
    }

    /// `(p_gg + p_ee) / 2` for qubit `k` in `1..=3`.
    pub fn qnd_fidelity(&self, k: usize) -> f64 {
        let q = &self.qubits[k - 1];
        (q.pgg + q.pee) / 2.0
    }

    /// `p_M (1 + exp(-T_r / 2 T_1)) / 2` for qubit `k` in `1..=3`.
    pub fn readout_fidelity_pq(&self, k: usize) -> f64 {
        let decay = (-self.readout_time / (2.0 * self.t1[k - 1])).exp();
        self.qubits[k - 1].pm * (1.0 + decay) / 2.0
    }

    /// Mean of the four protocol x parity fidelities for cavity `j` in `1..=2`.
    pub fn parity_fidelity_ps(&self, j: usize) -> f64 {
        let c = &self.cavities[j - 1];
        (c.p00_even + c.p00_odd + c.p0pi_even + c.p0pi_odd) / 4.0
    }

    pub fn error_fidelities(&self) -> ErrorFidelities {
        ErrorFidelities {
            p_q3: self.readout_fidelity_pq(3),
            p_qnd1: self.qnd_fidelity(1),
            p_qnd2: self.qnd_fidelity(2),
            p_s1: self.parity_fidelity_ps(1),
            p_s2: self.parity_fidelity_ps(2),
        }
    }

    pub fn is_valid(&self) -> bool {
        let probs = self
            .qubits
            .iter()
            .flat_map(|q| [q.pgg, q.pee, q.pm])
            .chain(self.cavities.iter().flat_map(|c| [c.p00_even, c.p00_odd, c.p0pi_even, c.p0pi_odd]));
        probs.clone().all(|p| (0.0..=1.0).contains(&p))
            && self.readout_time >= 0.0
            && self.t1.iter().all(|&t| t > 0.0)
    }
}

pub fn visibility(model: &DetectionModel) -> Visibility {
    let fidelities = model.error_fidelities();
    let p = fidelities.as_array();
    let p0: f64 = p.iter().product();
    let p1: f64 = (0..p.len())
        .map(|i| p.iter().enumerate().map(|(j, &pj)| if i == j { 1.0 - pj } else { pj }).product::<f64>())
        .sum();
    let exact_product = p.iter().map(|pi| 2.0 * pi - 1.0).product();
    Visibility { p0, p1, v: p0 - p1, exact_product, fidelities }
}

pub fn predicted_measured_bell(v: f64, ideal_bell: f64) -> f64 {
    v * ideal_bell
}

pub fn as_shot_error_channels(model: &DetectionModel) -> ShotErrorChannels {
    let f = model.error_fidelities();
    // party order Q1, Q2, Q3, S1, S2
    ShotErrorChannels { flip: [1.0 - f.p_qnd1, 1.0 - f.p_qnd2, 1.0 - f.p_q3, 1.0 - f.p_s1, 1.0 - f.p_s2] }
}
