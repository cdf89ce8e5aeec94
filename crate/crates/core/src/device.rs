//! Device parameters and the diagonal dispersive/Kerr Hamiltonian.
//!
//! Coupling magnitudes are stored as `chi / 2pi` in MHz, positive, exactly
//! as tabulated; signs and the `2pi * 1e6` conversion to rad/s are applied
//! when the Hamiltonian is built.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::detection::{CavityParity, DetectionModel, QubitReadout};
use crate::fockspace::{DiagonalOperator, SystemLayout};
use crate::{Error, Result};

/// Bundled device configuration reproducing the measured parameter tables.
pub const PAPER_DEVICE_JSON: &str = include_str!("../configs/paper_device.json");
/// Same couplings with every detection fidelity set to one.
pub const PERFECT_DETECTION_JSON: &str = include_str!("../configs/perfect_detection.json");

const MHZ_TO_RAD_PER_S: f64 = 2.0 * PI * 1e6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviceParams {
    pub chi_q1_s1_mhz: f64,
    pub chi_q2_s2_mhz: f64,
    pub chi_q3_s1_mhz: f64,
    pub chi_q3_s2_mhz: f64,
    pub kerr_s1_mhz: f64,
    pub kerr_s2_mhz: f64,
    pub cross_kerr_s1_s2_mhz: f64,
    /// Qubit-qubit ZZ couplings (Q1Q2, Q1Q3, Q2Q3); off in the Hamiltonian by default.
    pub qubit_cross_mhz: [f64; 3],
    pub detection: DetectionModel,
}

/// Which optional terms enter [`dispersive_hamiltonian_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HamiltonianTerms {
    pub kerr: bool,
    pub qubit_cross: bool,
}

const KNOWN_KEYS: &[&str] = &[
    "chi.q1s1_mhz", "chi.q2s2_mhz", "chi.q3s1_mhz", "chi.q3s2_mhz",
    "kerr.s1_mhz", "kerr.s2_mhz", "kerr.s1s2_mhz",
    "cross.q1q2_mhz", "cross.q1q3_mhz", "cross.q2q3_mhz",
    "t1.q1_us", "t1.q2_us", "t1.q3_us", "readout.tr_ns",
    "det.q1.pgg", "det.q1.pee", "det.q1.pm",
    "det.q2.pgg", "det.q2.pee", "det.q2.pm",
    "det.q3.pgg", "det.q3.pee", "det.q3.pm",
    "det.s1.p00_even", "det.s1.p00_odd", "det.s1.p0pi_even", "det.s1.p0pi_odd",
    "det.s2.p00_even", "det.s2.p00_odd", "det.s2.p0pi_even", "det.s2.p0pi_odd",
];

struct Entries(BTreeMap<String, f64>);

impl Entries {
    fn required(&self, key: &str) -> Result<f64> {
        self.0.get(key).copied().ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    fn optional(&self, key: &str, default: f64) -> f64 {
        self.0.get(key).copied().unwrap_or(default)
    }

    fn probability(&self, key: &str) -> Result<f64> {
        let p = self.optional(key, 1.0);
        if p > 1.0 {
            return Err(Error::Config(format!("`{key}` = {p} is not a probability")));
        }
        Ok(p)
    }
}

/// Parses the flat key/value device config (a JSON object of numbers).
///
/// Coupling (`chi.*`), `t1.*` and `readout.tr_ns` keys are required; Kerr
/// and qubit cross terms default to zero and detection fidelities to one.
pub fn load_device(text: &str) -> Result<DeviceParams> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("parse error: {e}")))?;
    let obj = value.as_object().ok_or_else(|| Error::Config("top level must be an object".into()))?;
    let mut entries = BTreeMap::new();
    for (key, v) in obj {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        let x = v.as_f64().ok_or_else(|| Error::Config(format!("`{key}` must be a number")))?;
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Config(format!("`{key}` must be a non-negative number, got {x}")));
        }
        entries.insert(key.clone(), x);
    }
    let e = Entries(entries);

    let qubit = |k: usize| -> Result<QubitReadout> {
        Ok(QubitReadout {
            pgg: e.probability(&format!("det.q{k}.pgg"))?,
            pee: e.probability(&format!("det.q{k}.pee"))?,
            pm: e.probability(&format!("det.q{k}.pm"))?,
        })
    };
    let cavity = |j: usize| -> Result<CavityParity> {
        Ok(CavityParity {
            p00_even: e.probability(&format!("det.s{j}.p00_even"))?,
            p00_odd: e.probability(&format!("det.s{j}.p00_odd"))?,
            p0pi_even: e.probability(&format!("det.s{j}.p0pi_even"))?,
            p0pi_odd: e.probability(&format!("det.s{j}.p0pi_odd"))?,
        })
    };
    let mut t1 = [0.0; 3];
    for (k, slot) in t1.iter_mut().enumerate() {
        let key = format!("t1.q{}_us", k + 1);
        *slot = e.required(&key)? * 1e-6;
        if *slot <= 0.0 {
            return Err(Error::Config(format!("`{key}` must be positive")));
        }
    }
    let detection = DetectionModel {
        qubits: [qubit(1)?, qubit(2)?, qubit(3)?],
        cavities: [cavity(1)?, cavity(2)?],
        readout_time: e.required("readout.tr_ns")? * 1e-9,
        t1,
    };
    Ok(DeviceParams {
        chi_q1_s1_mhz: e.required("chi.q1s1_mhz")?,
        chi_q2_s2_mhz: e.required("chi.q2s2_mhz")?,
        chi_q3_s1_mhz: e.required("chi.q3s1_mhz")?,
        chi_q3_s2_mhz: e.required("chi.q3s2_mhz")?,
        kerr_s1_mhz: e.optional("kerr.s1_mhz", 0.0),
        kerr_s2_mhz: e.optional("kerr.s2_mhz", 0.0),
        cross_kerr_s1_s2_mhz: e.optional("kerr.s1s2_mhz", 0.0),
        qubit_cross_mhz: [
            e.optional("cross.q1q2_mhz", 0.0),
            e.optional("cross.q1q3_mhz", 0.0),
            e.optional("cross.q2q3_mhz", 0.0),
        ],
        detection,
    })
}

impl DeviceParams {
    pub fn paper_device() -> Self {
        load_device(PAPER_DEVICE_JSON).expect("bundled config is valid")
    }

    /// All couplings and Kerr terms set to zero, perfect detection.
    pub fn uncoupled() -> Self {
        Self {
            chi_q1_s1_mhz: 0.0,
            chi_q2_s2_mhz: 0.0,
            chi_q3_s1_mhz: 0.0,
            chi_q3_s2_mhz: 0.0,
            kerr_s1_mhz: 0.0,
            kerr_s2_mhz: 0.0,
            cross_kerr_s1_s2_mhz: 0.0,
            qubit_cross_mhz: [0.0; 3],
            detection: DetectionModel::perfect(),
        }
    }
}

pub fn dispersive_hamiltonian(params: &DeviceParams, layout: &Arc<SystemLayout>, include_kerr: bool) -> Result<DiagonalOperator> {
    dispersive_hamiltonian_with(params, layout, HamiltonianTerms { kerr: include_kerr, qubit_cross: false })
}

/// Diagonal of
/// `H = -sum_j n_j (chi_jj |e><e|_j + chi_j3 |e><e|_3) - 1/2 sum_j K_j n_j (n_j - 1) - K_12 n_1 n_2`
/// in rad/s over the canonical `(Q1, Q2, Q3, S1, S2)` basis.
pub fn dispersive_hamiltonian_with(params: &DeviceParams, layout: &Arc<SystemLayout>, terms: HamiltonianTerms) -> Result<DiagonalOperator> {
    layout.ensure_canonical()?;
    let w = |mhz: f64| mhz * MHZ_TO_RAD_PER_S;
    let (c11, c13, c22, c23) = (w(params.chi_q1_s1_mhz), w(params.chi_q3_s1_mhz), w(params.chi_q2_s2_mhz), w(params.chi_q3_s2_mhz));
    let (k1, k2, k12) = (w(params.kerr_s1_mhz), w(params.kerr_s2_mhz), w(params.cross_kerr_s1_s2_mhz));
    let [x12, x13, x23] = params.qubit_cross_mhz.map(w);
    Ok(DiagonalOperator::from_fn(layout, |d| {
        let (q1, q2, q3) = (d[0] as f64, d[1] as f64, d[2] as f64);
        let (n1, n2) = (d[3] as f64, d[4] as f64);
        let mut h = -(n1 * (c11 * q1 + c13 * q3) + n2 * (c22 * q2 + c23 * q3));
        if terms.kerr {
            h -= 0.5 * (k1 * n1 * (n1 - 1.0) + k2 * n2 * (n2 - 1.0)) + k12 * n1 * n2;
        }
        if terms.qubit_cross {
            h -= x12 * q1 * q2 + x13 * q1 * q3 + x23 * q2 * q3;
        }
        h
    }))
}

/// Conditional phases `phi_j = 2pi chi_j3 tau` acquired by S1 and S2 while
/// Q3 is excited for `tau` seconds.
pub fn conditional_phase_angles(params: &DeviceParams, tau: f64) -> Result<(f64, f64)> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("tau must be >= 0, got {tau}")));
    }
    Ok((params.chi_q3_s1_mhz * MHZ_TO_RAD_PER_S * tau, params.chi_q3_s2_mhz * MHZ_TO_RAD_PER_S * tau))
}

/// Wait time giving S2 the conditional phase `phi2`.
pub fn tau_for_phi2(params: &DeviceParams, phi2: f64) -> Result<f64> {
    if !(params.chi_q3_s2_mhz > 0.0) || !(phi2 >= 0.0) {
        return Err(Error::InvalidArgument("need chi_q3_s2 > 0 and phi2 >= 0".into()));
    }
    Ok(phi2 / (params.chi_q3_s2_mhz * MHZ_TO_RAD_PER_S))
}
