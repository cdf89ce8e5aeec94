use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::{Error, Result};

/// Mode labels of the five-party experiment, in basis order.
pub const CANONICAL_LABELS: [&str; 5] = ["Q1", "Q2", "Q3", "S1", "S2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    TwoLevel,
    Oscillator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModeSpec {
    pub kind: ModeKind,
    pub dim: usize,
    pub label: String,
}

impl ModeSpec {
    pub fn qubit(label: impl Into<String>) -> Self {
        Self { kind: ModeKind::TwoLevel, dim: 2, label: label.into() }
    }

    /// Oscillator truncated to `dim` Fock levels (`N_max = dim - 1`).
    pub fn oscillator(label: impl Into<String>, dim: usize) -> Self {
        Self { kind: ModeKind::Oscillator, dim, label: label.into() }
    }
}

/// Ordered list of modes defining the product basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemLayout {
    modes: Vec<ModeSpec>,
    strides: Vec<usize>,
    total_dim: usize,
}

impl SystemLayout {
    pub fn build(modes: Vec<ModeSpec>) -> Result<Arc<Self>> {
        if modes.is_empty() {
            return Err(Error::EmptyLayout);
        }
        let mut seen = HashSet::new();
        for m in &modes {
            if !seen.insert(m.label.as_str()) {
                return Err(Error::DuplicateLabel(m.label.clone()));
            }
            let bad = m.dim < 2 || (m.kind == ModeKind::TwoLevel && m.dim != 2);
            if bad {
                return Err(Error::InvalidDimension { label: m.label.clone(), dim: m.dim });
            }
        }
        let mut strides = vec![1; modes.len()];
        for k in (0..modes.len() - 1).rev() {
            strides[k] = strides[k + 1] * modes[k + 1].dim;
        }
        let total_dim = strides[0] * modes[0].dim;
        Ok(Arc::new(Self { modes, strides, total_dim }))
    }

    /// `(Q1, Q2, Q3, S1, S2)` with both cavities truncated to `cavity_dim` levels.
    pub fn canonical(cavity_dim: usize) -> Result<Arc<Self>> {
        Self::build(vec![
            ModeSpec::qubit("Q1"),
            ModeSpec::qubit("Q2"),
            ModeSpec::qubit("Q3"),
            ModeSpec::oscillator("S1", cavity_dim),
            ModeSpec::oscillator("S2", cavity_dim),
        ])
    }

    pub fn is_canonical(&self) -> bool {
        self.modes.len() == 5
            && self.modes.iter().zip(CANONICAL_LABELS).enumerate().all(|(k, (m, label))| {
                let kind = if k < 3 { ModeKind::TwoLevel } else { ModeKind::Oscillator };
                m.label == label && m.kind == kind
            })
            && self.modes[3].dim == self.modes[4].dim
    }

    pub fn ensure_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(Error::NotCanonicalLayout)
        }
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn stride(&self, mode: usize) -> usize {
        self.strides[mode]
    }

    pub fn dim(&self, mode: usize) -> usize {
        self.modes[mode].dim
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Position of `label`, checked to be of the given kind.
    pub fn index_of_kind(&self, label: &str, kind: ModeKind) -> Result<usize> {
        let k = self.index_of(label)?;
        if self.modes[k].kind != kind {
            let expected = match kind {
                ModeKind::TwoLevel => "two-level mode",
                ModeKind::Oscillator => "oscillator mode",
            };
            return Err(Error::WrongModeKind { label: label.to_string(), expected });
        }
        Ok(k)
    }

    /// Digit of mode `mode` in the flat index `flat`.
    #[inline]
    pub fn digit(&self, flat: usize, mode: usize) -> usize {
        (flat / self.strides[mode]) % self.modes[mode].dim
    }

    pub fn flat_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.modes.len() {
            return Err(Error::DimensionMismatch { expected: self.modes.len(), actual: digits.len() });
        }
        let mut flat = 0;
        for (k, &d) in digits.iter().enumerate() {
            if d >= self.modes[k].dim {
                return Err(Error::InvalidArgument(format!(
                    "index {d} out of range for mode `{}`",
                    self.modes[k].label
                )));
            }
            flat += d * self.strides[k];
        }
        Ok(flat)
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        (0..self.modes.len()).map(|k| self.digit(flat, k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_multiply() {
        let l = SystemLayout::build(vec![ModeSpec::qubit("Q"), ModeSpec::oscillator("S", 3)]).unwrap();
        assert_eq!(l.total_dim(), 6);
        assert_eq!(SystemLayout::canonical(31).unwrap().total_dim(), 7688);
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(matches!(SystemLayout::build(vec![]), Err(Error::EmptyLayout)));
        let dup = vec![ModeSpec::qubit("Q"), ModeSpec::qubit("Q")];
        assert!(matches!(SystemLayout::build(dup), Err(Error::DuplicateLabel(_))));
        let small = vec![ModeSpec::oscillator("S", 1)];
        assert!(matches!(SystemLayout::build(small), Err(Error::InvalidDimension { .. })));
        let fat_qubit = vec![ModeSpec { kind: ModeKind::TwoLevel, dim: 3, label: "Q".into() }];
        assert!(SystemLayout::build(fat_qubit).is_err());
    }

    #[test]
    fn row_major_ordering() {
        let l = SystemLayout::canonical(4).unwrap();
        // last mode fastest
        assert_eq!(l.flat_index(&[0, 0, 0, 0, 1]).unwrap(), 1);
        assert_eq!(l.flat_index(&[0, 0, 0, 1, 0]).unwrap(), 4);
        assert_eq!(l.flat_index(&[1, 0, 0, 0, 0]).unwrap(), 64);
        assert!(l.is_canonical());
        assert!(l.flat_index(&[0, 0, 0, 4, 0]).is_err());
    }

    #[test]
    fn round_trip_is_identity_exhaustively() {
        let layouts = [
            SystemLayout::canonical(31).unwrap(),
            SystemLayout::build(vec![
                ModeSpec::oscillator("A", 7),
                ModeSpec::qubit("B"),
                ModeSpec::oscillator("C", 5),
                ModeSpec::oscillator("D", 3),
            ])
            .unwrap(),
        ];
        for l in layouts {
            assert!(l.total_dim() <= 10_000);
            for flat in 0..l.total_dim() {
                assert_eq!(l.flat_index(&l.multi_index(flat)).unwrap(), flat);
            }
        }
    }
}
