use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("layout must contain at least one mode")]
    EmptyLayout,
    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),
    #[error("mode `{label}` has invalid dimension {dim}")]
    InvalidDimension { label: String, dim: usize },
    #[error("unknown mode label `{0}`")]
    UnknownLabel(String),
    #[error("mode `{label}` is not a {expected}")]
    WrongModeKind { label: String, expected: &'static str },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("layout mismatch between state and operator")]
    LayoutMismatch,
    #[error("layout is not the canonical (Q1, Q2, Q3, S1, S2) layout")]
    NotCanonicalLayout,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Fock truncation exceeded on `{label}`: edge population {leakage:.3e} > {limit:.1e}")]
    Truncation { label: String, leakage: f64, limit: f64 },
    #[error("ancilla `{0}` is not in its ground state")]
    AncillaNotReset(String),
    #[error("cavity `{0}` is not in the vacuum state")]
    CavityNotVacuum(String),
    #[error("no vacuum branch on `{label}` (best branch vacuum population {population:.3})")]
    NoVacuumBranch { label: String, population: f64 },
    #[error("projection probability {0:.3e} is too small")]
    NegligibleProjection(f64),
    #[error("no Wigner peak above threshold {threshold:.4} (max {max:.4})")]
    NoPeak { threshold: f64, max: f64 },
    #[error("config: {0}")]
    Config(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}
