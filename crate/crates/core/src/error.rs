use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin must satisfy 2S >= 1 (got 2S = {0})")]
    InvalidSpin(u32),

    #[error("unsupported Stevens operator O_{k}^{q} (k must be 2, 4 or 6 and |q| <= k)")]
    UnsupportedStevens { k: u32, q: i32 },

    #[error("duplicate Stevens term O_{k}^{q}")]
    DuplicateStevens { k: u32, q: i32 },

    #[error("non-finite parameter: {0}")]
    NonFinite(&'static str),

    #[error("zeeman sign must be +1 or -1 (got {0})")]
    InvalidZeemanSign(i32),

    #[error("matrix is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("product space dimension {dim} exceeds the configured limit {limit}")]
    DimensionOverflow { dim: usize, limit: usize },

    #[error("full model supports between 1 and {max} molecules (got {got})")]
    MoleculeCount { got: usize, max: usize },

    #[error("cavity frequency must be positive (got {0} GHz)")]
    InvalidCavity(f64),

    #[error("invalid photon state: p0 = {p0}, p1 = {p1}")]
    InvalidPhotonState { p0: f64, p1: f64 },

    #[error(
        "near-resonant denominator on molecule {molecule}, transition ({a1}, {a2}): \
         |E| = {energy} GHz vs cavity {omega} GHz"
    )]
    NearResonantDenominator {
        molecule: usize,
        a1: usize,
        a2: usize,
        energy: f64,
        omega: f64,
    },

    #[error("resonant set is not closed under conjugation (generator deviates from Hermitian by {deviation:.3e})")]
    InconsistentResonantSet { deviation: f64 },

    #[error(
        "coupled term ({i},{j}; {a1},{a2}; {b1},{b2}) has detuning {detuning:.3e} GHz but is \
         missing from the resonant set"
    )]
    MisclassifiedResonance {
        i: usize,
        j: usize,
        a1: usize,
        a2: usize,
        b1: usize,
        b2: usize,
        detuning: f64,
    },

    #[error("unknown state label {0:?}")]
    UnknownLabel(Vec<usize>),

    #[error("resonance tolerance must be positive (got {0})")]
    InvalidTolerance(f64),
}
