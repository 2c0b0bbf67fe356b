use thiserror::Error;

/// Failures surfaced by the walk, decomposition and moment routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("unknown coin matrix name `{0}`")]
    UnknownCoin(String),
    #[error("initial state is not normalized: |alpha|^2 + |beta|^2 = {0}")]
    NotNormalized(String),
    #[error("amplitudes {0} and {1} lie in different sqrt(2) parity classes; use the field or float backend")]
    MixedParity(String, String),
    #[error("empty word: l and m cannot both be zero")]
    EmptyWord,
    #[error("word length {len} exceeds the enumeration cap {cap}")]
    OracleCap { len: u32, cap: u32 },
    #[error("gamma = {gamma} outside the admissible range {lo}..={hi} for kind {kind}")]
    GammaOutOfRange { kind: char, gamma: u32, lo: u32, hi: u32 },
    #[error("cycle half-size must be at least 1")]
    EmptyCycle,
    #[error("horizon must be at least 1")]
    EmptyHorizon,
    #[error("quadrature is only defined for even orders, got {0}")]
    OddOrder(u32),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("state {0} is not representable in the exact dyadic backend")]
    NotRepresentable(String),
}

pub type Result<T, E = WalkError> = std::result::Result<T, E>;
