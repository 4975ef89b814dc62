use thiserror::Error;

/// Errors shared across the crate.
///
/// Hypothesis gates of the verified statements are never *thrown* by the
/// harness; they are recorded in reports. `GateViolation` is reserved for
/// calculator calls whose result would be meaningless without the gate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("series constant term too small (|c0| = {modulus:.3e})")]
    ZeroConstantTerm { modulus: f64 },

    #[error("series constant term must be 1 (got {re}+{im}i)")]
    NonUnitConstantTerm { re: f64, im: f64 },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("gate violation: {0}")]
    GateViolation(String),

    #[error("mu must be nonzero")]
    ZeroMu,

    #[error("transform resonance: (c - mu) + k = 0 at k = {k}")]
    Resonance { k: usize },

    #[error("function vanishes on the sampling circle r = {radius}")]
    ZeroOnCircle { radius: f64 },

    #[error("degenerate maximum: |w| is constant on the circle, no isolated peak")]
    DegenerateMaximum,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io: {0}")]
    Io(String),

    #[error("config: {0}")]
    Config(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
