//! Error types shared across the estimation and simulation pipeline.

use thiserror::Error;

/// Errors produced by estimation, simulation, and validation routines.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("empty panel")]
    EmptyPanel,
    #[error("row {row} has length {found}, expected {expected}")]
    RaggedPanel {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("panel length {panel} does not match market length {market}")]
    LengthMismatch { panel: usize, market: usize },
    #[error("smoothing span {span} must be odd")]
    EvenSpan { span: usize },
    #[error("smoothing span {span} exceeds series length {len}")]
    SpanTooLarge { span: usize, len: usize },
    #[error("frequency {omega} outside (0, 2pi]")]
    FrequencyOutOfRange { omega: f64 },
    #[error("row index {index} outside 1..={dim}")]
    RowOutOfRange { index: usize, dim: usize },
    #[error("external market series has length {found}, expected {expected}")]
    MarketLength { found: usize, expected: usize },
    #[error("market series has zero empirical variance")]
    DegenerateMarket,
    #[error("matrix is not Hermitian within tolerance")]
    NonHermitian,
    #[error("market spectrum estimate {value} is negative beyond tolerance")]
    NegativeMarketSpectrum { value: f64 },
    #[error("dimension mismatch: slopes {slopes}, variances {variances}")]
    FitShape { slopes: usize, variances: usize },
    #[error("shrinkage gap {gap} at or below floor {floor}; fall back to intensity 0")]
    DegenerateGap { gap: f64, floor: f64 },
    #[error("target coincides with the true spectrum; oracle intensity undefined")]
    UnmisspecifiedTarget,
    #[error("need at least 2 replicates, got {got}")]
    InsufficientReplicates { got: usize },
    #[error("series length {len} must exceed burn-in {burn_in}")]
    SeriesTooShort { len: usize, burn_in: usize },
    #[error("frequency grids differ: {left} vs {right} points")]
    GridMismatch { left: usize, right: usize },
    #[error("invalid model: {0}")]
    ModelShape(String),
    #[error("invalid run spec field {field}: {reason}")]
    RunSpecField { field: String, reason: String },
    #[error("all {total} Monte Carlo runs failed")]
    AllRunsFailed { total: usize },
}

pub type Result<T> = std::result::Result<T, CoreError>;
