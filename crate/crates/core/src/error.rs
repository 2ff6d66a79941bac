use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical pipelines.
///
/// Configuration problems are reported separately by [`crate::config::ConfigError`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("element index ({m}, {n}) outside the {rows}x{cols} grid (indices are 1-based)")]
    IndexOutOfRange {
        m: usize,
        n: usize,
        rows: usize,
        cols: usize,
    },

    #[error("frequency {freq_hz} Hz outside the tabulated range [{min_hz}, {max_hz}] Hz")]
    FrequencyOutOfRange { freq_hz: f64, min_hz: f64, max_hz: f64 },

    #[error("response table: {0}")]
    ResponseTable(String),

    #[error("coding matrix is {got_rows}x{got_cols} but the geometry is {rows}x{cols}")]
    DimensionMismatch {
        got_rows: usize,
        got_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("bitmap line {line}: {msg}")]
    Bitmap { line: usize, msg: String },

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid angular grid: {0}")]
    InvalidGrid(String),

    #[error("angular grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("near-field plane: {0}")]
    NearField(String),

    #[error("mode ring: {0}")]
    InvalidRing(String),

    #[error("invalid modulation plan: {0}")]
    InvalidPlan(String),

    #[error("received signal: {0}")]
    Signal(String),

    #[error("fundamental harmonic vanishes; harmonic ratio undefined")]
    VanishingFundamental,

    #[error("direction estimate out of range: sin(theta) = {0:.6} > 1")]
    EstimateOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
