use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not orthogonal (max |M^T M - I| entry = {defect:.3e})")]
    NotOrthogonal { defect: f64 },
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("unsupported ambient dimension {0} (exact hull machinery is limited to m <= 2)")]
    UnsupportedDimension(usize),
    #[error("degenerate map: {0}")]
    DegenerateMap(String),
    #[error("budget exceeded: {what} needs {needed} but the cap is {cap}{}", largest_feasible_n.map(|n| format!(" (largest feasible n = {n})")).unwrap_or_default())]
    Budget {
        what: &'static str,
        needed: u128,
        cap: u128,
        largest_feasible_n: Option<u32>,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("iteration did not converge within {0} steps")]
    NonConvergence(usize),
    #[error("product factors are not similitudes: {0}")]
    NotSimilitude(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
