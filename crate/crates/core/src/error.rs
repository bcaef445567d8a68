use thiserror::Error;

/// Errors raised by the geometric pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular metric at ({x}, {y}): conformal factor {factor:e}")]
    SingularMetric { x: f64, y: f64, factor: f64 },
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("normal frame flipped across the stencil")]
    FrameContinuity,
    #[error("frame error: {0}")]
    Frame(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("support function violates the Helmholtz equation (residual {0:e})")]
    InvalidSupportFunction(f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("immersion is not regular: {0}")]
    Regularity(String),
    #[error("ill-conditioned principal frame: {0}")]
    Conditioning(String),
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
