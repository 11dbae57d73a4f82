use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive definite (trace {trace:e}, determinant {det:e})")]
    NotPositive { trace: f64, det: f64 },
    #[error("point {0} lies outside the loop's annulus of definition")]
    OutsideDomain(String),
    #[error("polynomial is not harmonic (Laplacian has {0} nonzero terms)")]
    NotHarmonic(usize),
    #[error("polynomial is not real")]
    NotReal,
    #[error("polynomial depends on antiholomorphic variables")]
    NotHolomorphic,
    #[error("matrix field is singular at {0}")]
    Singular(String),
    #[error("{nodes} contour nodes cannot resolve an integrand of w-bandwidth {bandwidth} (need at least {required})")]
    TooFewNodes {
        nodes: usize,
        bandwidth: usize,
        required: usize,
    },
    #[error("spectral parameter lies on the integration contour")]
    OnContour,
    #[error("loop has {samples} samples, fewer than the {required} needed for band {band}")]
    TooFewSamples {
        samples: usize,
        band: usize,
        required: usize,
    },
    #[error("no normalized Birkhoff splitting (jumping point); condition number {condition:e}")]
    JumpingPoint { condition: f64 },
    #[error("{jumps} of {total} grid points are jumping points")]
    TooManyJumps { jumps: usize, total: usize },
    #[error("determinant is {0}, expected 1")]
    NotUnimodular(String),
    #[error("invariant I = {0} exceeds 1; input is inconsistent")]
    InvariantAboveOne(f64),
    #[error("matrix has non-real entries")]
    NotRealMatrix,
    #[error("grid needs at least {min} points per axis, got {got}")]
    GridTooSmall { min: usize, got: usize },
    #[error("exact evaluation is unavailable for this representation: {0}")]
    NoExactMode(&'static str),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
