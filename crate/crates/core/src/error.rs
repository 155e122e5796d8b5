use thiserror::Error;

/// Failures reported by the toolkit.
///
/// Variants fall in two groups: invalid input (design, direction or leg data
/// that violates a precondition) and numeric failure (rank deficiency,
/// stalled continuation). [`Error::is_validation`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Study parameters have vanishing rotational norm")]
    ZeroNorm,
    #[error("pose is not line-symmetric: e0 = {e0:e}, f0 = {f0:e}")]
    NotLineSymmetric { e0: f64, f0: f64 },
    #[error("direction parameters (h0, h1, h2) are all zero")]
    AllZero,
    #[error("invalid design: {0}")]
    InvalidDesign(&'static str),
    #[error("unsupported pentapod type: exactly one of a4 = 0 and C = 0 holds")]
    UnsupportedType,
    #[error("v = 0: leg condition does not determine R1 (p5 = a4 = a_r is forced)")]
    SpecialCaseV0,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("linear system for the translation parameters is singular")]
    SingularSystem,
    #[error("interpolation system is rank deficient")]
    RankDeficiency,
    #[error("polynomial division left remainder {remainder:e}")]
    DivisionFails { remainder: f64 },
    #[error("coefficient of p5 vanishes for this direction")]
    DegenerateDirection,
    #[error("no real seed point found on the curve")]
    NoRealSeed,
    #[error("continuation stalled after {produced} of {requested} samples")]
    ContinuationStall { produced: usize, requested: usize },
    #[error("parameter t = a4 maps to the ideal point W")]
    IdealPoint,
    #[error("degenerate point set for sphere fit (rank {rank})")]
    Degenerate { rank: usize },
    #[error("curve tracing failed: {0}")]
    TraceFailure(String),
}

impl Error {
    /// True for errors caused by invalid input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::AllZero
                | Error::InvalidDesign(_)
                | Error::UnsupportedType
                | Error::SpecialCaseV0
                | Error::Precondition(_)
                | Error::NotLineSymmetric { .. }
                | Error::ZeroNorm
                | Error::IdealPoint
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
