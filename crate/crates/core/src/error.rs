use crate::expr::{EvalError, ParseError};
use crate::kernel::KernelError;

/// Failures of the geometric pipeline at a chart point.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("chart point has {got} coordinates, expected {expected}")]
    PointArity { expected: usize, got: usize },
    #[error("chart point {point:?} lies outside the domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("parametrization is not an immersion: Jacobian rank {rank} < {expected}")]
    ImmersionFailure { rank: usize, expected: usize },
    #[error("distribution rank {rank} < {expected}")]
    DistributionRankFailure { rank: usize, expected: usize },
    #[error("projection of the normal section onto the normal space vanishes (norm {norm:e})")]
    NormalSectionVanishes { norm: f64 },
    #[error("vector is not normal to the distribution (residual {residual:e})")]
    NotNormal { residual: f64 },
    #[error("extensions disagree at the base point (difference {difference:e})")]
    ExtensionsDisagree { difference: f64 },
    #[error("tangent index {index} out of range 1..={s}")]
    TangentIndex { index: usize, s: usize },
    #[error("ruling {index} degenerates (norm {norm:e}); the shape operator is numerically singular")]
    DegenerateRuling { index: usize, norm: f64 },
    #[error("fiber has dimension {actual}, expected {expected}")]
    WrongFiberDimension { actual: usize, expected: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
