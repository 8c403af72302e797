use alloc::string::String;
use core::fmt;

/// Identifies an environment inside a [`DephasingModel`](crate::model::DephasingModel).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvId {
    Unobserved,
    Observed(usize),
}

impl fmt::Display for EnvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvId::Unobserved => f.write_str("unobserved"),
            EnvId::Observed(k) => write!(f, "observed[{k}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("layout of dimension {layout} does not match matrix dimension {matrix}")]
    LayoutMismatch { layout: usize, matrix: usize },
    #[error("factor index {index} out of range for {factors} factors")]
    BadIndex { index: usize, factors: usize },
    #[error("keep set is empty")]
    EmptyKeepSet,
    #[error("tensor product of an empty list")]
    EmptyList,
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("{env}: generator {index} is not Hermitian (residual {residual:e})")]
    NonHermitianGenerator { env: EnvId, index: usize, residual: f64 },
    #[error("{env}: bad initial density matrix: {reason}")]
    BadDensityMatrix { env: EnvId, reason: String },
    #[error("amplitudes have squared norm {norm_sq}, expected 1")]
    BadNormalization { norm_sq: f64 },
    #[error("purity target {target} outside [{min}, 1] for dimension {dim}")]
    BadPurityTarget { target: f64, min: f64, dim: usize },
    #[error("total dimension {dim} exceeds cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("model has no unobserved environment")]
    NoUnobservedEnvironment,
    #[error("pointer indices must differ (got {0} twice)")]
    SameIndex(usize),
    #[error("invalid bipartition: {0}")]
    BadPartition(String),
    #[error("operation requires a qubit system (system dimension {0})")]
    NotAQubitSystem(usize),
    #[error("invalid threshold {name} = {value}")]
    BadThreshold { name: &'static str, value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
