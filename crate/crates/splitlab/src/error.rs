use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("operator is zero")]
    ZeroOperator,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("input is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    HermitianViolation { defect: f64, tol: f64 },

    #[error("subspaces are not complementary: {0}")]
    NotComplementary(String),

    #[error("not a reflection: ||W^2 - I|| = {0:.3e}")]
    InvalidReflection(f64),

    #[error("product TS is not Hermitian: defect {0:.3e}")]
    NotHermitianProduct(f64),

    #[error("range condition R(S) \u{2286} R(T) violated: residual {0:.3e}")]
    RangeConditionViolated(f64),

    #[error("not a proper splitting: {0}")]
    NotProper(String),

    #[error("degenerate positive orthogonal decomposition: {0}")]
    DegenerateDecomposition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a split operator: range and nullspace are not complementary")]
    NotSplitOperator,

    #[error("I - U\u{2020}V is numerically singular")]
    SingularResolvent,

    #[error("splitting kind `{0}` is diagnostic-only and cannot drive the solver")]
    DiagnosticSplitting(String),

    #[error("iteration diverged after {0} steps")]
    Diverged(usize),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("unknown suite id: {0}")]
    UnknownSuite(String),

    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to: 1 for numerical
    /// failures, 2 for validation and I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalFailure(_) | Error::SingularResolvent | Error::Diverged(_) => 1,
            _ => 2,
        }
    }

    /// Stable machine-readable error tag used in JSON reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::NumericalFailure(_) => "numerical_failure",
            Error::ZeroOperator => "zero_operator",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::HermitianViolation { .. } => "hermitian_violation",
            Error::NotComplementary(_) => "not_complementary",
            Error::InvalidReflection(_) => "invalid_reflection",
            Error::NotHermitianProduct(_) => "not_hermitian_product",
            Error::RangeConditionViolated(_) => "range_condition_violated",
            Error::NotProper(_) => "not_proper",
            Error::DegenerateDecomposition(_) => "degenerate_decomposition",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotSplitOperator => "not_split_operator",
            Error::SingularResolvent => "singular_resolvent",
            Error::DiagnosticSplitting(_) => "diagnostic_splitting",
            Error::Diverged(_) => "diverged",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::UnknownSuite(_) => "unknown_suite",
            Error::ParseError { .. } => "parse_error",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
