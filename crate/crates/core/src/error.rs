use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("composition requires univariate polynomials")]
    NotUnivariate,

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("polynomial degree {found} is below the required minimum {required}")]
    DegreeTooSmall { found: usize, required: usize },

    #[error("iterate too large: degree {degree} exceeds cap {cap}")]
    IterateTooLarge { degree: u128, cap: usize },

    #[error("precision exhausted after {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },

    #[error("canonical height did not reach target error {target:e}; best estimate {estimate} +/- {radius:e}")]
    CanonicalHeightNotConverged {
        estimate: f64,
        radius: f64,
        target: f64,
    },

    #[error("canonical height is not defined at infinity")]
    InfinitePoint,

    #[error("not disintegrated ({0})")]
    NotDisintegrated(String),

    #[error("symmetry group contract requires disintegrated f")]
    SymmetryRequiresDisintegrated,

    #[error("pivot variable x{0} does not occur in the polynomial")]
    PivotDegreeZero(usize),

    #[error("constant is not periodic within {cap} steps; orbit prefix: {orbit}")]
    NonPeriodicConstant { cap: usize, orbit: String },

    #[error("generator {generator} does not commute with any iterate f^k, k <= {k_max}")]
    NotCommuter { generator: String, k_max: usize },

    #[error("X^oa empty: {0}")]
    XoaEmpty(String),

    #[error("anomalous gate failure: {0}")]
    AnomalousGate(String),

    #[error("non-complementary or anomalous fiber: {0}")]
    NonComplementary(String),

    #[error("seed is not certified non-preperiodic: {0}")]
    PreperiodicSeed(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Gate failures that mean "the variety has empty X^oa" rather than a real error.
    pub fn is_xoa_empty(&self) -> bool {
        matches!(self, Error::XoaEmpty(_))
    }
}
