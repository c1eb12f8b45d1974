use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{name}` has degree {degree}; the coalgebra must be 1-connected (degrees >= 2)")]
    NotOneConnected { name: String, degree: i32 },
    #[error("broken differential: {0}")]
    BrokenDifferential(String),
    #[error("differential is not a coderivation on `{0}`")]
    NotCoderivation(String),
    #[error("coproduct is not coassociative on `{0}`")]
    NotCoassociative(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cutoff {0} is below the minimum of 2")]
    CutoffTooSmall(i32),
    #[error("coalgebra is not reduced: `{0}` has nonzero reduced coproduct")]
    NotReduced(String),
    #[error("double cobar needs C_2 = 0, found generator `{0}` in degree 2")]
    DegreeTwoGenerator(String),
    #[error("graded space has a class in degree {0}; degrees >= 1 are required")]
    DegreeZeroClass(i32),
    #[error("operation is not defined on the unit")]
    UnitArgument,
    #[error("operation requires field {0}")]
    WrongField(&'static str),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("co-unit condition fails: {0}")]
    CounitViolation(String),
    #[error("free-model oracle disagreement in degree {degree}: enumerated {enumerated}, series {series}")]
    OracleBreach { degree: i32, enumerated: usize, series: usize },
    #[error("identity failure: {0}")]
    IdentityFailure(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::UnknownGenerator(_) => "unknown-generator",
            Error::NotOneConnected { .. } => "not-one-connected",
            Error::BrokenDifferential(_) => "broken-differential",
            Error::NotCoderivation(_) => "not-coderivation",
            Error::NotCoassociative(_) => "not-coassociative",
            Error::DegreeMismatch(_) => "degree-mismatch",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::CutoffTooSmall(_) => "cutoff-too-small",
            Error::NotReduced(_) => "not-reduced",
            Error::DegreeTwoGenerator(_) => "degree-two-generator",
            Error::DegreeZeroClass(_) => "degree-zero-class",
            Error::UnitArgument => "unit-argument",
            Error::WrongField(_) => "wrong-field",
            Error::NotACycle(_) => "not-a-cycle",
            Error::CounitViolation(_) => "counit-violation",
            Error::OracleBreach { .. } => "oracle-breach",
            Error::IdentityFailure(_) => "identity-failure",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
