use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure carries a stable machine-readable code (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series exponents are incompatible with ramification {ramification}: {detail}")]
    IncompatibleRamification { ramification: u32, detail: String },

    #[error("truncated data is too short to decide: {0}")]
    InsufficientTruncation(String),

    #[error("branch is not irreducible: {0}")]
    NotIrreducible(String),

    #[error("branch is tangent to the y-axis (m = {m} exceeds ord psi = {order}); supply it in transverse coordinates")]
    NotTransverse { m: u32, order: String },

    #[error("branches are not distinct: {0}")]
    NotDistinct(String),

    #[error("invalid branch data: {0}")]
    InvalidBranch(String),

    #[error("invalid arc: {0}")]
    InvalidArc(String),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("polynomial does not vanish at the origin")]
    GermNotVanishing,

    #[error("the zero polynomial does not define a germ")]
    ZeroPolynomial,

    #[error("root of face polynomial {face} lies outside the supported cyclotomic tower (conductor cap {cap}); supply branch data directly")]
    UnsupportedExtension { face: String, cap: u32 },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("numeric range error: {message} (try t in [{suggested_min:e}, {suggested_max:e}])")]
    RangeError { message: String, suggested_min: f64, suggested_max: f64 },

    #[error("arc lies inside the curve; contact is infinite")]
    DegenerateContact,

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::IncompatibleRamification { .. } => "IncompatibleRamification",
            Error::InsufficientTruncation(_) => "InsufficientTruncation",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::NotTransverse { .. } => "NotTransverse",
            Error::NotDistinct(_) => "NotDistinct",
            Error::InvalidBranch(_) => "InvalidBranch",
            Error::InvalidArc(_) => "InvalidArc",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownIdentifier { .. } => "UnknownIdentifier",
            Error::GermNotVanishing => "GermNotVanishing",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::UnsupportedExtension { .. } => "UnsupportedExtension",
            Error::InvalidCertificate(_) => "InvalidCertificate",
            Error::RangeError { .. } => "RangeError",
            Error::DegenerateContact => "DegenerateContact",
            Error::Schema { .. } => "SchemaViolation",
            Error::Inconsistent(_) => "InternalInconsistency",
        }
    }

    pub(crate) fn truncation(what: impl Into<String>) -> Self {
        Error::InsufficientTruncation(what.into())
    }
}
