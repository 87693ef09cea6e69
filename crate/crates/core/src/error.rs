use thiserror::Error;

use crate::field::FieldDescriptor;
use crate::valgroup::Value;

/// Errors raised anywhere in the library.
///
/// Every message starts with the variant name so that front ends can report
/// which failure they wrap without extra bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("UndefinedDifference: infinity minus infinity")]
    UndefinedDifference,
    #[error("UndefinedProduct: zero times infinity")]
    UndefinedProduct,
    #[error("Overflow: integer bounds exceeded in {0}")]
    Overflow(&'static str),
    #[error("NoEventualMinimizer: {0}")]
    NoEventualMinimizer(String),
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("FieldMismatch: {0} vs {1}")]
    FieldMismatch(FieldDescriptor, FieldDescriptor),
    #[error("NotInvertible: {0}")]
    NotInvertible(String),
    #[error("InvalidField: {0}")]
    InvalidField(String),
    #[error("InsufficientPrecision: value not certified below O(t^({0}))")]
    InsufficientPrecision(Value),
    #[error("DegreeBound: degree {degree} is not below {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("InvalidChain: {0}")]
    InvalidChain(String),
    #[error("InvalidScenario: {reason} (index {index})")]
    InvalidScenario { reason: String, index: usize },
    #[error("HorizonExhausted: {0}")]
    HorizonExhausted(String),
    #[error("CertificateFailed at index {index}: {details}")]
    CertificateFailed { index: usize, details: String },
    #[error("VacuouslyTrue: {0}")]
    VacuouslyTrue(String),
    #[error("PrecisionExhausted in {check}: {} uncertified case(s): {}", cases.len(), cases.join(", "))]
    PrecisionExhausted { check: String, cases: Vec<String> },
    #[error("Precondition: {0}")]
    Precondition(String),
    #[error("Parse: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// True for errors caused by malformed input text rather than by a
    /// computation.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidField(_))
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::InsufficientPrecision(_))
    }
}
