use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CuError {
    #[error("elements belong to different semigroups")]
    MixedSemigroup,
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("sequence is not increasing at index {0}")]
    NotIncreasing(usize),
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error("no supremum: {0}")]
    NoSupremum(String),
    #[error("invalid table: {0} fails")]
    InvalidTable(String),
    #[error("endpoint constraint rejected: {0}")]
    BadConstraint(String),
    #[error("non-compact part is not absorbing: {0}")]
    NotAbsorbing(String),
    #[error("pairing values must be positive")]
    BadPairing,
    #[error("empty fragment")]
    EmptyFragment,
    #[error("empty functional family")]
    EmptyFunctionalFamily,
    #[error("not an ideal: {0}")]
    NotIdeal(String),
    #[error("relation is not auxiliary: {0}")]
    NotAuxiliary(String),
    #[error("morphism chain mismatch at position {0}")]
    MorphismMismatch(usize),
    #[error("not a morphism: {0}")]
    NotMorphism(String),
    #[error("unrecognized class: {0}")]
    UnrecognizedClass(String),
    #[error("not an ultrafilter: {0}")]
    NotUltrafilter(String),
    #[error("not cancellative: {0}")]
    NotCancellative(String),
    #[error("no functional parameterization for {0}")]
    UnknownFunctionalSpace(String),
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("not monotone: {0}")]
    NotMonotone(String),
    #[error("functional is not the normalized trace")]
    NotNormalized,
    #[error("first function is not Cuntz below the second")]
    NotSubequivalent,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CuError>;
