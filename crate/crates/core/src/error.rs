use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands live in different models")]
    ContextMismatch,

    #[error("invalid group automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("invalid residue field: {0}")]
    InvalidField(String),

    #[error("leading term is indeterminate at the available precision")]
    IndeterminateLeadingTerm,

    #[error("indeterminate at precision: {0}")]
    IndeterminateAtPrecision(String),

    #[error("inverse of an exact non-monomial series has infinite support; truncate first")]
    UnboundedExpansion,

    #[error("all coefficients of the linear difference equation are zero")]
    AllZeroCoefficients,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("residue obstruction at step {step}: the linear difference equation has no solution in the residue field")]
    ResidueObstruction { step: usize },

    #[error("lifting requires an isometric model (value group automorphism must be the identity)")]
    NonIsometric,

    #[error("lifting did not reach the target after {iterations} iterations")]
    NotConverged { iterations: usize },

    #[error("lifting stalled: residual valuation did not increase at step {step}")]
    LiftStalled { step: usize },

    #[error("target {index} is not a unit")]
    NonUnitTarget { index: usize },

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("zero element has no module action")]
    ZeroInput,

    #[error("supplied solution does not satisfy the system")]
    UnverifiedSolution,

    #[error("input is a monomial; it has no roots in the torus")]
    MonomialInput,

    #[error("operation requires a univariate polynomial")]
    NotUnivariate,

    #[error("invalid subgroup or coset: {0}")]
    InvalidSubgroup(String),

    #[error("ambient conductor mismatch: {0} vs {1}")]
    AmbientMismatch(u32, u32),

    #[error("malformed problem: {0}")]
    MalformedProblem(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable across messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::RankMismatch { .. } => "RankMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ContextMismatch => "ContextMismatch",
            Error::InvalidAutomorphism(_) => "InvalidAutomorphism",
            Error::InvalidField(_) => "InvalidField",
            Error::IndeterminateLeadingTerm => "IndeterminateLeadingTerm",
            Error::IndeterminateAtPrecision(_) => "IndeterminateAtPrecision",
            Error::UnboundedExpansion => "UnboundedExpansion",
            Error::AllZeroCoefficients => "AllZeroCoefficients",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ResidueObstruction { .. } => "ResidueObstruction",
            Error::NonIsometric => "NonIsometric",
            Error::NotConverged { .. } => "NotConverged",
            Error::LiftStalled { .. } => "LiftStalled",
            Error::NonUnitTarget { .. } => "NonUnitTarget",
            Error::EmptyMatrix => "EmptyMatrix",
            Error::ZeroInput => "ZeroInput",
            Error::UnverifiedSolution => "UnverifiedSolution",
            Error::MonomialInput => "MonomialInput",
            Error::NotUnivariate => "NotUnivariate",
            Error::InvalidSubgroup(_) => "InvalidSubgroup",
            Error::AmbientMismatch(..) => "AmbientMismatch",
            Error::MalformedProblem(_) => "MalformedProblem",
            Error::Parse { .. } => "Parse",
            Error::Precondition(_) => "Precondition",
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
