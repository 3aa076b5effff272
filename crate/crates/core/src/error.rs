use thiserror::Error;

use crate::field_algebra::Codomain;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("codomain mismatch: expected {expected:?}, found {found:?}")]
    CodomainMismatch { expected: Codomain, found: Codomain },
    #[error("domain radius mismatch: {0} vs {1}")]
    RadiusMismatch(f64, f64),
    #[error("finite-part reference radius mismatch between combined fields")]
    PolicyMismatch,
    #[error("operator `{op}` is not defined on {codomain:?} fields")]
    UnsupportedCodomain { op: &'static str, codomain: Codomain },
    #[error("log power {0} exceeds the representable limit of 2")]
    LogPowerOverflow(u32),
    #[error("derivative not representable: {0}")]
    NotRepresentable(String),
    #[error("pv criterion is only defined for pure power terms (term has ln r power {0})")]
    UnsupportedPolicy(u8),
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("evaluation at r = 0 is undefined")]
    AtOrigin,
    #[error("sym-tensor field is not symmetric")]
    NotSymmetric,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("field is not a gradient on Ω−O: {0}")]
    NotAGradient(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("ε-ladder did not converge (estimated divergence exponent {exponent:.3})")]
    NonConvergent { exponent: f64 },
    #[error("sequence is not Cauchy: construction needs deg < 0, got deg = {0}")]
    NotCauchy(f64),
    #[error("all pairings are below the noise floor; scaling degree is indeterminate")]
    Indeterminate,
    #[error("invalid rescale factor {0}; expected λ in (0, 1)")]
    InvalidScale(f64),
    #[error("test function support {support} exceeds domain radius {domain}")]
    SupportTooLarge { support: f64, domain: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("no point-supported antiderivative: {0}")]
    NoPointAntiderivative(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MechanicsError {
    #[error("invalid moduli: {0}")]
    InvalidModuli(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("field must be smooth near O: {0}")]
    SingularAtOrigin(String),
    #[error("singular supports overlap at O")]
    OverlappingSupports,
}
