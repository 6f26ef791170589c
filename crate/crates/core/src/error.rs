use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {order} exceeds the supported maximum {max}")]
    FieldTooLarge { order: u64, max: u64 },
    #[error("modulus must have {expected} coefficients, got {got}")]
    ModulusLength { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus coefficient {0} is not reduced mod p")]
    ModulusCoefficient(u32),
    #[error("modulus is reducible over F_p")]
    Reducible,
    #[error("malformed field spec {0:?}")]
    FieldSpec(String),
    #[error("element index {index} is out of range for a field of order {order}")]
    ElementOutOfRange { index: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{sub} does not divide the extension degree {degree}")]
    NotASubfield { sub: u32, degree: u32 },

    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("operation requires a univariate polynomial, arity is {0}")]
    NotUnivariate(usize),
    #[error("polynomial is not monic")]
    NonMonicPolynomial,
    #[error("polynomial system must be nonempty")]
    EmptySystem,
    #[error("system member {0} has no positive degree")]
    NonPositiveDegree(usize),

    #[error("set must be nonempty")]
    EmptySet,
    #[error("set needs at least {min} elements, got {got}")]
    SetTooSmall { min: usize, got: usize },
    #[error("power-sum exponent must be at least 1")]
    ZeroExponent,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("anchor is not a point of the grid")]
    AnchorOutsideGrid,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("graph requires a non-constant polynomial")]
    ConstantPolynomial,

    #[error("malformed instance: {0}")]
    Instance(String),
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("exhaustive enumeration over q = {q} exceeds the cap {max}")]
    CensusTooLarge { q: u32, max: u32 },
}
