use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("polynomials live over different prime fields (F_{0} and F_{1})")]
    ModulusMismatch(u64, u64),
    #[error("polynomial degree too small for this operation")]
    DegreeTooSmall,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree over F_{0}")]
    NotSquarefree(u64),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),

    #[error("discriminant vanishes: y^2 = f(x) is singular")]
    SingularCurve,
    #[error("deg f must be at least 3 (genus >= 1)")]
    GenusTooSmall,
    #[error("twist parameter must be nonzero")]
    ZeroTwist,
    #[error("twist parameter {0} is too large to reduce modulo squares")]
    TwistTooLarge(String),
    #[error("transformed equation is not integral")]
    NonIntegralTransform,
    #[error("transformation is degenerate (ad - bc = 0 or e = 0)")]
    SingularTransform,
    #[error("p = {0} is a prime of bad reduction")]
    BadPrime(u64),

    #[error("p = 2 is excluded")]
    ExcludedPrime,
    #[error("recursion depth must be positive")]
    InvalidDepth,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("intersection data does not describe a fibre: {0}")]
    NotAFiber(String),
    #[error("factorisation shape does not account for {expected} ramification points (got {actual})")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("fibre does not match a known reduction type")]
    UnknownType,

    #[error("sieve bound must be at least 3")]
    BoundTooSmall,
    #[error("twist search needs an even-degree polynomial")]
    OddDegreeUnsupported,
    #[error("irreducibility of f over Q is neither certified nor asserted")]
    IrreducibilityUnknown,
    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
