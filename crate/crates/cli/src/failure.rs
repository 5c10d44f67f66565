use std::fmt;

use twistlab::Error;

#[derive(Debug)]
pub enum Failure {
    /// Bad input or unsupported option combination.
    Usage(String),
    Core(Error),
    /// A predicted-insoluble twist turned out to have a point.
    Falsification,
}

impl Failure {
    /// 2 for parse and validation errors, 3 for unmet domain preconditions,
    /// 4 for internal invariant violations, 5 for falsifications.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Falsification => 5,
            Failure::Core(e) => match e {
                Error::Parse(_)
                | Error::SingularCurve
                | Error::GenusTooSmall
                | Error::ZeroTwist
                | Error::TwistTooLarge(_)
                | Error::InvalidPrime(_)
                | Error::DegreeTooSmall
                | Error::ZeroPolynomial
                | Error::InvalidDepth
                | Error::BoundTooSmall
                | Error::UnknownMethod(_)
                | Error::NonIntegralTransform
                | Error::SingularTransform => 2,
                Error::Invariant(_) => 4,
                Error::BadPrime(_)
                | Error::ExcludedPrime
                | Error::PreconditionFailed(_)
                | Error::OddDegreeUnsupported
                | Error::IrreducibilityUnknown
                | Error::NotSquarefree(_)
                | Error::ModulusMismatch(..)
                | Error::NotAFiber(_)
                | Error::ShapeMismatch { .. }
                | Error::UnknownType => 3,
            },
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Falsification => f.write_str("FALSIFICATION: a predicted-insoluble twist has a Q_p-point"),
        }
    }
}
