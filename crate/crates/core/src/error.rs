use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input must be greater than {min}")]
    TooSmall { min: u64 },
    #[error("even input")]
    EvenInput,
    #[error("perfect square")]
    PerfectSquare,
    #[error("probable prime")]
    ProbablePrime,
    #[error("zero denominator in quadratic irrational state")]
    ZeroDenominator,
    #[error("Q does not divide N - P^2")]
    NotDivisible,
    #[error("period not found within {cap} steps")]
    StepCapExceeded { cap: u64 },
    #[error("continued fraction period {tau} is even")]
    EvenPeriod { tau: u64 },
    #[error("discriminant must be positive and not a perfect square")]
    BadDiscriminant,
    #[error("forms have different discriminants")]
    DiscriminantMismatch,
    #[error("form has a zero outer coefficient")]
    ZeroCoefficient,
    #[error("b^2 equals the discriminant, distance is undefined")]
    LogSingularity,
    #[error("composition produced a non-integral coefficient")]
    NonIntegralComposition,
    #[error("reduction did not terminate within {steps} steps")]
    ReductionDiverged { steps: u64 },
    #[error("expected a reduced form")]
    NotReduced,
    #[error("Jacobi symbol needs an odd modulus >= 3")]
    BadJacobiModulus,
    #[error("quartic symbol precondition failed: {0}")]
    QuarticPrecondition(&'static str),
    #[error("regulator must be positive")]
    NonPositiveRegulator,
    #[error("cycle traversal gives {traversal}, convergent logarithm gives {convergent}")]
    RegulatorMismatch { traversal: f64, convergent: f64 },
    #[error("principal cycle closes before the base distance is reached; use the small-regulator scan")]
    UseAlgorithm1,
    #[error("{bits}-bit input is beyond the {limit}-bit traversal envelope; supply a regulator")]
    OutsideEnvelope { bits: u64, limit: u32 },
    #[error("{0}")]
    Invalid(String),
}
