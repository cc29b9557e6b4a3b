use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("square root of negative number {0}")]
    NegativeSqrt(BigInt),
    #[error("modulus {0} is not prime")]
    NotPrime(BigInt),
    #[error("congruence is identically zero modulo {0}")]
    DegenerateCongruence(BigInt),
    #[error("matrix has determinant {0}, expected +1 or -1")]
    NonUnitDeterminant(BigInt),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has determinant {0}, expected 1")]
    NotSpecialLinear(BigInt),
    #[error("not a cusp monodromy: trace {0} < 3")]
    NotHyperbolic(BigInt),
    #[error("invalid quadratic irrational: {0}")]
    InvalidQuadIrr(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("basis columns are linearly dependent")]
    DependentColumns,
    #[error("lattice is not invariant under the monodromy")]
    NotInvariant,
    #[error("base degree {0} outside 1..=4")]
    DegreeOutOfRange(u32),
    #[error("continued fraction did not repeat within {0} steps")]
    PeriodBoundExceeded(usize),
    #[error("no power n <= {cap} of the period matrix has trace {trace}")]
    TraceEquationUnsolved { trace: BigInt, cap: u32 },
    #[error("cycle postcondition failed: expected trace {expected}, got {actual}")]
    CyclePostcondition { expected: BigInt, actual: BigInt },
    #[error("cannot factor {0} within the trial-division bound")]
    FactorizationTooHard(BigInt),
    #[error("dual cycle of length {0} is too long to materialize")]
    DualTooLong(BigInt),
}

impl Error {
    /// True for errors caused by malformed or out-of-domain user input, as
    /// opposed to failed internal postconditions.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NegativeSqrt(_)
                | Error::NotPrime(_)
                | Error::DegenerateCongruence(_)
                | Error::NonUnitDeterminant(_)
                | Error::Singular
                | Error::NotSpecialLinear(_)
                | Error::NotHyperbolic(_)
                | Error::InvalidQuadIrr(_)
                | Error::InvalidCycle(_)
                | Error::DependentColumns
                | Error::NotInvariant
                | Error::DegreeOutOfRange(_)
                | Error::DualTooLong(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
