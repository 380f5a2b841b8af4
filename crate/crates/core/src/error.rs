use thiserror::Error;

/// Every failure the library reports.
///
/// Most variants are precondition failures. [`Error::Invariant`] is reserved
/// for internal consistency checks that should never fire.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree too small")]
    DegreeTooSmall,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit in 32 bits")]
    ModulusTooLarge(u64),
    #[error("no quadratic non-residue modulo {0}")]
    NoNonResidue(u64),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("input must be nonzero")]
    Zero,
    #[error("squarefreeness of {0} unknown without full factorization")]
    SquarefreeUnknown(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model is not in the normal form required for this height")]
    NotNormalForm,
    #[error("bad prime {0}")]
    BadPrime(u64),
    #[error("prime {p} exceeds guard {guard}")]
    PrimeGuard { p: u64, guard: u64 },
    #[error("infinity not rational")]
    InfinityNotRational,
    #[error("point not on curve")]
    NotOnCurve,
    #[error("order unresolved")]
    OrderUnresolved,
    #[error("no good prime supplied")]
    NoGoodPrime,
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("empty bound")]
    EmptyBound,
    #[error("glue degenerate")]
    GlueDegenerate,
    #[error("coincident roots")]
    CoincidentRoots,
    #[error("cubic does not split into rational roots")]
    NotSplit,
    #[error("extension-only: {0}")]
    ExtensionOnly(String),
    #[error("grid too small: {0} usable points, need at least 3")]
    GridTooSmall(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("window {0} too large")]
    WindowTooLarge(u32),
    #[error("denominator of point {index} divisible by {q}")]
    DenominatorDivisible { index: usize, q: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True when the error signals a bug rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
