use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("precision ceiling of {bits} bits reached without closing the interval")]
    PrecisionExhausted { bits: u32 },
    #[error("orbit digit {step} undetermined: the orbit straddles a partition endpoint at {bits} bits")]
    DigitUndetermined { step: usize, bits: u32 },
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("cannot parse real number descriptor `{0}`")]
    ParseReal(String),
    #[error("cannot parse word `{0}`")]
    ParseWord(String),
    #[error("{needed} kneading digits required but only {available} are certified")]
    InsufficientKneadingDepth { needed: usize, available: usize },
    #[error("digit {digit} exceeds the alphabet top symbol {ell}")]
    InvalidDigit { digit: u8, ell: u8 },
    #[error("prefixes agree on all {0} available symbols")]
    IndistinguishableAtDepth(usize),
    #[error("word does not label a path from the root (fails at position {position})")]
    NotAPath { position: usize },
    #[error("word of length {len} exceeds graph depth {depth}")]
    BeyondGraphDepth { len: usize, depth: usize },
    #[error("vertex <{j},{k}> is not in the truncated graph")]
    UnknownVertex { j: usize, k: usize },
    #[error("no path to the root inside the graph truncated at depth {depth}")]
    NotFoundWithinDepth { depth: usize },
    #[error("beta > 2 is not certified for these parameters")]
    BetaNotAboveTwo,
    #[error("prefix of length {available} is too short, {needed} symbols required")]
    PrefixTooShort { needed: usize, available: usize },
    #[error("admissible word has no admissible extension (internal inconsistency)")]
    NoAdmissibleExtension,
    #[error("estimated {estimated} words exceeds the enumeration budget of {budget}")]
    EnumerationBudgetExceeded { estimated: f64, budget: u64 },
    #[error("power iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("potential table has no value for admissible word {0}")]
    MissingPotentialEntry(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("D(a) keeps growing up to scan depth {scan_depth} (max {max_found})")]
    UnboundedDaEvidence { scan_depth: usize, max_found: usize },
    #[error("bracket does not certify a sign change: {0}")]
    BracketFailure(String),
    #[error("no perturbation within tolerance {tol:e} found in the first {budget} orbit points")]
    ToleranceUnreachableAtDepth { tol: f64, budget: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::DigitUndetermined { .. } => "DigitUndetermined",
            Error::DivisionByZero => "DivisionByZero",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::ParseReal(_) => "ParseReal",
            Error::ParseWord(_) => "ParseWord",
            Error::InsufficientKneadingDepth { .. } => "InsufficientKneadingDepth",
            Error::InvalidDigit { .. } => "InvalidDigit",
            Error::IndistinguishableAtDepth(_) => "IndistinguishableAtDepth",
            Error::NotAPath { .. } => "NotAPath",
            Error::BeyondGraphDepth { .. } => "BeyondGraphDepth",
            Error::UnknownVertex { .. } => "UnknownVertex",
            Error::NotFoundWithinDepth { .. } => "NotFoundWithinDepth",
            Error::BetaNotAboveTwo => "BetaNotAboveTwo",
            Error::PrefixTooShort { .. } => "PrefixTooShort",
            Error::NoAdmissibleExtension => "NoAdmissibleExtension",
            Error::EnumerationBudgetExceeded { .. } => "EnumerationBudgetExceeded",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::MissingPotentialEntry(_) => "MissingPotentialEntry",
            Error::InvalidPotential(_) => "InvalidPotential",
            Error::UnboundedDaEvidence { .. } => "UnboundedDaEvidence",
            Error::BracketFailure(_) => "BracketFailure",
            Error::ToleranceUnreachableAtDepth { .. } => "ToleranceUnreachableAtDepth",
            Error::VerificationFailed(_) => "VerificationFailed",
        }
    }
}
