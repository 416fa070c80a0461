use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("precision unreachable at cap: {0}")]
    PrecisionUnreachable(String),

    #[error("ramification budget exceeded: exponent {num}/{den} is not divisible by q^{shift}")]
    RamificationBudget { num: i64, den: i64, shift: u32 },

    #[error("enumeration cap: degree {degree} exceeds cap {cap}")]
    EnumerationCap { degree: u32, cap: u32 },

    #[error("not a unit at this precision: {0}")]
    NotAUnit(String),

    #[error("leading-term extraction failed: {0}")]
    LeadingTerm(String),

    #[error("interpolation failed: {0}")]
    InterpolationFailed(String),

    #[error("constructive path unsupported; use interpolation ({0})")]
    ConstructiveUnsupported(String),

    #[error("outside convergence domain: {0}")]
    OutsideDomain(String),

    #[error("outside log domain: {0}")]
    LogDomain(String),

    #[error("rejected: {0}")]
    Rejected(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used in reports.
    #[must_use]
    pub fn code(&self) -> &'static str {
        match self {
            Error::PrecisionExhausted(_) => "precision_exhausted",
            Error::PrecisionUnreachable(_) => "precision_unreachable",
            Error::RamificationBudget { .. } => "ramification_budget",
            Error::EnumerationCap { .. } => "enumeration_cap",
            Error::NotAUnit(_) => "not_a_unit",
            Error::LeadingTerm(_) => "leading_term",
            Error::InterpolationFailed(_) => "interpolation_failed",
            Error::ConstructiveUnsupported(_) => "constructive_unsupported",
            Error::OutsideDomain(_) => "outside_domain",
            Error::LogDomain(_) => "log_domain",
            Error::Rejected(_) => "rejected",
            Error::Config(_) => "config",
            Error::Parse(_) => "parse",
        }
    }

    /// Process exit status for the CLI: 2 for bad input (including points outside a
    /// convergence domain), 3 when a precision or enumeration cap is hit, 1 otherwise.
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse(_) | Error::OutsideDomain(_) | Error::LogDomain(_) | Error::Rejected(_) => 2,
            Error::PrecisionExhausted(_)
            | Error::PrecisionUnreachable(_)
            | Error::RamificationBudget { .. }
            | Error::EnumerationCap { .. } => 3,
            _ => 1,
        }
    }
}
