use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// One violated invariant found while validating a problem description.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// β < δ, so α = β − δ would be negative.
    BetaBelowDelta { beta: f64, delta: f64 },
    /// β + δ + 1 ≤ 0.
    NonPositiveExponentSum { sum: f64 },
    /// A material constant (a, k or γ) is not strictly positive.
    Material { name: &'static str, value: f64 },
    /// A boundary constant is not strictly positive (λ must be non-negative).
    Boundary { name: &'static str, value: f64 },
    /// A value is NaN or infinite.
    NotFinite { name: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BetaBelowDelta { beta, delta } => {
                write!(f, "beta >= delta violated (beta = {beta}, delta = {delta})")
            }
            Violation::NonPositiveExponentSum { sum } => {
                write!(f, "beta + delta + 1 > 0 violated (beta + delta + 1 = {sum})")
            }
            Violation::Material { name, value } => {
                write!(f, "material constant {name} must be > 0 (got {value})")
            }
            Violation::Boundary { name, value } => {
                if *name == "lambda" {
                    write!(f, "boundary constant lambda must be >= 0 (got {value})")
                } else {
                    write!(f, "boundary constant {name} must be > 0 (got {value})")
                }
            }
            Violation::NotFinite { name } => write!(f, "{name} must be finite"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem: {}", join(.0))]
    Validation(Vec<Violation>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no sign change found on (0, {hi}]")]
    Bracketing { hi: f64 },

    #[error("no convergence after {iterations} iterations (last iterate {last})")]
    NonConvergence { iterations: usize, last: f64 },

    #[error("residual |F(xi)| = {residual:e} exceeds {limit:e}")]
    Residual { residual: f64, limit: f64 },

    #[error("degenerate solution: {0}")]
    Degenerate(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("precision insufficient: estimated cancellation of {needed} digits with {available} working digits")]
    PrecisionInsufficient { needed: i64, available: u32 },

    #[error("verification failed: {0}")]
    Verification(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::Precondition(_)
            | Error::Config(_) => 2,
            Error::Overflow(_)
            | Error::Bracketing { .. }
            | Error::NonConvergence { .. }
            | Error::Residual { .. }
            | Error::Degenerate(_)
            | Error::PrecisionInsufficient { .. } => 3,
            Error::Verification(_) => 4,
        }
    }
}
