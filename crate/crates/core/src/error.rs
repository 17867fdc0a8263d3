use thiserror::Error;

use crate::verify::VerifyReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("group order mismatch: expected k={expected}, got k={got}")]
    MismatchedK { expected: u32, got: u32 },

    #[error("direction {dir} out of range for n={n}")]
    DirOutOfRange { dir: usize, n: usize },

    #[error("digit {digit} out of range for k={k}")]
    DigitOutOfRange { digit: u32, k: u32 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{cells} point-direction cells exceed the cell cap of {cap}")]
    CapExceeded { cells: u128, cap: u128 },

    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("parameters are infeasible")]
    Infeasible,

    #[error("no construction is known for k={k}, n={n}, a={a}, b={b} (composite k with a >= 1)")]
    UnsupportedOpenCase {
        k: u32,
        n: usize,
        a: usize,
        b: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("incompatible groups: prime {0} of the index group does not divide k")]
    IncompatibleGroups(u32),

    #[error("input marking does not verify as [{a},{b}]")]
    NotCertified { a: usize, b: usize },

    #[error("experimental construction failed after {attempts} q' tables: {summary}")]
    ExperimentalFailure {
        attempts: usize,
        summary: String,
        report: Box<VerifyReport>,
    },

    #[error("internal error: {0}")]
    Internal(String),
}
