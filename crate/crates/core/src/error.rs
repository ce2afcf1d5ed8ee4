use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::verdicts::Verdict;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two words of different precision were combined.
    PrecisionMismatch { left: u32, right: u32 },
    /// Precision outside `1..=64`.
    InvalidPrecision(u32),
    DigitOutOfRange { index: u32, precision: u32 },
    /// Multiplicative inverse requested for an even residue.
    EvenInverse,
    Parse { position: usize, message: String },
    UnboundVariable(String),
    /// An enumeration would visit more states than allowed.
    BudgetExceeded { required: u128, budget: u64 },
    /// The operation needs a compatible (1-Lipschitz) expression.
    NonCompatible(String),
    /// The operation only supports arithmetic (ring) operators.
    NotArithmetic(String),
    CapExceeded { requested: u32, cap: u32 },
    InvalidArgument(String),
    /// A generator refused to build because its criterion failed.
    Refused(Box<Verdict>),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PrecisionMismatch { left, right } => {
                write!(f, "precision mismatch: {left} bits vs {right} bits")
            }
            Error::InvalidPrecision(n) => write!(f, "precision {n} outside 1..=64"),
            Error::DigitOutOfRange { index, precision } => {
                write!(f, "digit index {index} out of range for precision {precision}")
            }
            Error::EvenInverse => f.write_str("even residue has no multiplicative inverse"),
            Error::Parse { position, message } => {
                write!(f, "syntax error at offset {position}: {message}")
            }
            Error::UnboundVariable(name) => write!(f, "unbound variable `{name}`"),
            Error::BudgetExceeded { required, budget } => {
                write!(f, "enumeration of {required} states exceeds budget {budget}")
            }
            Error::NonCompatible(what) => write!(f, "expression is not compatible: {what}"),
            Error::NotArithmetic(what) => {
                write!(f, "only arithmetic operators are supported here: {what}")
            }
            Error::CapExceeded { requested, cap } => {
                write!(f, "requested index {requested} exceeds cap {cap}")
            }
            Error::InvalidArgument(msg) => f.write_str(msg),
            Error::Refused(v) => write!(
                f,
                "generator refused: criterion {} reports {} for {}",
                v.criterion, v.outcome, v.property
            ),
        }
    }
}

impl core::error::Error for Error {}
