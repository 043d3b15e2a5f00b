use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Mathematical outcomes (a set failing to separate, a group not being
/// generated by reflections) are never errors; they are returned as data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over GF({p}): divisible by {factor}")]
    ReducibleModulus { p: u64, factor: String },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("field of order {0} is too large for table arithmetic")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields: {0}")]
    SpecMismatch(String),
    #[error("no embedding along the declared tower: {0}")]
    SpecIncompatible(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("enumeration of {needed} points exceeds the budget of {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("cannot enumerate points of an infinite field")]
    InfiniteField,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("coefficient not in field: {0}")]
    CoefficientNotInField(String),
    #[error("variable lists differ: {0}")]
    VariableMismatch(String),
    #[error("group closure exceeded {0} elements (group is likely infinite)")]
    OrderBoundExceeded(usize),
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("candidate {index} is not invariant: {detail}")]
    NotInvariant { index: usize, detail: String },
    #[error("polynomial has {found} variables, group acts on {expected}")]
    VariableCountMismatch { expected: usize, found: usize },
    #[error("expected exactly {expected} candidates, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("unknown slot variable `{0}` (allowed: z1..z6)")]
    UnknownSlot(String),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("schema error at {pointer}: {msg}")]
    Schema { pointer: String, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
