use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("constant polynomial is not allowed here")]
    ConstantPolynomial,
    #[error("negative exponent on non-divisor variable {0}")]
    NegativeExponent(usize),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("Gröbner operations require polynomial input without poles")]
    LaurentInput,
    #[error("non-isolated critical locus: {0}")]
    NonIsolated(String),
    #[error("degenerate ideal: {0}")]
    Degenerate(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("negative power on non-divisor variable `{0}`")]
    NegativePower(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no stabilization within {doublings} doublings: {trace}")]
    Unstable { doublings: u32, trace: String },
    #[error("internal arithmetic inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Unstable { .. } => 3,
            Error::Internal(_) => 4,
            _ => 2,
        }
    }
}
