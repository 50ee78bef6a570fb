use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("mask block identity {block} violated at level {level}: defect {defect:e}")]
    MaskInconsistent {
        level: u32,
        block: &'static str,
        defect: f64,
    },

    #[error("dimension mismatch ({context}): expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("mask at level {level} spans {span} rows in one column, limit is {limit}")]
    BandwidthExceeded { level: u32, span: usize, limit: usize },

    #[error("level {level} is below the coarsest level {j0}")]
    LevelBelowCoarsest { level: u32, j0: u32 },

    #[error("level {level} exceeds the finest level {max} supplied by the basis")]
    LevelBeyondMasks { level: u32, max: u32 },

    #[error("evaluation grid level {grid} must exceed the index level {level}")]
    LevelTooCoarse { grid: u32, level: u32 },

    #[error("expected {expected} coefficients, got {found}")]
    WrongSystem {
        expected: &'static str,
        found: &'static str,
    },

    #[error("dimension n = {0} is not supported here")]
    UnsupportedDimension(usize),

    #[error("invalid exponent {0}")]
    InvalidExponent(f64),

    #[error("exponent p = {p} outside the admissible range ({lo}, {hi}]")]
    ExponentOutOfRange { p: f64, lo: f64, hi: f64 },

    #[error("rate fit needs at least 3 positive points in the window, found {0}")]
    InsufficientPoints(usize),

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("Kronecker factor of size {rows}x{cols} exceeds the 64x64 limit")]
    SizeTooLarge { rows: usize, cols: usize },

    #[error("unknown test function kind `{0}`")]
    UnknownKind(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected,
            found,
        }
    }
}
