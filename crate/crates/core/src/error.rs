use thiserror::Error;

/// Errors raised by the spectral toolkit, the state constructors and the
/// entropy functionals.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian: entries ({i},{j}) and ({j},{i}) differ by {deviation:e}")]
    NotHermitian { i: usize, j: usize, deviation: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{tolerance:e}")]
    NotPositiveSemidefinite { eigenvalue: f64, tolerance: f64 },

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("non-finite entry at ({0},{1})")]
    NonFinite(usize, usize),

    #[error("{function} is undefined at eigenvalue {eigenvalue:e}")]
    FunctionUndefined { function: &'static str, eigenvalue: f64 },

    #[error("matrix is rank deficient (eigenvalue {eigenvalue:e}); compress to the support first")]
    RankDeficient { eigenvalue: f64 },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("zero vector cannot define a pure state")]
    ZeroVector,

    #[error("rank {rank} outside 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("smoothing window is empty: epsilon = {epsilon} but ||rho - sigma||_1 = {norm}")]
    EmptySmoothingWindow { epsilon: f64, norm: f64 },

    #[error("step {h:e} makes A - h*Delta indefinite")]
    StepTooLarge { h: f64 },

    #[error("singular matrix in resolvent at s = {0:e}")]
    Singular(f64),

    #[error("invalid state file: {field}: {message}")]
    StateFile { field: String, message: String },

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("invalid quadrature scheme: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if value.is_nan() || value < lo || value > hi {
        return Err(Error::ParameterOutOfRange { name, value, range });
    }
    Ok(())
}

pub(crate) fn check_open(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if value.is_nan() || value <= lo || value >= hi {
        return Err(Error::ParameterOutOfRange { name, value, range });
    }
    Ok(())
}
