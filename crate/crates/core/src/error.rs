use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("incongruent grids: {0}")]
    GridMismatch(String),

    #[error("initial position violates y0(0) = 0: extrapolated value {value:e} exceeds {bound:e}")]
    BoundaryValue { value: f64, bound: f64 },

    #[error("horizon T = {0} is not a positive even integer")]
    InvalidHorizon(f64),

    #[error("weight lambda = {0} outside the admissible range")]
    InvalidLambda(f64),

    #[error("root z = {0} outside (-1, 0]")]
    InvalidRoot(f64),

    #[error("time {t} is not on the half-grid of spacing {h}")]
    OffGrid { t: f64, h: f64 },

    #[error("time {t} outside [0, {end}]")]
    OutOfRange { t: f64, end: f64 },

    #[error("profile too short: {0}")]
    TooShort(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("invalid mode batch: {0}")]
    InvalidMode(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular(_) | Error::NonFinite(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
