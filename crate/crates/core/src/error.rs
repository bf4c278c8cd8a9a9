use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("Fock truncation N={truncation} leaves tail mass {tail:e} above tolerance {tolerance:e}")]
    Truncation { truncation: usize, tail: f64, tolerance: f64 },

    #[error("Wigner synthesis left an imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("field integral {0:e} too small to normalize")]
    DegenerateNormalization(f64),

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadrature(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("malformed grid file: {0}")]
    Format(String),

    #[error("{0} node(s) failed the quadrature convergence check")]
    NotConverged(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { path: path.into(), message: message.into() }
    }
}
