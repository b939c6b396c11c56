use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{0} qubits per node exceeds the supported maximum of {max}", max = crate::node::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("occupation f_{channel} = {value} is outside [0, 1]", channel = .channel + 1)]
    OccupationOutOfRange { channel: usize, value: f64 },

    #[error("state is not normalized: squared norm {0}")]
    Unnormalized(f64),

    #[error("matrix is not unitary: max |U^dagger U - I| = {residual:.3e} at ({row}, {col})")]
    NotUnitary { residual: f64, row: usize, col: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("at site {site}: {source}")]
    AtSite { site: usize, source: Box<Error> },

    #[error("at step {time}: {source}")]
    AtStep { time: u64, source: Box<Error> },
}

impl Error {
    /// True for failures of a numerical invariant (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::InvalidDensity(_) | Error::Consistency(_) => true,
            Error::AtSite { source, .. } | Error::AtStep { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn at_site(self, site: usize) -> Self {
        Error::AtSite { site, source: Box::new(self) }
    }

    pub(crate) fn at_step(self, time: u64) -> Self {
        Error::AtStep { time, source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
