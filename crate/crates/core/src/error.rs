use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range for a chain of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("chain length {0} outside the supported range 1..={max}", max = crate::hilbert::MAX_SITES)]
    InvalidLength(usize),

    #[error("invalid kept-site set: {0}")]
    InvalidKeepSet(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("density matrix trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("density matrix has negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver did not converge")]
    EigenNoConvergence,

    #[error("postselection success probability {0:e} is below the degeneracy threshold")]
    DegeneratePostselection(f64),

    #[error("ancilla-extended dimension {dim} exceeds oracle ceiling {ceiling}")]
    OracleCeiling { dim: usize, ceiling: usize },

    #[error("total S_z = {total_sz} is incompatible with {sites} sites")]
    IncompatibleSector { sites: usize, total_sz: f64 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("{degenerate} of {total} realizations hit degenerate postselection (limit 1%)")]
    TooManyDegenerate { degenerate: usize, total: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
