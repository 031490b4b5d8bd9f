//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point off lattice: {0}")]
    OffLattice(String),

    #[error("matrix parameter is not unimodular: det = {det}")]
    NotUnimodular { det: f64 },

    #[error("degenerate parameter (b = 0) not allowed here: {0}")]
    DegenerateParams(String),

    #[error("shape {0}x{1} is not a power of two and padding is disabled")]
    NotPowerOfTwo(usize, usize),

    #[error("window function is identically zero")]
    ZeroWindow,

    #[error("zero input where a nonzero signal is required")]
    ZeroInput,

    #[error("recovery configuration unstable: |Q||T| = {qt} is outside 0 < |Q||T| < {limit} = 2*pi/|b|")]
    Unstable { qt: f64, limit: f64 },

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("truncated payload: {0}")]
    Truncated(String),

    #[error("unsupported format version {0}")]
    BadVersion(u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
