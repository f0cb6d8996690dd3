use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library.
///
/// [`Error::is_input_error`] separates problems with the caller's data from
/// internal-consistency failures (oracle mismatches, broken invariants).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("generator {generator} ({vector}) is not contained in the enclosing lattice")]
    NotContained { generator: usize, vector: String },

    #[error("integer overflow in {context}")]
    Overflow { context: &'static str },

    #[error("invalid {field}: {message}")]
    InvalidSpec { field: String, message: String },

    #[error("{0}")]
    Domain(String),

    #[error("quotient is infinite (coroot lattice has rank {rank} < {ambient}); use the lattice formula instead")]
    InfiniteQuotient { rank: usize, ambient: usize },

    #[error("finite module has {size} elements, above the enumeration cap {cap}")]
    EnumerationCap { size: u128, cap: u64 },

    #[error("degenerate cubic: discriminant {discriminant:e} is numerically zero")]
    Degenerate { discriminant: f64 },

    #[error("lattice is not stable under complex conjugation: {0}")]
    Shape(String),

    #[error("could not recognise an integer matrix: {0}")]
    Recognition(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// `true` for errors caused by invalid input rather than a broken invariant.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::NotContained { .. }
                | Error::InvalidSpec { .. }
                | Error::Domain(_)
                | Error::InfiniteQuotient { .. }
                | Error::EnumerationCap { .. }
                | Error::Degenerate { .. }
                | Error::Shape(_)
                | Error::Overflow { .. }
        )
    }
}
