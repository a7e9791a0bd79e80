use thiserror::Error;

/// Errors produced by ring arithmetic, fitting and invariant computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("ideal {0} is not m-primary; its colength is infinite")]
    InfiniteColength(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },

    #[error("exponent {0} is not an element of the semigroup")]
    NotInSemigroup(u32),

    #[error("differences of degree {degree} did not stabilize on the window n <= {n_max}")]
    NotStabilized { degree: usize, n_max: usize },

    #[error("convention expects degree {expected}, polynomial has degree {found}")]
    ConventionMismatch { expected: usize, found: usize },

    #[error("not a reduction within s <= {s_max}")]
    NotAReduction { s_max: usize },

    #[error("independent routes disagree: {0}")]
    OracleMismatch(String),
}

impl Error {
    pub fn is_not_stabilized(&self) -> bool {
        matches!(self, Error::NotStabilized { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
