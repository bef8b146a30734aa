//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A bound exceeds what the fixed-width integer paths can guarantee exact.
    #[error("capacity exceeded for {what}: {requested} > {limit}")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// Intermediate arithmetic would overflow the 128-bit budget.
    #[error("overflow in {0}")]
    Overflow(&'static str),

    /// `sqrt_mod` called on a non-residue.
    #[error("{a} is not a square modulo {p}")]
    NoRoot { a: i64, p: u64 },

    /// Quartic symbol requested for `n` with `(n/p) != 1`.
    #[error("quartic symbol undefined: ({n}/{p}) != 1")]
    UndefinedSymbol { n: i64, p: u64 },

    /// A prime has no representation of the requested shape.
    #[error("{p} has no representation: {what}")]
    NoRepresentation { p: u64, what: &'static str },

    /// A proved identity failed; this always indicates an implementation bug
    /// and carries the smallest offending prime.
    #[error("identity violation at p={p} [{identity}]: {detail}")]
    IdentityViolation {
        p: u64,
        identity: &'static str,
        detail: String,
    },

    /// A discriminant argument is not of the accepted shape.
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
}

impl Error {
    pub fn violation(p: u64, identity: &'static str, detail: impl Into<String>) -> Self {
        Error::IdentityViolation {
            p,
            identity,
            detail: detail.into(),
        }
    }

    /// True for errors that mean "theorem failed", not "bad input".
    pub fn is_violation(&self) -> bool {
        matches!(self, Error::IdentityViolation { .. })
    }
}
