use thiserror::Error;

/// Largest modulus accepted by the integer routines. Every product they form
/// stays inside `i128` below this bound.
pub const MAX_MODULUS: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd({a}, {b}) = {gcd}, expected 1")]
    NotCoprime { a: i64, b: i64, gcd: u64 },

    #[error("{what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("modulus {0} exceeds the supported bound 2^32")]
    ModulusTooLarge(u64),

    #[error("linking forms live on groups of different orders ({left} vs {right})")]
    OrderMismatch { left: String, right: String },

    #[error("slopes {left} and {right} are at distance {distance}, expected 1")]
    NotDistanceOne { left: String, right: String, distance: u64 },

    #[error("overflow while computing {0}")]
    Overflow(&'static str),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { what, detail: detail.into() }
    }

    pub(crate) fn parse(what: &'static str, input: &str) -> Self {
        Error::Parse { what, input: input.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_modulus(p: u64) -> Result<()> {
    if p > MAX_MODULUS {
        Err(Error::ModulusTooLarge(p))
    } else {
        Ok(())
    }
}
