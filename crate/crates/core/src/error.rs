use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p and q must be positive and coprime, got ({p}, {q})")]
    NotCoprime { p: i64, q: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("self-linking of an orbit with itself is not a linking number")]
    SelfLinking,

    #[error("trivialization {triv} is not defined on {orbit}")]
    TrivializationMismatch { triv: String, orbit: String },

    #[error("degree cutoff {given} is too small; index window needs max degree >= {required}")]
    CutoffTooSmall { given: i64, required: i64 },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
