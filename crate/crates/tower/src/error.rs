use ordinals::Ordinal;
use thiserror::Error;

use crate::cache::CacheError;

#[derive(Debug, Error)]
pub enum TowerError {
    /// Two stage axioms in code order whose codes do not increase. The
    /// decision procedure's cutoff would be unsound, so the run stops.
    #[error("stage axiom codes do not increase: code of A({later}) <= code of A({earlier})")]
    MonotonicityViolation { earlier: Ordinal, later: Ordinal },
    #[error("notation {0} has a code too large for this implementation")]
    TooLarge(Ordinal),
    #[error("{0} is not a limit notation")]
    NotALimit(Ordinal),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

pub type Result<T> = std::result::Result<T, TowerError>;
