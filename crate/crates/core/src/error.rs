use alloc::string::String;

use crate::relation::OrderKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} cap exceeded: requested {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },
    #[error("relation is not a {0}")]
    NotAnOrderOfKind(OrderKind),
    #[error("relation is not a weak order")]
    NotAWeakOrder,
    #[error("interval representation failed self-verification: {0}")]
    InternalVerificationFailed(&'static str),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
    #[error("arc does not belong to the network")]
    ArcNotInNetwork,
    #[error("invalid arc word: {0}")]
    InvalidWord(String),
    #[error("operation not defined for {0}")]
    UnsupportedKind(OrderKind),
    #[error("non-finite objective value or gradient at iteration {iteration}")]
    NonFiniteObjective { iteration: usize },
    #[error("incompatible choice data: {0}")]
    IncompatibleData(&'static str),
    #[error(
        "no prior sample fell inside the model ({posterior_hits}/{samples} posterior samples did); \
         the Bayes factor is undefined"
    )]
    DegeneratePrior { posterior_hits: u64, samples: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
