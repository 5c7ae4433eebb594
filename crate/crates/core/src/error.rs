//! Failure and error types shared by every layer of the solver.
//!
//! Two very different things can go wrong while solving. A constraint can
//! become unsatisfiable: that is [`Fail::Inconsistent`], the ordinary signal
//! search reacts to by undoing to the last choice point. A caller can also
//! misuse an API (asking for the value of a non-singleton, undoing to a stale
//! mark, ...): that is a [`ContractError`], and search aborts on it.

use thiserror::Error;

/// Misuse of a solver API. Never produced by a well-formed program.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("indeterminate bound arithmetic: {0}")]
    IndeterminateBound(String),
    #[error("range {0} is not a singleton")]
    NotSingleton(String),
    #[error("range {0} is infinite and cannot be enumerated")]
    InfiniteRange(String),
    #[error("mixed range representations in one operation")]
    KindMismatch,
    #[error("value {0} lies outside the bitset universe")]
    OutsideUniverse(i64),
    #[error("choice mark is stale or belongs to another store")]
    StaleMark,
    #[error("propagator {0} is already registered on this chain")]
    DuplicatePropagator(u64),
    #[error("constraint {name} expects {expected} arguments, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("argument {index} of {name} must be an integer")]
    ExpectedInteger { name: String, index: usize },
    #[error("type error: {0} is not an integer or model variable")]
    TypeError(String),
    #[error("unsupported constraint: {0}")]
    Unsupported(String),
    #[error("search exceeded the node limit of {0}")]
    NodeLimit(u64),
}

/// Outcome of a kernel operation that did not succeed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Fail {
    /// A range became empty: the constraint store is inconsistent.
    #[error("inconsistent")]
    Inconsistent,
    #[error(transparent)]
    Contract(#[from] ContractError),
}

impl Fail {
    pub fn is_inconsistent(&self) -> bool {
        matches!(self, Fail::Inconsistent)
    }
}

pub type FdResult<T = ()> = Result<T, Fail>;

/// Turns an optional (possibly empty) result into a kernel outcome.
pub(crate) trait OrFail<T> {
    fn or_fail(self) -> FdResult<T>;
}

impl<T> OrFail<T> for Option<T> {
    #[inline]
    fn or_fail(self) -> FdResult<T> {
        self.ok_or(Fail::Inconsistent)
    }
}
