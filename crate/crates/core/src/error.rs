use thiserror::Error;

use crate::poly::Atom;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no closed-form exception list for k = {k}; k must be at least 4")]
    NoClosedForm { k: u32 },
    #[error("n = {n} is outside the function bound {bound}")]
    OutOfBound { n: u64, bound: u64 },
    #[error("n must be positive")]
    ZeroArgument,
    #[error("family {family}: parameter {param} must be nonzero")]
    ZeroParameter {
        family: &'static str,
        param: &'static str,
    },
    #[error("family {family}: missing parameter {param}")]
    MissingParameter {
        family: &'static str,
        param: &'static str,
    },
    #[error("family {family} takes no parameter {param}")]
    UnexpectedParameter {
        family: &'static str,
        param: &'static str,
    },
    #[error("values table must start with f(1) = 1")]
    BadUnitValue,
    #[error("pivot {atom} is already decided")]
    DecidedPivot { atom: Atom },
    #[error("{n} is a sum of four nonzero squares; the equation pins it directly")]
    Representable { n: u64 },
    #[error("{n} is pinned by a direct instance at {via} = 2 * {n}")]
    DirectInstance { n: u64, via: u64 },
    #[error("{n} is not in a four-square exception family")]
    NotAnException { n: u64 },
    #[error("witness for {n} needs equation instances up to {needed}, state bound is {bound}")]
    WitnessBeyondBound { n: u64, needed: u64, bound: u64 },
    #[error("propagation did not reach a fixed point within {limit} passes")]
    PropagationLimit { limit: usize },
}
