//! Crate-wide error type.

use crate::barycenter::PipelineTrace;

/// Errors reported by the library.
///
/// Failures of a *law* (modularity, cone axioms, monad laws, ...) are not
/// errors: the checkers return reports with counterexamples instead. An
/// `Error` means an input violated a contract or a hard bound.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duplicate element name `{name}`")]
    DuplicateName { name: String },

    #[error("unknown element name `{name}`")]
    UnknownName { name: String },

    #[error("the order has a cycle through `{name}` (not antisymmetric)")]
    Cycle { name: String },

    #[error("enumeration exceeds the size bound {bound}")]
    Size { bound: usize },

    #[error("`{x}` and `{y}` have upper bounds but no least one")]
    NoJoin { x: String, y: String },

    #[error("the open sets do not separate `{x}` from `{y}`")]
    NotT0 { x: String, y: String },

    #[error("{set} is not upward closed: it contains `{member}` but not `{above}`")]
    NotUpset {
        set: String,
        member: String,
        above: String,
    },

    #[error("table value on {upset} is infinite; inversion needs finite values")]
    InfiniteValue { upset: String },

    #[error("table is not induced by nonnegative weights: {reason}")]
    NegativeWeight { reason: String },

    #[error("not monotone: `{x}` <= `{y}` but the images {fx} and {fy} are not ordered")]
    NotMonotone {
        x: String,
        y: String,
        fx: String,
        fy: String,
    },

    #[error("not a linear functional: {law} fails at {witness}")]
    NotLinear { law: String, witness: String },

    #[error("not a lattice: {reason}")]
    NotLattice { reason: String },

    #[error("`{y}` <= `{x}`, so no linear functional can separate them")]
    NotSeparable { x: String, y: String },

    #[error("powercone barycenter {set} is not principal")]
    NonPrincipal {
        set: String,
        trace: Box<PipelineTrace>,
    },

    #[error("cannot parse `{text}` as a nonnegative rational or `inf`")]
    BadRational { text: String },

    #[error("{file}: {message}")]
    Parse { file: String, message: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
