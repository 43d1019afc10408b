use thiserror::Error;

use crate::lattice::DivisorClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not an isometry of the Picard lattice: {0}")]
    NotAnIsometry(String),

    #[error("group closure exceeds the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },

    #[error("element order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("{0} is not a root (needs square -2 and zero pairing with K)")]
    NotARoot(DivisorClass),

    #[error("{0} is not an exceptional class")]
    NotACurve(DivisorClass),

    #[error("element has order {order}, expected 3")]
    NotOrderThree { order: usize },

    #[error("curves {a} and {b} are not disjoint (pairing {pairing})")]
    NotDisjoint { a: String, b: String, pairing: i64 },

    #[error("curve {0} belongs to the star")]
    CurveInStar(String),

    #[error("stars share the curves {0:?}; the pair patterns only cover stars without common curves")]
    SharedCurves(Vec<String>),

    #[error("generator {g_index} of G does not commute with generator {gamma_index} of Gamma")]
    NonCommuting { g_index: usize, gamma_index: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}
