//! Variety presentations: integer polynomial systems in affine or
//! projective space, their file format, evaluation and Jacobian ranks.

mod eval;
mod poly;
mod presentation;

pub use eval::{eval_mod, eval_poly, jacobian_rank_at, RingElem};
pub(crate) use eval::reduce_coeff;
pub use poly::{Exponents, MultiPoly};
pub use presentation::{parse_variety, Ambient, VarietyPresentation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VarietyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid variety document: {0}")]
    Json(String),
    #[error("polynomial {0} is not homogeneous in a projective ambient")]
    NotHomogeneous(usize),
    #[error("variable x{index} out of range for {nvars} coordinates")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("coordinates live in different rings")]
    MixedRings,
    #[error("point is not a solution modulo p")]
    NotASolution,
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}
