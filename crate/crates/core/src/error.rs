use thiserror::Error;

use crate::koszul::Cochain;
use crate::polyring::Poly;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("mismatched number of variable pairs: {left} vs {right}")]
    MismatchedArity { left: usize, right: usize },
    #[error("mismatched truncation order: {left} vs {right}")]
    MismatchedTruncation { left: usize, right: usize },
    #[error("variable index {index} out of range for n = {n}")]
    InvalidVariable { index: usize, n: usize },
    #[error("negative shift {0}")]
    NegativeShift(i64),
    #[error("expected a nonempty list of polynomials")]
    EmptySystem,
    #[error("{0}")]
    Parse(#[from] crate::polyring::ParseError),
    #[error("generators do not Poisson-commute: {{f{},f{}}} = {bracket}", .i + 1, .j + 1)]
    NotInvolutive { i: usize, j: usize, bracket: Poly },
    #[error("cochain is not a cocycle; its differential is {delta}")]
    NotACocycle { delta: Cochain },
    #[error("cochain degree {degree} is invalid here ({reason})")]
    InvalidDegree { degree: usize, reason: &'static str },
    #[error("generator index {index} out of range for {n} generators")]
    InvalidIndex { index: usize, n: usize },
    #[error("polynomial {poly} is not homogeneous")]
    NotHomogeneous { poly: Poly },
    #[error("invalid action-angle frame: {0}")]
    InvalidFrame(String),
    #[error("truncation {truncation} is too small for level {level}")]
    InsufficientTruncation { truncation: usize, level: usize },
    #[error(
        "series do not lift a {level}-lifting: [F{},F{}] has nonzero hbar^{order} coefficient",
        .i + 1, .j + 1
    )]
    NotALift {
        level: usize,
        i: usize,
        j: usize,
        order: usize,
    },
    #[error("shear generator {poly} mentions {kind} variables")]
    ForbiddenShearVariable { poly: Poly, kind: &'static str },
    #[error("unknown solver {0:?}")]
    UnknownSolver(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
