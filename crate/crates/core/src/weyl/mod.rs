//! The quantised algebra: star products, brackets and vector fields.
//!
//! Sign convention: `{f, g} = sum_i d_{p_i} f d_{q_i} g - d_{q_i} f d_{p_i} g`,
//! so `{p, q} = 1` and `p * q - q * p = hbar` for the normal product.

mod bracket;
mod field;
mod star;

pub use bracket::{hamiltonian_field, is_involutive, poisson_bracket, system_arity, Involutivity};
pub use field::{validate_aa_frame, AAFrame, FrameDefect, FrameVerdict, VectorField};
pub use star::{
    star_action_angle, star_commutator, star_normal, ActionAngleStar, NormalStar, StarProduct,
};
