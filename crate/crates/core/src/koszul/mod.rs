//! The complex `C_f`: cochains `wedge^p B^k`, the differential
//! `delta(m v) = sum_j {f_j, m} v ^ e_j`, exact linear algebra over the
//! rationals, coboundary solvers and graded cohomology dimensions.

mod cochain;
mod cohomology;
pub mod linalg;
mod solver;

pub use cochain::{delta, module_action, Cochain, Tuple};
pub use cohomology::{
    graded_cohomology_dim, internal_degree_shifts, slice_basis, tuples as tuples_of,
};
pub use linalg::GradedSystem;
pub use solver::{
    default_degree_bound, solve_coboundary, AutoSolver, BoundedSolver, CoboundarySolver,
    GradedSolver, SolveOutcome, SolverRegistry, Unsolvable,
};
