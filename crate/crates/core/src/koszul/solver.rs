//! Strategies for solving `delta m = chi`, selectable by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyring::{Monomial, Poly};

use super::cohomology::{internal_degree_shifts, slice_basis, tuples};
use super::{delta, Cochain, GradedSystem, Tuple};

/// Why no primitive was returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unsolvable {
    /// No primitive with entries of degree at most `degree_bound`; larger bounds may succeed.
    WithinBound { degree_bound: u32 },
    /// The slice of internal degree `internal_degree` carries a nonzero class.
    GradedSlice {
        internal_degree: i64,
        unknowns: usize,
        equations: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Cochain),
    NoSolution(Unsolvable),
}

pub trait CoboundarySolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Finds `m` with `delta(m, fs) = chi`. Implementations only see cocycles of
    /// degree at least one; use [`run_solver`] for checked entry.
    fn solve_cocycle(
        &self,
        chi: &Cochain,
        fs: &[Poly],
        degree_bound: Option<u32>,
    ) -> Result<SolveOutcome>;

    /// Checks the input, solves, and re-verifies any primitive by applying `delta`.
    fn solve(&self, chi: &Cochain, fs: &[Poly], degree_bound: Option<u32>) -> Result<SolveOutcome> {
        run_solver(self, chi, fs, degree_bound)
    }
}

/// Validates `chi`, dispatches to `solver`, and checks the answer.
pub fn run_solver<S: CoboundarySolver + ?Sized>(
    solver: &S,
    chi: &Cochain,
    fs: &[Poly],
    degree_bound: Option<u32>,
) -> Result<SolveOutcome> {
    if chi.degree() == 0 {
        return Err(Error::InvalidDegree {
            degree: 0,
            reason: "coboundaries have degree at least one",
        });
    }
    let dchi = delta(chi, fs)?;
    if !dchi.is_zero() {
        return Err(Error::NotACocycle { delta: dchi });
    }
    if chi.is_zero() {
        return Ok(SolveOutcome::Solved(Cochain::zero(
            chi.n(),
            chi.width(),
            chi.degree() - 1,
        )));
    }
    let out = solver.solve_cocycle(chi, fs, degree_bound)?;
    if let SolveOutcome::Solved(m) = &out {
        if delta(m, fs)? != *chi {
            return Err(Error::Internal(format!(
                "solver {} returned a non-primitive for {chi}",
                solver.name()
            )));
        }
    }
    Ok(out)
}

/// `deg(chi) + max(0, 2 - min_j deg f_j) + 2`.
pub fn default_degree_bound(chi: &Cochain, fs: &[Poly]) -> u32 {
    let min_deg = fs.iter().map(Poly::degree).min().unwrap_or(0).max(0);
    let d = chi.poly_degree().max(0) + (2 - min_deg).max(0) + 2;
    d as u32
}

/// Searches all primitives whose entries have total degree at most the bound.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoundedSolver;

impl CoboundarySolver for BoundedSolver {
    fn name(&self) -> &'static str {
        "bounded"
    }

    fn solve_cocycle(
        &self,
        chi: &Cochain,
        fs: &[Poly],
        degree_bound: Option<u32>,
    ) -> Result<SolveOutcome> {
        let bound = degree_bound.unwrap_or_else(|| default_degree_bound(chi, fs));
        // delta raises degree by at most max deg f - 2, which bounds a primitive from below.
        let max_deg = fs.iter().map(Poly::degree).max().unwrap_or(0);
        let lowest = (chi.poly_degree() - max_deg + 2).clamp(0, i64::from(bound)) as u32;
        for d in lowest..=bound {
            let monos = Monomial::up_to_degree(chi.n(), d);
            let unknowns: Vec<(Tuple, Monomial)> = tuples(chi.width(), chi.degree() - 1)
                .into_iter()
                .flat_map(|t| monos.iter().map(move |m| (t.clone(), m.clone())))
                .collect();
            let sys = GradedSystem::assemble(fs, unknowns, chi);
            if let Some(m) = sys.solve(chi.n(), chi.width(), chi.degree() - 1) {
                return Ok(SolveOutcome::Solved(m));
            }
        }
        Ok(SolveOutcome::NoSolution(Unsolvable::WithinBound {
            degree_bound: bound,
        }))
    }
}

/// Slice-by-slice solve for homogeneous generators. Each slice is finite, so
/// a failure is a genuine nonzero class; the degree bound is ignored.
#[derive(Debug, Clone, Copy, Default)]
pub struct GradedSolver;

impl CoboundarySolver for GradedSolver {
    fn name(&self) -> &'static str {
        "graded"
    }

    fn solve_cocycle(
        &self,
        chi: &Cochain,
        fs: &[Poly],
        _degree_bound: Option<u32>,
    ) -> Result<SolveOutcome> {
        let shifts = internal_degree_shifts(fs)?;
        let (n, width, p) = (chi.n(), chi.width(), chi.degree());
        let mut slices: BTreeMap<i64, Cochain> = BTreeMap::new();
        for (t, m) in chi.entries() {
            let offset: i64 = t.iter().map(|&j| shifts[j]).sum();
            for e in 0..=m.degree().max(0) as u32 {
                let part = m.homogeneous_part(e);
                if part.is_zero() {
                    continue;
                }
                let d = i64::from(e) - offset;
                let slice = slices
                    .entry(d)
                    .or_insert_with(|| Cochain::zero(n, width, p));
                slice.set(t.clone(), part)?;
            }
        }
        let mut total = Cochain::zero(n, width, p - 1);
        for (d, target) in slices {
            let sys = GradedSystem::assemble(fs, slice_basis(&shifts, n, p - 1, d), &target);
            match sys.solve(n, width, p - 1) {
                Some(m) => total = total.add(&m)?,
                None => {
                    return Ok(SolveOutcome::NoSolution(Unsolvable::GradedSlice {
                        internal_degree: d,
                        unknowns: sys.unknowns.len(),
                        equations: sys.equations.len(),
                    }))
                }
            }
        }
        Ok(SolveOutcome::Solved(total))
    }
}

/// Graded when every generator is homogeneous, bounded otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct AutoSolver;

impl CoboundarySolver for AutoSolver {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn solve_cocycle(
        &self,
        chi: &Cochain,
        fs: &[Poly],
        degree_bound: Option<u32>,
    ) -> Result<SolveOutcome> {
        if fs.iter().all(|f| f.homogeneous_degree().is_some()) {
            GradedSolver.solve_cocycle(chi, fs, degree_bound)
        } else {
            BoundedSolver.solve_cocycle(chi, fs, degree_bound)
        }
    }
}

/// Name-indexed set of solvers.
#[derive(Clone, Default)]
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Arc<dyn CoboundarySolver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry::default()
    }

    /// `bounded`, `graded` and `auto`.
    pub fn builtin() -> Self {
        let mut r = SolverRegistry::empty();
        r.register(Arc::new(BoundedSolver));
        r.register(Arc::new(GradedSolver));
        r.register(Arc::new(AutoSolver));
        r
    }

    /// Adds a solver, replacing any previous one with the same name.
    pub fn register(&mut self, solver: Arc<dyn CoboundarySolver>) {
        self.solvers.insert(solver.name(), solver);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn CoboundarySolver>> {
        self.solvers
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownSolver(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.solvers.keys().copied()
    }
}

/// Primitive of `chi` with entry degrees at most `degree_bound`, if one exists.
pub fn solve_coboundary(chi: &Cochain, fs: &[Poly], degree_bound: u32) -> Result<Option<Cochain>> {
    Ok(match BoundedSolver.solve(chi, fs, Some(degree_bound))? {
        SolveOutcome::Solved(m) => Some(m),
        SolveOutcome::NoSolution(_) => None,
    })
}
