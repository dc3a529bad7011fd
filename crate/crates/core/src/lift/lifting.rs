use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::koszul::{delta, CoboundarySolver, Cochain, SolveOutcome, Unsolvable};
use crate::polyring::{HSeries, Poly};
use crate::weyl::{is_involutive, star_commutator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftingCheck {
    Holds,
    /// `[F_i, F_j]` has a nonzero coefficient at `hbar^order`.
    Fails {
        i: usize,
        j: usize,
        order: usize,
        coefficient: Poly,
    },
}

impl LiftingCheck {
    pub fn holds(&self) -> bool {
        matches!(self, LiftingCheck::Holds)
    }
}

fn series_arity(fs: &[HSeries]) -> Result<usize> {
    let n = fs.first().ok_or(Error::EmptySystem)?.n();
    if let Some(bad) = fs.iter().find(|f| f.n() != n) {
        return Err(Error::MismatchedArity {
            left: n,
            right: bad.n(),
        });
    }
    Ok(n)
}

fn padded(fs: &[HSeries], truncation: usize) -> Vec<HSeries> {
    fs.iter().map(|f| f.with_truncation(truncation)).collect()
}

/// First `(i, j, k)` with `k <= max_order` and a nonzero `hbar^k` coefficient in `[F_i, F_j]`.
fn first_nonzero_commutator(fs: &[HSeries], max_order: usize) -> Result<LiftingCheck> {
    let fs = padded(fs, max_order);
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let c = star_commutator(&fs[i], &fs[j])?;
            if let Some(order) = c.order() {
                return Ok(LiftingCheck::Fails {
                    i,
                    j,
                    order,
                    coefficient: c.coeff(order),
                });
            }
        }
    }
    Ok(LiftingCheck::Holds)
}

/// Whether `fs` is an `l`-lifting: pairwise commutators vanish modulo `hbar^(l+2)`.
/// Coefficients above `hbar^l` cannot affect the answer and are ignored.
pub fn check_lifting(fs: &[HSeries], level: usize) -> Result<LiftingCheck> {
    series_arity(fs)?;
    if let Some(short) = fs.iter().find(|f| f.truncation() < level) {
        return Err(Error::InsufficientTruncation {
            truncation: short.truncation(),
            level,
        });
    }
    let trimmed: Vec<HSeries> = fs.iter().map(|f| f.truncate(level)).collect();
    first_nonzero_commutator(&trimmed, level + 1)
}

/// The anomaly 2-cocycle of a lift `g` of an `l`-lifting.
pub fn anomaly(g: &[HSeries], level: usize) -> Result<Cochain> {
    let n = series_arity(g)?;
    let g = padded(
        &g.iter().map(|s| s.truncate(level + 1)).collect::<Vec<_>>(),
        level + 2,
    );
    let width = g.len();
    let mut chi = Cochain::zero(n, width, 2);
    for i in 0..width {
        for j in i + 1..width {
            let c = star_commutator(&g[i], &g[j])?;
            if let Some(order) = c.order().filter(|&k| k <= level + 1) {
                return Err(Error::NotALift { level, i, j, order });
            }
            chi.set(vec![i, j], c.coeff(level + 2))?;
        }
    }
    let symbols: Vec<Poly> = g.iter().map(|s| s.symbol().clone()).collect();
    let d = delta(&chi, &symbols)?;
    if !d.is_zero() {
        return Err(Error::Internal(format!(
            "anomaly {chi} is not a cocycle: delta = {d}"
        )));
    }
    Ok(chi)
}

/// A verified `l`-lifting, stored at truncation `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    level: usize,
    series: Vec<HSeries>,
}

impl Lifting {
    pub fn new(series: Vec<HSeries>, level: usize) -> Result<Self> {
        match check_lifting(&series, level)? {
            LiftingCheck::Holds => Ok(Lifting {
                level,
                series: series.iter().map(|s| s.truncate(level)).collect(),
            }),
            LiftingCheck::Fails { i, j, order, .. } => Err(Error::NotALift { level, i, j, order }),
        }
    }

    /// The 0-lifting `F = f` of an involutive system.
    pub fn trivial(fs: &[Poly]) -> Result<Self> {
        if let Some(w) = is_involutive(fs)?.witness() {
            return Err(w);
        }
        Ok(Lifting {
            level: 0,
            series: fs
                .iter()
                .map(|f| HSeries::from_poly(f.clone(), 0))
                .collect(),
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn series(&self) -> &[HSeries] {
        &self.series
    }

    pub fn into_series(self) -> Vec<HSeries> {
        self.series
    }

    pub fn base(&self) -> Vec<Poly> {
        self.series.iter().map(|s| s.symbol().clone()).collect()
    }
}

/// One nontrivial step of the extension: `F <- G - hbar^(level+1) correction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionStep {
    pub level: usize,
    pub anomaly: Cochain,
    pub correction: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructionKind {
    /// Nothing found up to the bound; a larger bound may still succeed.
    NoSolutionWithinBound { degree_bound: u32 },
    /// Homogeneous system whose whole graded slice was searched.
    NonzeroGradedClass {
        internal_degree: i64,
        unknowns: usize,
        equations: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    /// Level of the lifting that failed to extend.
    pub level: usize,
    pub anomaly: Cochain,
    pub degree_bound: u32,
    pub kind: ObstructionKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    Lifted {
        lifting: Lifting,
        correction: Option<CorrectionStep>,
    },
    Obstructed(Obstruction),
}

/// Degree bounds for the correction search: per-order overrides, then a
/// uniform bound, then `deg(chi) + 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreePolicy {
    pub uniform: Option<u32>,
    pub per_order: BTreeMap<usize, u32>,
}

impl DegreePolicy {
    pub fn uniform(bound: u32) -> Self {
        DegreePolicy {
            uniform: Some(bound),
            per_order: BTreeMap::new(),
        }
    }

    pub fn bound_for(&self, level: usize, chi: &Cochain) -> u32 {
        self.per_order
            .get(&level)
            .copied()
            .or(self.uniform)
            .unwrap_or_else(|| (chi.poly_degree().max(0) + 2) as u32)
    }
}

/// Extends the lift `g` of an `l`-lifting to an `(l+1)`-lifting, or reports why it cannot.
pub fn extend_from_lift(
    g: &[HSeries],
    level: usize,
    policy: &DegreePolicy,
    solver: &dyn CoboundarySolver,
) -> Result<Extension> {
    let g = padded(
        &g.iter().map(|s| s.truncate(level + 1)).collect::<Vec<_>>(),
        level + 1,
    );
    let chi = anomaly(&g, level)?;
    if chi.is_zero() {
        return Ok(Extension::Lifted {
            lifting: Lifting {
                level: level + 1,
                series: g,
            },
            correction: None,
        });
    }
    let symbols: Vec<Poly> = g.iter().map(|s| s.symbol().clone()).collect();
    let bound = policy.bound_for(level, &chi);
    let m = match solver.solve(&chi.neg(), &symbols, Some(bound))? {
        SolveOutcome::Solved(m) => m,
        SolveOutcome::NoSolution(why) => {
            let kind = match why {
                Unsolvable::WithinBound { degree_bound } => {
                    ObstructionKind::NoSolutionWithinBound { degree_bound }
                }
                Unsolvable::GradedSlice {
                    internal_degree,
                    unknowns,
                    equations,
                } => ObstructionKind::NonzeroGradedClass {
                    internal_degree,
                    unknowns,
                    equations,
                },
            };
            return Ok(Extension::Obstructed(Obstruction {
                level,
                anomaly: chi,
                degree_bound: bound,
                kind,
            }));
        }
    };
    let correction: Vec<Poly> = (0..g.len()).map(|i| m.component(i)).collect();
    let lifted: Vec<HSeries> = g
        .iter()
        .zip(&correction)
        .map(|(s, mi)| {
            let mut s = s.clone();
            s.set_coeff(level + 1, &s.coeff(level + 1) - mi);
            s
        })
        .collect();
    if let LiftingCheck::Fails { i, j, order, .. } = check_lifting(&lifted, level + 1)? {
        return Err(Error::Internal(format!(
            "correction at level {level} leaves [F{},F{}] nonzero at hbar^{order}",
            i + 1,
            j + 1
        )));
    }
    Ok(Extension::Lifted {
        lifting: Lifting {
            level: level + 1,
            series: lifted,
        },
        correction: Some(CorrectionStep {
            level,
            anomaly: chi,
            correction,
        }),
    })
}

/// Extends a lifting using zero as the provisional `hbar^(l+1)` coefficients.
pub fn extend_lifting(
    f: &Lifting,
    policy: &DegreePolicy,
    solver: &dyn CoboundarySolver,
) -> Result<Extension> {
    extend_from_lift(&f.series, f.level, policy, solver)
}
