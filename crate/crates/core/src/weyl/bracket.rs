use crate::error::{Error, Result};
use crate::polyring::{Poly, Var};

use super::VectorField;

pub fn poisson_bracket(f: &Poly, g: &Poly) -> Result<Poly> {
    if f.n() != g.n() {
        return Err(Error::MismatchedArity {
            left: f.n(),
            right: g.n(),
        });
    }
    Ok(bracket(f, g))
}

pub(crate) fn bracket(f: &Poly, g: &Poly) -> Poly {
    let n = f.n();
    let mut out = Poly::zero(n);
    if f.is_zero() || g.is_zero() {
        return out;
    }
    for i in 0..n {
        let (q, p) = (Var::Q(i).slot(n), Var::P(i).slot(n));
        let fp = f.diff_slot(p);
        if !fp.is_zero() {
            out = &out + &(&fp * &g.diff_slot(q));
        }
        let fq = f.diff_slot(q);
        if !fq.is_zero() {
            out = &out - &(&fq * &g.diff_slot(p));
        }
    }
    out
}

/// Outcome of a pairwise involutivity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Involutivity {
    Involutive,
    /// First pair `i < j` (zero-based) with a nonzero bracket.
    Fails {
        i: usize,
        j: usize,
        bracket: Poly,
    },
}

impl Involutivity {
    pub fn holds(&self) -> bool {
        matches!(self, Involutivity::Involutive)
    }

    /// The failing pair as an error, if any.
    pub fn witness(&self) -> Option<Error> {
        match self {
            Involutivity::Involutive => None,
            Involutivity::Fails { i, j, bracket } => Some(Error::NotInvolutive {
                i: *i,
                j: *j,
                bracket: bracket.clone(),
            }),
        }
    }
}

pub fn is_involutive(fs: &[Poly]) -> Result<Involutivity> {
    system_arity(fs)?;
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let b = bracket(&fs[i], &fs[j]);
            if !b.is_zero() {
                return Ok(Involutivity::Fails { i, j, bracket: b });
            }
        }
    }
    Ok(Involutivity::Involutive)
}

/// Nonempty with a shared arity; returns that arity.
pub fn system_arity(fs: &[Poly]) -> Result<usize> {
    let n = fs.first().ok_or(Error::EmptySystem)?.n();
    if let Some(bad) = fs.iter().find(|f| f.n() != n) {
        return Err(Error::MismatchedArity {
            left: n,
            right: bad.n(),
        });
    }
    Ok(n)
}

/// `X_H = sum_i d_{p_i} H d_{q_i} - d_{q_i} H d_{p_i}`, so that `X_H(g) = {H, g}`.
pub fn hamiltonian_field(h: &Poly) -> VectorField {
    let n = h.n();
    let mut comps = Vec::with_capacity(2 * n);
    for i in 0..n {
        comps.push(h.diff_slot(Var::P(i).slot(n)));
    }
    for i in 0..n {
        comps.push(-h.diff_slot(Var::Q(i).slot(n)));
    }
    VectorField::new(comps).expect("components share arity")
}
