use crate::error::{Error, Result};
use crate::polyring::{Monomial, Poly};
use crate::weyl::is_involutive;

use super::{Cochain, GradedSystem, Tuple};

/// Per-generator degree shift `deg f_j - 2` of the differential; requires
/// homogeneous generators.
pub fn internal_degree_shifts(fs: &[Poly]) -> Result<Vec<i64>> {
    fs.iter()
        .map(|f| match f.homogeneous_degree() {
            Some(_) if f.is_zero() => Ok(0),
            Some(d) => Ok(i64::from(d) - 2),
            None => Err(Error::NotHomogeneous { poly: f.clone() }),
        })
        .collect()
}

/// Strictly increasing `p`-subsets of `0..width`, in lexicographic order.
pub fn tuples(width: usize, p: usize) -> Vec<Tuple> {
    fn rec(start: usize, width: usize, left: usize, cur: &mut Tuple, out: &mut Vec<Tuple>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..width {
            cur.push(i);
            rec(i + 1, width, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, width, p, &mut Vec::new(), &mut out);
    out
}

/// Basis of the internal-degree-`d` slice of `C^p`: the entry at `J` has
/// polynomial degree `d + sum_{j in J} shift_j`.
pub fn slice_basis(shifts: &[i64], n: usize, p: usize, d: i64) -> Vec<(Tuple, Monomial)> {
    let mut out = Vec::new();
    for t in tuples(shifts.len(), p) {
        let e = d + t.iter().map(|&j| shifts[j]).sum::<i64>();
        if e < 0 {
            continue;
        }
        for m in Monomial::of_degree(n, e as u32) {
            out.push((t.clone(), m));
        }
    }
    out
}

/// Dimension of `H^p(f)` in internal degree `d`, for homogeneous involutive generators.
pub fn graded_cohomology_dim(fs: &[Poly], p: usize, d: i64) -> Result<usize> {
    let n = crate::weyl::system_arity(fs)?;
    if let Some(w) = is_involutive(fs)?.witness() {
        return Err(w);
    }
    let shifts = internal_degree_shifts(fs)?;
    let width = fs.len();
    if p > width {
        return Err(Error::InvalidDegree {
            degree: p,
            reason: "degree exceeds the number of generators",
        });
    }
    let rank_of = |deg: usize| {
        let basis = slice_basis(&shifts, n, deg, d);
        let sys = GradedSystem::assemble(fs, basis, &Cochain::zero(n, width, deg + 1));
        sys.rank()
    };
    let dim = slice_basis(&shifts, n, p, d).len();
    let out_rank = if p < width { rank_of(p) } else { 0 };
    let in_rank = if p > 0 { rank_of(p - 1) } else { 0 };
    Ok(dim - out_rank - in_rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn hyperbolic_examples() {
        let fs = [poly("p1*q1", 1)];
        assert_eq!(graded_cohomology_dim(&fs, 1, 2).unwrap(), 1);
        assert_eq!(graded_cohomology_dim(&fs, 0, 0).unwrap(), 1);
        assert_eq!(graded_cohomology_dim(&fs, 0, 2).unwrap(), 1);
        assert_eq!(graded_cohomology_dim(&fs, 0, 1).unwrap(), 0);
        assert_eq!(graded_cohomology_dim(&fs, 1, 3).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            graded_cohomology_dim(&[poly("p1*q1 + q1", 1)], 0, 0),
            Err(Error::NotHomogeneous { .. })
        ));
        assert!(matches!(
            graded_cohomology_dim(&[poly("p1", 1), poly("q1", 1)], 0, 0),
            Err(Error::NotInvolutive { .. })
        ));
        assert!(graded_cohomology_dim(&[poly("p1*q1", 1)], 2, 0).is_err());
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(tuples(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(tuples(2, 0), vec![Vec::<usize>::new()]);
        assert!(tuples(1, 2).is_empty());
    }
}
