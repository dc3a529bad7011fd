use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::polyring::Poly;
use crate::weyl::poisson_bracket;

/// Strictly increasing zero-based generator indices naming `e_{i1} ^ .. ^ e_{ip}`.
pub type Tuple = Vec<usize>;

/// A degree-`p` element of `C_f^p = wedge^p B^k`, where `k` is the number of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    n: usize,
    width: usize,
    degree: usize,
    entries: BTreeMap<Tuple, Poly>,
}

impl Cochain {
    /// Zero cochain over polynomials in `n` variable pairs with `width` generators.
    pub fn zero(n: usize, width: usize, degree: usize) -> Self {
        Cochain {
            n,
            width,
            degree,
            entries: BTreeMap::new(),
        }
    }

    /// Degree-0 cochain.
    pub fn scalar(m: Poly, width: usize) -> Self {
        let mut c = Cochain::zero(m.n(), width, 0);
        c.insert(Vec::new(), m);
        c
    }

    /// Degree-1 cochain `(m_1, .., m_k)`.
    pub fn from_components(ms: Vec<Poly>) -> Result<Self> {
        let n = ms.first().ok_or(Error::EmptySystem)?.n();
        let mut c = Cochain::zero(n, ms.len(), 1);
        for (i, m) in ms.into_iter().enumerate() {
            c.set(vec![i], m)?;
        }
        Ok(c)
    }

    /// Builds a cochain from `(tuple, entry)` pairs; tuples must be strictly increasing.
    pub fn from_entries(
        n: usize,
        width: usize,
        degree: usize,
        it: impl IntoIterator<Item = (Tuple, Poly)>,
    ) -> Result<Self> {
        let mut c = Cochain::zero(n, width, degree);
        for (t, m) in it {
            let prev = c.get(&t);
            c.set(t, &prev + &m)?;
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Tuple, &Poly)> {
        self.entries.iter()
    }

    pub fn get(&self, t: &[usize]) -> Poly {
        self.entries
            .get(t)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n))
    }

    /// Entry of a degree-1 cochain at generator `i`.
    pub fn component(&self, i: usize) -> Poly {
        self.get(&[i])
    }

    /// Maximum total degree over entries, `-1` when zero.
    pub fn poly_degree(&self) -> i64 {
        self.entries.values().map(Poly::degree).max().unwrap_or(-1)
    }

    pub fn set(&mut self, t: Tuple, m: Poly) -> Result<()> {
        if t.len() != self.degree {
            return Err(Error::InvalidDegree {
                degree: t.len(),
                reason: "tuple length must equal the cochain degree",
            });
        }
        if t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Internal(format!(
                "cochain index {t:?} is not strictly increasing"
            )));
        }
        if let Some(&bad) = t.iter().find(|&&i| i >= self.width) {
            return Err(Error::InvalidIndex {
                index: bad,
                n: self.width,
            });
        }
        if m.n() != self.n {
            return Err(Error::MismatchedArity {
                left: self.n,
                right: m.n(),
            });
        }
        if m.is_zero() {
            self.entries.remove(&t);
        } else {
            self.entries.insert(t, m);
        }
        Ok(())
    }

    fn insert(&mut self, t: Tuple, m: Poly) {
        if !m.is_zero() {
            self.entries.insert(t, m);
        }
    }

    fn accumulate(&mut self, t: Tuple, m: &Poly) {
        if m.is_zero() {
            return;
        }
        let sum = &self.get(&t) + m;
        if sum.is_zero() {
            self.entries.remove(&t);
        } else {
            self.entries.insert(t, sum);
        }
    }

    fn compatible(&self, other: &Cochain) -> Result<()> {
        if self.n != other.n {
            return Err(Error::MismatchedArity {
                left: self.n,
                right: other.n,
            });
        }
        if self.width != other.width || self.degree != other.degree {
            return Err(Error::InvalidDegree {
                degree: other.degree,
                reason: "cochains must share degree and width",
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (t, m) in &other.entries {
            out.accumulate(t.clone(), m);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cochain {
        self.map(|m| -m)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Cochain {
        let mut out = Cochain::zero(self.n, self.width, self.degree);
        for (t, m) in &self.entries {
            out.insert(t.clone(), f(m));
        }
        out
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (k, (t, m)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({m})")?;
            if !t.is_empty() {
                let basis: Vec<String> = t.iter().map(|i| format!("e{}", i + 1)).collect();
                write!(f, "*{}", basis.join("^"))?;
            }
        }
        Ok(())
    }
}

/// `t ^ e_j` in sorted position, with the sign of the reordering; `None` when `j` is in `t`.
pub(crate) fn wedge_index(t: &[usize], j: usize) -> Option<(Tuple, bool)> {
    let pos = match t.binary_search(&j) {
        Ok(_) => return None,
        Err(pos) => pos,
    };
    let mut out = t.to_vec();
    out.insert(pos, j);
    // e_j moves left past the t.len() - pos indices larger than it
    Some((out, (t.len() - pos) % 2 == 1))
}

fn check_generators(c: &Cochain, fs: &[Poly]) -> Result<()> {
    if fs.len() != c.width {
        return Err(Error::InvalidDegree {
            degree: fs.len(),
            reason: "number of generators must equal the cochain width",
        });
    }
    if let Some(bad) = fs.iter().find(|f| f.n() != c.n) {
        return Err(Error::MismatchedArity {
            left: c.n,
            right: bad.n(),
        });
    }
    Ok(())
}

/// The differential of `C_f`. A cochain of top degree maps to the (empty)
/// cochain one degree higher.
pub fn delta(c: &Cochain, fs: &[Poly]) -> Result<Cochain> {
    check_generators(c, fs)?;
    let mut out = Cochain::zero(c.n, c.width, c.degree + 1);
    for (t, m) in &c.entries {
        for (j, f) in fs.iter().enumerate() {
            let Some((tj, negate)) = wedge_index(t, j) else {
                continue;
            };
            let b = poisson_bracket(f, m)?;
            out.accumulate(tj, &if negate { -b } else { b });
        }
    }
    Ok(out)
}

/// `t_i [c] = [f_i c]`, entrywise multiplication by `f_i` (zero-based `i`).
pub fn module_action(i: usize, c: &Cochain, fs: &[Poly]) -> Result<Cochain> {
    check_generators(c, fs)?;
    let f = fs.get(i).ok_or(Error::InvalidIndex {
        index: i,
        n: fs.len(),
    })?;
    Ok(c.map(|m| f * m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_index(&[0], 1), Some((vec![0, 1], false)));
        assert_eq!(wedge_index(&[1], 0), Some((vec![0, 1], true)));
        assert_eq!(wedge_index(&[0, 2], 1), Some((vec![0, 1, 2], true)));
        assert_eq!(wedge_index(&[1, 2], 0), Some((vec![0, 1, 2], false)));
        assert_eq!(wedge_index(&[1, 2], 2), None);
    }

    #[test]
    fn degree_zero_examples() {
        let fs = [poly("p1*q1", 1)];
        let c = Cochain::scalar(poly("q1", 1), 1);
        let d = delta(&c, &fs).unwrap();
        assert_eq!(d, Cochain::from_components(vec![poly("q1", 1)]).unwrap());
        let c = Cochain::scalar(poly("5/3", 1), 1);
        assert!(delta(&c, &fs).unwrap().is_zero());
    }

    #[test]
    fn constant_one_cochain_is_a_cocycle() {
        let fs = [poly("p1*q1", 2), poly("p2*q2", 2)];
        let c = Cochain::from_components(vec![Poly::one(2), Poly::zero(2)]).unwrap();
        let d = delta(&c, &fs).unwrap();
        assert_eq!(d.degree(), 2);
        assert!(d.is_zero());
    }

    #[test]
    fn one_cochain_formula() {
        // (delta m)_{12} = {f2, m1} - {f1, m2}
        let fs = [poly("p1*q1", 2), poly("p2*q2", 2)];
        let m = Cochain::from_components(vec![poly("q2", 2), poly("p1", 2)]).unwrap();
        let d = delta(&m, &fs).unwrap();
        let expect = &poisson_bracket(&fs[1], &poly("q2", 2)).unwrap()
            - &poisson_bracket(&fs[0], &poly("p1", 2)).unwrap();
        assert_eq!(d.get(&[0, 1]), expect);
        assert_eq!(expect, poly("q2 + p1", 2));
    }

    #[test]
    fn top_degree_maps_to_zero() {
        let fs = [poly("p1*q1", 1)];
        let c = Cochain::from_components(vec![poly("q1^2", 1)]).unwrap();
        let d = delta(&c, &fs).unwrap();
        assert_eq!(d.degree(), 2);
        assert!(d.is_zero());
    }

    #[test]
    fn module_action_examples() {
        let fs = [poly("p1*q1", 2), poly("p2*q2", 2)];
        let c = Cochain::from_components(vec![Poly::one(2), Poly::zero(2)]).unwrap();
        assert_eq!(
            module_action(0, &c, &fs).unwrap(),
            Cochain::from_components(vec![poly("p1*q1", 2), Poly::zero(2)]).unwrap()
        );
        let fs1 = [poly("p1*q1", 1)];
        let c = Cochain::from_components(vec![poly("q1", 1)]).unwrap();
        assert_eq!(
            module_action(0, &c, &fs1).unwrap().component(0),
            poly("p1*q1^2", 1)
        );
        assert!(module_action(2, &c, &fs1).is_err());
    }

    #[test]
    fn set_validates() {
        let mut c = Cochain::zero(1, 2, 2);
        assert!(c.set(vec![1, 0], Poly::one(1)).is_err());
        assert!(c.set(vec![0], Poly::one(1)).is_err());
        assert!(c.set(vec![0, 2], Poly::one(1)).is_err());
        c.set(vec![0, 1], Poly::one(1)).unwrap();
        assert_eq!(c.to_string(), "(1)*e1^e2");
    }
}
