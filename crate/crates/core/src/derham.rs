//! Polynomial differential forms on `C^2n` and the comparison map to `C_f`.
//!
//! Generators are indexed by exponent slot: `dq_1..dq_n` then `dp_1..dp_n`.
//! The comparison map sends a `k`-form `a` to the cochain whose entry at
//! `i_1 < .. < i_k` is `i_{v_{i_1}} ( .. i_{v_{i_k}} a)`, the innermost
//! contraction taken with the last index. With this order
//! `phi(d a) = delta(phi(a))` holds exactly under the stored wedge convention.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::koszul::Cochain;
use crate::polyring::{Poly, Var};
use crate::weyl::{hamiltonian_field, system_arity, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    n: usize,
    degree: usize,
    entries: BTreeMap<Vec<usize>, Poly>,
}

/// Sorts `slots` in place and returns the permutation sign, or `None` on a repeat.
fn sort_sign(slots: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..slots.len() {
        let mut j = i;
        while j > 0 && slots[j - 1] > slots[j] {
            slots.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if slots.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

impl KForm {
    pub fn zero(n: usize, degree: usize) -> Self {
        KForm {
            n,
            degree,
            entries: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(f: Poly) -> Self {
        let mut a = KForm::zero(f.n(), 0);
        a.accumulate(Vec::new(), &f);
        a
    }

    /// `coeff * dv_1 ^ .. ^ dv_k`, with the generators in any order.
    pub fn monomial(coeff: Poly, vars: &[Var]) -> Result<Self> {
        let n = coeff.n();
        let mut slots = Vec::with_capacity(vars.len());
        for v in vars {
            let (Var::Q(i) | Var::P(i)) = *v;
            if i >= n {
                return Err(Error::InvalidVariable { index: i, n });
            }
            slots.push(v.slot(n));
        }
        let mut a = KForm::zero(n, vars.len());
        if let Some(odd) = sort_sign(&mut slots) {
            a.accumulate(slots, &if odd { -coeff } else { coeff });
        }
        Ok(a)
    }

    /// `df`.
    pub fn exact(f: &Poly) -> Self {
        exterior_derivative(&KForm::function(f.clone()))
    }

    /// `omega = sum_i dq_i ^ dp_i`.
    pub fn symplectic(n: usize) -> Self {
        let mut a = KForm::zero(n, 2);
        for i in 0..n {
            a.accumulate(vec![Var::Q(i).slot(n), Var::P(i).slot(n)], &Poly::one(n));
        }
        a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.entries.iter()
    }

    /// Coefficient of the increasing slot tuple `slots`.
    pub fn get(&self, slots: &[usize]) -> Poly {
        self.entries
            .get(slots)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n))
    }

    fn accumulate(&mut self, slots: Vec<usize>, m: &Poly) {
        if m.is_zero() {
            return;
        }
        let sum = &self.get(&slots) + m;
        if sum.is_zero() {
            self.entries.remove(&slots);
        } else {
            self.entries.insert(slots, sum);
        }
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        if self.n != other.n {
            return Err(Error::MismatchedArity {
                left: self.n,
                right: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(Error::InvalidDegree {
                degree: other.degree,
                reason: "forms must share degree",
            });
        }
        let mut out = self.clone();
        for (s, m) in &other.entries {
            out.accumulate(s.clone(), m);
        }
        Ok(out)
    }

    pub fn scale_by(&self, f: &Poly) -> KForm {
        let mut out = KForm::zero(self.n, self.degree);
        for (s, m) in &self.entries {
            out.accumulate(s.clone(), &(f * m));
        }
        out
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (k, (slots, m)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({m})")?;
            if !slots.is_empty() {
                let gens: Vec<String> = slots
                    .iter()
                    .map(|&s| format!("d{}", Var::from_slot(s, self.n)))
                    .collect();
                write!(f, "*{}", gens.join("^"))?;
            }
        }
        Ok(())
    }
}

pub fn exterior_derivative(a: &KForm) -> KForm {
    let mut out = KForm::zero(a.n, a.degree + 1);
    for (slots, m) in &a.entries {
        for k in 0..2 * a.n {
            let dm = m.diff_slot(k);
            if dm.is_zero() {
                continue;
            }
            // dx_k ^ dx_slots
            let mut s = Vec::with_capacity(slots.len() + 1);
            s.push(k);
            s.extend_from_slice(slots);
            if let Some(odd) = sort_sign(&mut s) {
                out.accumulate(s, &if odd { -dm } else { dm });
            }
        }
    }
    out
}

pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    if a.n != b.n {
        return Err(Error::MismatchedArity {
            left: a.n,
            right: b.n,
        });
    }
    let mut out = KForm::zero(a.n, a.degree + b.degree);
    for (sa, ma) in &a.entries {
        for (sb, mb) in &b.entries {
            let mut s: Vec<usize> = sa.iter().chain(sb).copied().collect();
            if let Some(odd) = sort_sign(&mut s) {
                let c = ma * mb;
                out.accumulate(s, &if odd { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// Interior product `i_v a`, contracting into the first slot.
pub fn contract_field(v: &VectorField, a: &KForm) -> Result<KForm> {
    if a.degree == 0 {
        return Err(Error::InvalidDegree {
            degree: 0,
            reason: "cannot contract a function",
        });
    }
    if v.n() != a.n {
        return Err(Error::MismatchedArity {
            left: a.n,
            right: v.n(),
        });
    }
    let mut out = KForm::zero(a.n, a.degree - 1);
    for (slots, m) in &a.entries {
        for (r, &s) in slots.iter().enumerate() {
            let vs = &v.components()[s];
            if vs.is_zero() {
                continue;
            }
            let mut rest = slots.clone();
            rest.remove(r);
            let c = vs * m;
            out.accumulate(rest, &if r % 2 == 1 { -c } else { c });
        }
    }
    Ok(out)
}

/// The chain map from forms of degree `k <= #f` to `C_f^k`.
pub fn comparison_phi(a: &KForm, fs: &[Poly]) -> Result<Cochain> {
    let n = system_arity(fs)?;
    if n != a.n {
        return Err(Error::MismatchedArity {
            left: n,
            right: a.n,
        });
    }
    let width = fs.len();
    if a.degree > width {
        return Err(Error::InvalidDegree {
            degree: a.degree,
            reason: "form degree exceeds the number of generators",
        });
    }
    let fields: Vec<VectorField> = fs.iter().map(hamiltonian_field).collect();
    let mut out = Cochain::zero(n, width, a.degree);
    for t in crate::koszul::tuples_of(width, a.degree) {
        let mut b = a.clone();
        for &i in t.iter().rev() {
            b = contract_field(&fields[i], &b)?;
        }
        out.set(t, b.get(&[]))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    fn form(c: &str, n: usize, vars: &[Var]) -> KForm {
        KForm::monomial(poly(c, n), vars).unwrap()
    }

    const Q: Var = Var::Q(0);
    const P: Var = Var::P(0);

    #[test]
    fn derivative_examples() {
        assert_eq!(
            exterior_derivative(&form("p1", 1, &[Q])),
            form("1", 1, &[P, Q])
        );
        assert_eq!(
            exterior_derivative(&KForm::function(poly("q1", 1))),
            form("1", 1, &[Q])
        );
        assert_eq!(
            exterior_derivative(&form("p1*q1", 1, &[Q])),
            form("q1", 1, &[P, Q])
        );
        let a = form("q1^2*p1", 1, &[]);
        assert!(exterior_derivative(&exterior_derivative(&a)).is_zero());
    }

    #[test]
    fn wedge_examples() {
        let dq = form("1", 1, &[Q]);
        assert!(wedge(&dq, &dq).unwrap().is_zero());
        assert_eq!(
            wedge(&dq, &form("1", 1, &[P])).unwrap(),
            form("-1", 1, &[P, Q])
        );
        assert_eq!(
            wedge(&form("p1", 1, &[Q]), &form("q1", 1, &[P])).unwrap(),
            form("p1*q1", 1, &[Q, P])
        );
        assert_eq!(form("1", 1, &[Q, P]).to_string(), "(1)*dq1^dp1");
    }

    #[test]
    fn contraction_examples() {
        let dq = VectorField::coordinate(1, Q);
        assert_eq!(
            contract_field(&dq, &form("1", 1, &[Q])).unwrap(),
            KForm::function(Poly::one(1))
        );
        let v = VectorField::new(vec![poly("q1", 1), poly("-p1", 1)]).unwrap();
        assert_eq!(
            contract_field(&v, &form("p1", 1, &[Q])).unwrap(),
            KForm::function(poly("p1*q1", 1))
        );
        assert!(contract_field(&v, &KForm::function(Poly::one(1))).is_err());
    }

    #[test]
    fn hamiltonian_contraction_recovers_dh() {
        let h = poly("q1^2*p2 + p1*q2 - 3*p2^3", 2);
        let v = hamiltonian_field(&h);
        assert_eq!(
            contract_field(&v, &KForm::symplectic(2)).unwrap(),
            KForm::exact(&h)
        );
    }

    #[test]
    fn comparison_examples() {
        let fs = [poly("p1*q1", 1)];
        assert_eq!(
            comparison_phi(&form("p1", 1, &[Q]), &fs).unwrap(),
            Cochain::from_components(vec![poly("p1*q1", 1)]).unwrap()
        );
        let fs = [poly("p1*q1", 2), poly("p2*q2", 2)];
        assert_eq!(
            comparison_phi(&form("p1", 2, &[Var::Q(0)]), &fs).unwrap(),
            Cochain::from_components(vec![poly("p1*q1", 2), Poly::zero(2)]).unwrap()
        );
        assert_eq!(
            comparison_phi(&form("p2", 2, &[Var::Q(1)]), &fs).unwrap(),
            Cochain::from_components(vec![Poly::zero(2), poly("p2*q2", 2)]).unwrap()
        );
        assert!(comparison_phi(&KForm::exact(&fs[0]), &fs)
            .unwrap()
            .is_zero());
        assert!(comparison_phi(&form("1", 2, &[Var::Q(0), Var::Q(1), Var::P(0)]), &fs).is_err());
    }
}
