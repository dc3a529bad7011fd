use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// A phase-space coordinate. Indices are zero-based: `Q(0)` is `q1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Q(usize),
    P(usize),
}

impl Var {
    /// Position of the variable in an exponent vector of a system with `n` pairs.
    pub fn slot(self, n: usize) -> usize {
        match self {
            Var::Q(i) => i,
            Var::P(i) => n + i,
        }
    }

    pub fn from_slot(slot: usize, n: usize) -> Var {
        if slot < n {
            Var::Q(slot)
        } else {
            Var::P(slot - n)
        }
    }

    fn pair_index(self) -> usize {
        match self {
            Var::Q(i) | Var::P(i) => i,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Q(i) => write!(f, "q{}", i + 1),
            Var::P(i) => write!(f, "p{}", i + 1),
        }
    }
}

/// Exponent vector ordered `q1..qn, p1..pn`.
///
/// Ordering is graded lexicographic with `q1 < .. < qn < p1 < .. < pn`:
/// total degree first, then exponents compared from `pn` down to `q1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; 2 * n])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        assert!(
            exps.len().is_multiple_of(2),
            "exponent vector must have even length"
        );
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Total degree in the momenta.
    pub fn p_degree(&self) -> u32 {
        self.0[self.n()..].iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials of total degree `d` in `2n` variables, in canonical order.
    pub fn of_degree(n: usize, d: u32) -> Vec<Monomial> {
        fn rec(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if slot + 1 == cur.len() {
                cur[slot] = left;
                out.push(Monomial(cur.clone()));
                cur[slot] = 0;
                return;
            }
            for e in 0..=left {
                cur[slot] = e;
                rec(slot + 1, left - e, cur, out);
            }
            cur[slot] = 0;
        }
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        rec(0, d, &mut vec![0; 2 * n], &mut out);
        out.sort();
        out
    }

    /// All monomials of total degree at most `d`, in canonical order.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Monomial::of_degree(n, k)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `q1..qn, p1..pn` with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Poly::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Poly::term(n, Monomial::one(n), c)
    }

    pub fn var(n: usize, v: Var) -> Self {
        assert!(v.pair_index() < n, "variable {v} out of range for n = {n}");
        let mut e = vec![0; 2 * n];
        e[v.slot(n)] = 1;
        Poly::term(n, Monomial(e), Rational::one())
    }

    pub fn q(n: usize, i: usize) -> Self {
        Poly::var(n, Var::Q(i))
    }

    pub fn p(n: usize, i: usize) -> Self {
        Poly::var(n, Var::P(i))
    }

    pub fn term(n: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), 2 * n, "monomial arity does not match n");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { n, terms }
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, merging repeats.
    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = Poly::zero(n);
        for (m, c) in it {
            assert_eq!(m.0.len(), 2 * n, "monomial arity does not match n");
            out.add_term(m, c);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.n))
    }

    /// Total degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .next_back()
            .map_or(-1, |m| i64::from(m.degree()))
    }

    pub fn p_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::p_degree).max().unwrap_or(0)
    }

    /// Maximum exponent of the variable at `slot`.
    pub fn degree_in(&self, slot: usize) -> u32 {
        self.terms.keys().map(|m| m.0[slot]).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has total degree `d`; zero is homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => Some(0),
            Some(d) => degs.all(|e| e == d).then_some(d),
        }
    }

    /// The degree-`d` homogeneous component.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// True when only variables for which `allowed` holds occur.
    pub fn only_uses(&self, allowed: impl Fn(Var) -> bool) -> bool {
        self.terms.keys().all(|m| {
            m.0.iter()
                .enumerate()
                .all(|(s, &e)| e == 0 || allowed(Var::from_slot(s, self.n)))
        })
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_arity(&self, other: &Poly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::MismatchedArity {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_arity(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_arity(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_arity(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Result<Poly> {
        if v.pair_index() >= self.n {
            return Err(Error::InvalidVariable {
                index: v.pair_index(),
                n: self.n,
            });
        }
        Ok(self.diff_slot(v.slot(self.n)))
    }

    /// Partial derivative along the exponent slot `slot`; panics when out of range.
    pub fn diff_slot(&self, slot: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.0[slot];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[slot] -= 1;
            out.terms.insert(dm, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Substitutes `images[slot]` for each variable.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), 2 * self.n);
        let target_n = images.first().map_or(self.n, Poly::n);
        let mut out = Poly::zero(target_n);
        // powers cached per slot
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.n)]).collect();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target_n, c.clone());
            for (slot, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[slot];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &images[slot];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            out = &out + &t;
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n, rhs.n, "mismatched polynomial arity");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n, rhs.n, "mismatched polynomial arity");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n, rhs.n, "mismatched polynomial arity");
        let mut out = Poly::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, n: usize) -> fmt::Result {
    let mut first = true;
    for (slot, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "{}", Var::from_slot(slot, n))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text: terms in descending canonical order, explicit `*` and `^`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, m, self.n)?;
            }
        }
        Ok(())
    }
}
