//! Sparse fraction-free elimination over the rationals.
//!
//! Rows are scaled to primitive integer vectors and combined as
//! `r <- (a/g) r - (b/g) pivot`, so no rational arithmetic happens until
//! back substitution. Pivots are the first nonzero column, in the order
//! rows are fed in; free unknowns are set to zero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cochain::wedge_index;
use super::{Cochain, Tuple};
use crate::polyring::{Monomial, Poly, Rational};
use crate::weyl::poisson_bracket;

/// Sparse integer row; column `ncols` is the augmented right-hand side.
type Row = Vec<(usize, BigInt)>;

fn primitive(mut row: Row) -> Row {
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        for (_, v) in row.iter_mut() {
            *v = -&*v;
        }
    }
    row
}

fn integer_row(entries: &[(usize, Rational)]) -> Row {
    let mut lcm = BigInt::one();
    for (_, v) in entries {
        lcm = lcm.lcm(v.denom());
    }
    let mut row: Row = entries
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    row.sort_by_key(|(c, _)| *c);
    primitive(row)
}

// Both rows share their leading column.
fn eliminate(row: &Row, pivot: &Row) -> Row {
    let a = &pivot[0].1;
    let b = &row[0].1;
    let g = a.gcd(b);
    let (sa, sb) = (a / &g, b / &g);
    let mut out = Row::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, &sa * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&sb * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &sa * &row[i - 1].1 - &sb * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    primitive(out)
}

/// Row echelon form built incrementally.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, Row>,
    inconsistent: bool,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: BTreeMap::new(),
            inconsistent: false,
        }
    }

    /// Feeds one equation `sum coeffs x = rhs`.
    pub fn push(&mut self, coeffs: &[(usize, Rational)], rhs: &Rational) {
        let mut entries = coeffs.to_vec();
        if !rhs.is_zero() {
            entries.push((self.ncols, rhs.clone()));
        }
        let mut row = integer_row(&entries);
        while let Some(&(lead, _)) = row.first() {
            match self.pivots.get(&lead) {
                Some(p) if lead < self.ncols => row = eliminate(&row, p),
                _ => break,
            }
        }
        match row.first() {
            None => {}
            Some(&(lead, _)) if lead == self.ncols => self.inconsistent = true,
            Some(&(lead, _)) => {
                self.pivots.insert(lead, row);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Solution with every free unknown set to zero.
    pub fn solution(&self) -> Option<Vec<Rational>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Rational::zero(); self.ncols];
        for (&lead, row) in self.pivots.iter().rev() {
            let mut acc = Rational::zero();
            for (c, v) in &row[1..] {
                let v = Rational::from_integer(v.clone());
                if *c == self.ncols {
                    acc += v;
                } else {
                    acc -= v * &x[*c];
                }
            }
            x[lead] = acc / Rational::from_integer(row[0].1.clone());
        }
        Some(x)
    }
}

/// Rank of a sparse rational matrix given by rows.
pub fn rank(rows: &[Vec<(usize, Rational)>], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    let zero = Rational::zero();
    for r in rows {
        e.push(r, &zero);
    }
    e.rank()
}

/// The linear system of `delta` restricted to a finite monomial basis of
/// cochain entries, with a right-hand side cochain.
#[derive(Debug, Clone)]
pub struct GradedSystem {
    /// Column basis: `(tuple, monomial)` in the source degree.
    pub unknowns: Vec<(Tuple, Monomial)>,
    /// Row basis in the target degree, in canonical order.
    pub equations: Vec<(Tuple, Monomial)>,
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
}

impl GradedSystem {
    /// `delta` applied to each basis element `monomial * e_tuple`, against `target`.
    pub fn assemble(fs: &[Poly], unknowns: Vec<(Tuple, Monomial)>, target: &Cochain) -> Self {
        let n = target.n();
        let mut rows: BTreeMap<(Tuple, Monomial), Vec<(usize, Rational)>> = BTreeMap::new();
        let mut rhs: BTreeMap<(Tuple, Monomial), Rational> = BTreeMap::new();
        for (col, (t, mono)) in unknowns.iter().enumerate() {
            let m = Poly::term(n, mono.clone(), Rational::one());
            for (j, f) in fs.iter().enumerate() {
                let Some((tj, negate)) = wedge_index(t, j) else {
                    continue;
                };
                let b = poisson_bracket(f, &m).expect("arity checked by caller");
                for (bm, bc) in b.terms() {
                    let v = if negate { -bc } else { bc.clone() };
                    rows.entry((tj.clone(), bm.clone()))
                        .or_default()
                        .push((col, v));
                }
            }
        }
        for (t, m) in target.entries() {
            for (mono, c) in m.terms() {
                let key = (t.clone(), mono.clone());
                rows.entry(key.clone()).or_default();
                rhs.insert(key, c.clone());
            }
        }
        let mut equations = Vec::with_capacity(rows.len());
        let mut mat = Vec::with_capacity(rows.len());
        let mut b = Vec::with_capacity(rows.len());
        for (key, mut entries) in rows {
            entries.sort_by_key(|e| e.0);
            // merge repeated columns
            let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
            for (c, v) in entries {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            b.push(rhs.remove(&key).unwrap_or_else(Rational::zero));
            equations.push(key);
            mat.push(merged);
        }
        GradedSystem {
            unknowns,
            equations,
            rows: mat,
            rhs: b,
        }
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.unknowns.len());
        for (r, b) in self.rows.iter().zip(&self.rhs) {
            e.push(r, b);
        }
        e
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows, self.unknowns.len())
    }

    /// The canonical solution as a cochain of degree `degree`, or `None` when inconsistent.
    pub fn solve(&self, n: usize, width: usize, degree: usize) -> Option<Cochain> {
        let x = self.echelon().solution()?;
        let mut by_tuple: BTreeMap<Tuple, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for ((t, m), v) in self.unknowns.iter().zip(x) {
            if !v.is_zero() {
                by_tuple.entry(t.clone()).or_default().push((m.clone(), v));
            }
        }
        let entries = by_tuple
            .into_iter()
            .map(|(t, terms)| (t, Poly::from_terms(n, terms)));
        Some(Cochain::from_entries(n, width, degree, entries).expect("basis tuples are valid"))
    }
}
