use std::fmt;

use super::Poly;
use crate::error::{Error, Result};

/// Element of `Q[q,p][hbar] / hbar^(L+1)`: coefficient `k` multiplies `hbar^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HSeries {
    n: usize,
    coeffs: Vec<Poly>,
}

impl HSeries {
    pub fn zero(n: usize, truncation: usize) -> Self {
        HSeries {
            n,
            coeffs: vec![Poly::zero(n); truncation + 1],
        }
    }

    /// `f` as a series with no hbar corrections.
    pub fn from_poly(f: Poly, truncation: usize) -> Self {
        let n = f.n();
        let mut s = HSeries::zero(n, truncation);
        s.coeffs[0] = f;
        s
    }

    /// Builds a series from its coefficients `[c0, c1, ..]`; the truncation is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<Poly>) -> Result<Self> {
        let n = coeffs.first().ok_or(Error::EmptySystem)?.n();
        if let Some(bad) = coeffs.iter().find(|c| c.n() != n) {
            return Err(Error::MismatchedArity {
                left: n,
                right: bad.n(),
            });
        }
        Ok(HSeries { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Coefficient of `hbar^k`; zero past the truncation.
    pub fn coeff(&self, k: usize) -> Poly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n))
    }

    /// The principal symbol.
    pub fn symbol(&self) -> &Poly {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Lowest `k` with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn set_coeff(&mut self, k: usize, c: Poly) {
        assert_eq!(c.n(), self.n, "mismatched polynomial arity");
        if k <= self.truncation() {
            self.coeffs[k] = c;
        }
    }

    /// Lowers the truncation; a no-op when `l` is not smaller.
    pub fn truncate(&self, l: usize) -> HSeries {
        HSeries {
            n: self.n,
            coeffs: self.coeffs[..=l.min(self.truncation())].to_vec(),
        }
    }

    /// Sets the truncation to exactly `l`, padding with zeros or dropping coefficients.
    pub fn with_truncation(&self, l: usize) -> HSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(l + 1, Poly::zero(self.n));
        HSeries { n: self.n, coeffs }
    }

    fn check(&self, other: &HSeries) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::MismatchedArity {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.truncation().min(other.truncation()))
    }

    pub fn add(&self, other: &HSeries) -> Result<HSeries> {
        let l = self.check(other)?;
        Ok(HSeries {
            n: self.n,
            coeffs: (0..=l)
                .map(|k| &self.coeffs[k] + &other.coeffs[k])
                .collect(),
        })
    }

    pub fn sub(&self, other: &HSeries) -> Result<HSeries> {
        let l = self.check(other)?;
        Ok(HSeries {
            n: self.n,
            coeffs: (0..=l)
                .map(|k| &self.coeffs[k] - &other.coeffs[k])
                .collect(),
        })
    }

    /// Cauchy product with commutative coefficient multiplication.
    pub fn mul_commutative(&self, other: &HSeries) -> Result<HSeries> {
        let l = self.check(other)?;
        let mut out = HSeries::zero(self.n, l);
        for a in 0..=l {
            if self.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..=l - a {
                let t = &self.coeffs[a] * &other.coeffs[b];
                out.coeffs[a + b] = &out.coeffs[a + b] + &t;
            }
        }
        Ok(out)
    }

    /// Multiplies by `hbar^k`, dropping whatever overflows the truncation.
    pub fn shift(&self, k: i64) -> Result<HSeries> {
        if k < 0 {
            return Err(Error::NegativeShift(k));
        }
        let k = k as usize;
        let mut out = HSeries::zero(self.n, self.truncation());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k <= self.truncation() {
                out.coeffs[i + k] = c.clone();
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &super::Rational) -> HSeries {
        HSeries {
            n: self.n,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "hbar*({c})")?,
                _ => write!(f, "hbar^{k}*({c})")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(hbar^{})", self.truncation() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    fn p() -> Poly {
        Poly::p(1, 0)
    }
    fn q() -> Poly {
        Poly::q(1, 0)
    }

    #[test]
    fn truncate_drops_high_orders() {
        let s = HSeries::from_coeffs(vec![p(), q(), p()]).unwrap();
        assert_eq!(s.truncate(1), HSeries::from_coeffs(vec![p(), q()]).unwrap());
    }

    #[test]
    fn overflow_vanishes() {
        let a = HSeries::from_coeffs(vec![Poly::zero(1), p()]).unwrap();
        let b = HSeries::from_coeffs(vec![Poly::zero(1), q()]).unwrap();
        assert!(a.mul_commutative(&b).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let one = Poly::one(1);
        let a = HSeries::from_coeffs(vec![one.clone(), p(), Poly::zero(1)]).unwrap();
        let b = HSeries::from_coeffs(vec![one.clone(), -p(), Poly::zero(1)]).unwrap();
        let expect = HSeries::from_coeffs(vec![one, Poly::zero(1), -(&p() * &p())]).unwrap();
        assert_eq!(a.mul_commutative(&b).unwrap(), expect);
    }

    #[test]
    fn mixed_truncation_uses_smaller() {
        let a = HSeries::from_poly(p(), 3);
        let b = HSeries::from_poly(q(), 1);
        assert_eq!(a.add(&b).unwrap().truncation(), 1);
    }

    #[test]
    fn shift_rules() {
        let a = HSeries::from_coeffs(vec![p(), q()]).unwrap();
        assert_eq!(
            a.shift(1).unwrap(),
            HSeries::from_coeffs(vec![Poly::zero(1), p()]).unwrap()
        );
        assert!(matches!(a.shift(-1), Err(Error::NegativeShift(-1))));
        assert!(a.add(&HSeries::from_poly(Poly::one(2), 1)).is_err());
        assert_eq!(a.scale(&rat(0)), HSeries::zero(1, 1));
    }
}
