use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polyring::{HSeries, Poly, Rational, Var};

use super::{validate_aa_frame, AAFrame, FrameVerdict, VectorField};

/// An associative product on hbar-truncated series.
pub trait StarProduct: Send + Sync {
    fn name(&self) -> &str;

    fn product(&self, f: &HSeries, g: &HSeries) -> Result<HSeries>;

    /// `f * g - g * f`, without dividing by hbar.
    fn commutator(&self, f: &HSeries, g: &HSeries) -> Result<HSeries> {
        self.product(f, g)?.sub(&self.product(g, f)?)
    }
}

/// `f * g = sum_a hbar^|a| / a! (d_p^a f)(d_q^a g)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NormalStar;

impl StarProduct for NormalStar {
    fn name(&self) -> &str {
        "normal"
    }

    fn product(&self, f: &HSeries, g: &HSeries) -> Result<HSeries> {
        let (n, l) = check_pair(f, g)?;
        let x = move |i: usize, p: &Poly| p.diff_slot(Var::P(i).slot(n));
        let y = move |i: usize, p: &Poly| p.diff_slot(Var::Q(i).slot(n));
        Ok(bidifferential(n, l, f, g, &x, &y))
    }
}

/// `f *_s g = sum_a hbar^|a| / a! (X^a f)(Y^a g)` for a validated frame.
#[derive(Debug, Clone)]
pub struct ActionAngleStar {
    frame: AAFrame,
}

impl ActionAngleStar {
    pub fn new(frame: AAFrame) -> Result<Self> {
        match validate_aa_frame(&frame) {
            FrameVerdict::Valid { .. } => Ok(ActionAngleStar { frame }),
            FrameVerdict::Invalid(d) => Err(Error::InvalidFrame(d.to_string())),
        }
    }

    pub fn frame(&self) -> &AAFrame {
        &self.frame
    }
}

impl StarProduct for ActionAngleStar {
    fn name(&self) -> &str {
        "action-angle"
    }

    fn product(&self, f: &HSeries, g: &HSeries) -> Result<HSeries> {
        let (n, l) = check_pair(f, g)?;
        if n != self.frame.n() {
            return Err(Error::MismatchedArity {
                left: self.frame.n(),
                right: n,
            });
        }
        let xs: &[VectorField] = self.frame.x();
        let ys: &[VectorField] = self.frame.y();
        let x = |i: usize, p: &Poly| xs[i].apply(p);
        let y = |i: usize, p: &Poly| ys[i].apply(p);
        Ok(bidifferential(n, l, f, g, &x, &y))
    }
}

pub fn star_normal(f: &HSeries, g: &HSeries) -> Result<HSeries> {
    NormalStar.product(f, g)
}

pub fn star_commutator(f: &HSeries, g: &HSeries) -> Result<HSeries> {
    NormalStar.commutator(f, g)
}

pub fn star_action_angle(frame: &AAFrame, f: &HSeries, g: &HSeries) -> Result<HSeries> {
    ActionAngleStar::new(frame.clone())?.product(f, g)
}

fn check_pair(f: &HSeries, g: &HSeries) -> Result<(usize, usize)> {
    if f.n() != g.n() {
        return Err(Error::MismatchedArity {
            left: f.n(),
            right: g.n(),
        });
    }
    if f.truncation() != g.truncation() {
        return Err(Error::MismatchedTruncation {
            left: f.truncation(),
            right: g.truncation(),
        });
    }
    Ok((f.n(), f.truncation()))
}

type Op<'a> = &'a dyn Fn(usize, &Poly) -> Poly;

/// `sum_{a,b,alpha} hbar^(a+b+|alpha|) / alpha! (X^alpha f_a)(Y^alpha g_b)` up to `hbar^l`.
/// The operators must pairwise commute for the multi-index to be well defined.
fn bidifferential(n: usize, l: usize, f: &HSeries, g: &HSeries, x: Op, y: Op) -> HSeries {
    let mut out = HSeries::zero(n, l);
    for a in 0..=l {
        let fa = &f.coeffs()[a];
        if fa.is_zero() {
            continue;
        }
        for b in 0..=l - a {
            let gb = &g.coeffs()[b];
            if gb.is_zero() {
                continue;
            }
            let mut acc = vec![Poly::zero(n); l - a - b + 1];
            expand(
                &Walk {
                    n,
                    x,
                    y,
                    budget: l - a - b,
                },
                0,
                0,
                fa.clone(),
                gb.clone(),
                BigInt::from(1),
                &mut acc,
            );
            for (k, t) in acc.into_iter().enumerate() {
                if !t.is_zero() {
                    let idx = a + b + k;
                    out.set_coeff(idx, &out.coeff(idx) + &t);
                }
            }
        }
    }
    out
}

struct Walk<'a> {
    n: usize,
    x: Op<'a>,
    y: Op<'a>,
    budget: usize,
}

// Depth-first over multi-indices, one variable pair at a time; branches die
// as soon as either derivative vanishes.
fn expand(w: &Walk, var: usize, order: usize, xf: Poly, yg: Poly, denom: BigInt, acc: &mut [Poly]) {
    if var == w.n {
        let c = Rational::new(BigInt::from(1), denom);
        acc[order] = &acc[order] + &(&xf * &yg).scale(&c);
        return;
    }
    let (mut xf, mut yg, mut denom) = (xf, yg, denom);
    let mut t = 0usize;
    loop {
        expand(
            w,
            var + 1,
            order + t,
            xf.clone(),
            yg.clone(),
            denom.clone(),
            acc,
        );
        if order + t == w.budget {
            break;
        }
        xf = (w.x)(var, &xf);
        if xf.is_zero() {
            break;
        }
        yg = (w.y)(var, &yg);
        if yg.is_zero() {
            break;
        }
        t += 1;
        denom *= t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::validate_aa_frame;

    fn s(text: &str, n: usize, l: usize) -> HSeries {
        HSeries::from_poly(Poly::parse(text, n).unwrap(), l)
    }

    fn series(coeffs: &[&str], n: usize) -> HSeries {
        HSeries::from_coeffs(coeffs.iter().map(|c| Poly::parse(c, n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn canonical_commutation() {
        assert_eq!(
            star_normal(&s("p1", 1, 2), &s("q1", 1, 2)).unwrap(),
            series(&["q1*p1", "1", "0"], 1)
        );
        assert_eq!(
            star_normal(&s("q1", 1, 2), &s("p1", 1, 2)).unwrap(),
            s("q1*p1", 1, 2)
        );
        assert_eq!(
            star_commutator(&s("p1", 1, 3), &s("q1", 1, 3)).unwrap(),
            series(&["0", "1", "0", "0"], 1)
        );
    }

    #[test]
    fn unit() {
        let g = series(&["q1^3*p2 + p1", "q2", "7"], 2);
        assert_eq!(star_normal(&s("1", 2, 2), &g).unwrap(), g);
        assert_eq!(star_normal(&g, &s("1", 2, 2)).unwrap(), g);
    }

    // Oracle: d_p^k p^2 = (2, 2p, p^2) and d_q^k q^2 likewise; sum hbar^k/k! products.
    #[test]
    fn squares() {
        assert_eq!(
            star_normal(&s("p1^2", 1, 3), &s("q1^2", 1, 3)).unwrap(),
            series(&["p1^2*q1^2", "4*p1*q1", "2", "0"], 1)
        );
        // truncation hides the constant
        assert_eq!(
            star_normal(&s("p1^2", 1, 1), &s("q1^2", 1, 1)).unwrap(),
            series(&["p1^2*q1^2", "4*p1*q1"], 1)
        );
    }

    #[test]
    fn commutator_examples() {
        assert!(star_commutator(&s("p1*q1", 2, 3), &s("p2*q2", 2, 3))
            .unwrap()
            .is_zero());
        assert_eq!(
            star_commutator(&s("p1*q1", 1, 2), &s("p1", 1, 2)).unwrap(),
            series(&["0", "-p1", "0"], 1)
        );
    }

    #[test]
    fn mismatches() {
        assert!(matches!(
            star_normal(&s("p1", 1, 2), &s("p1", 1, 3)),
            Err(Error::MismatchedTruncation { .. })
        ));
        assert!(matches!(
            star_normal(&s("p1", 1, 2), &s("p1", 2, 2)),
            Err(Error::MismatchedArity { .. })
        ));
    }

    #[test]
    fn action_angle_frames() {
        let std = AAFrame::standard(1);
        assert_eq!(
            star_action_angle(&std, &s("p1", 1, 2), &s("q1", 1, 2)).unwrap(),
            series(&["q1*p1", "1", "0"], 1)
        );
        let swapped = AAFrame::new(
            vec![VectorField::coordinate(1, Var::Q(0))],
            vec![VectorField::coordinate(1, Var::P(0))],
        )
        .unwrap();
        assert!(validate_aa_frame(&swapped).is_valid());
        assert_eq!(
            star_action_angle(&swapped, &s("q1", 1, 2), &s("p1", 1, 2)).unwrap(),
            series(&["q1*p1", "1", "0"], 1)
        );
        let g = series(&["q1^2*p1", "p1"], 1);
        assert_eq!(star_action_angle(&swapped, &s("1", 1, 1), &g).unwrap(), g);

        let bad = AAFrame::new(
            vec![VectorField::coordinate(1, Var::Q(0))],
            vec![VectorField::coordinate(1, Var::Q(0))],
        )
        .unwrap();
        assert!(matches!(
            star_action_angle(&bad, &g, &g),
            Err(Error::InvalidFrame(_))
        ));
    }
}
