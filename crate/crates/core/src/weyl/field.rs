use std::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::polyring::{Poly, Rational, Var};

/// Polynomial vector field; component `k` multiplies `d/d(slot k)`,
/// i.e. the `q` directions first and then the `p` directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    n: usize,
    components: Vec<Poly>,
}

impl VectorField {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        if components.is_empty() || !components.len().is_multiple_of(2) {
            return Err(Error::InvalidFrame(format!(
                "a vector field needs 2n components, got {}",
                components.len()
            )));
        }
        let n = components.len() / 2;
        if let Some(bad) = components.iter().find(|c| c.n() != n) {
            return Err(Error::MismatchedArity {
                left: n,
                right: bad.n(),
            });
        }
        Ok(VectorField { n, components })
    }

    pub fn zero(n: usize) -> Self {
        VectorField {
            n,
            components: vec![Poly::zero(n); 2 * n],
        }
    }

    /// The coordinate field `d/dv`.
    pub fn coordinate(n: usize, v: Var) -> Self {
        let mut f = VectorField::zero(n);
        f.components[v.slot(n)] = Poly::one(n);
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, v: Var) -> &Poly {
        &self.components[v.slot(self.n)]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// Lie derivative of `g` along the field.
    pub fn apply(&self, g: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (slot, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = g.diff_slot(slot);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    pub fn lie_bracket(&self, other: &VectorField) -> VectorField {
        let components = (0..2 * self.n)
            .map(|k| &self.apply(&other.components[k]) - &other.apply(&self.components[k]))
            .collect();
        VectorField {
            n: self.n,
            components,
        }
    }

    /// `omega(U, V)` for `omega = sum_i dq_i ^ dp_i`.
    pub fn omega(&self, other: &VectorField) -> Poly {
        let n = self.n;
        let mut out = Poly::zero(n);
        for i in 0..n {
            let (q, p) = (Var::Q(i).slot(n), Var::P(i).slot(n));
            out = &out + &(&self.components[q] * &other.components[p]);
            out = &out - &(&self.components[p] * &other.components[q]);
        }
        out
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (slot, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*d/d{}", Var::from_slot(slot, self.n))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Action-angle frame `(X_1..X_n, Y_1..Y_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AAFrame {
    x: Vec<VectorField>,
    y: Vec<VectorField>,
}

impl AAFrame {
    pub fn new(x: Vec<VectorField>, y: Vec<VectorField>) -> Result<Self> {
        let n = x.first().map(VectorField::n).ok_or(Error::EmptySystem)?;
        if x.len() != n || y.len() != n {
            return Err(Error::InvalidFrame(format!(
                "expected {n} X and {n} Y fields, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        if let Some(bad) = x.iter().chain(&y).find(|v| v.n() != n) {
            return Err(Error::MismatchedArity {
                left: n,
                right: bad.n(),
            });
        }
        Ok(AAFrame { x, y })
    }

    /// `X_i = d/dp_i`, `Y_i = d/dq_i`; its product is the normal product.
    pub fn standard(n: usize) -> Self {
        AAFrame {
            x: (0..n)
                .map(|i| VectorField::coordinate(n, Var::P(i)))
                .collect(),
            y: (0..n)
                .map(|i| VectorField::coordinate(n, Var::Q(i)))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[VectorField] {
        &self.x
    }

    pub fn y(&self) -> &[VectorField] {
        &self.y
    }

    fn labelled(&self) -> Vec<(String, &VectorField)> {
        let xs = self
            .x
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("X{}", i + 1), v));
        let ys = self
            .y
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("Y{}", i + 1), v));
        xs.chain(ys).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameDefect {
    LieBracket {
        left: String,
        right: String,
        bracket: VectorField,
    },
    Pairing {
        left: String,
        right: String,
        value: Poly,
        expected: String,
    },
}

impl fmt::Display for FrameDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameDefect::LieBracket {
                left,
                right,
                bracket,
            } => write!(f, "[{left}, {right}] = {bracket} is not zero"),
            FrameDefect::Pairing {
                left,
                right,
                value,
                expected,
            } => write!(f, "omega({left}, {right}) = {value}, expected {expected}"),
        }
    }
}

/// Result of `validate_aa_frame`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameVerdict {
    /// All checks pass; `orientation` is the common value `omega(X_i, Y_i)`, either 1 or -1.
    Valid {
        orientation: i8,
    },
    Invalid(FrameDefect),
}

impl FrameVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, FrameVerdict::Valid { .. })
    }
}

/// Checks that the fields pairwise commute, that `omega(X_i, Y_j) = e * delta_ij`
/// for one sign `e` shared by all `i`, and that the `X`s and the `Y`s are isotropic.
///
/// With `omega = sum dq ^ dp` the standard frame has `e = -1` and the swapped
/// frame `X_i = d/dq_i, Y_i = d/dp_i` has `e = 1`; both are accepted.
pub fn validate_aa_frame(frame: &AAFrame) -> FrameVerdict {
    let fields = frame.labelled();
    for (a, (la, va)) in fields.iter().enumerate() {
        for (lb, vb) in &fields[a + 1..] {
            let br = va.lie_bracket(vb);
            if !br.is_zero() {
                return FrameVerdict::Invalid(FrameDefect::LieBracket {
                    left: la.clone(),
                    right: lb.clone(),
                    bracket: br,
                });
            }
        }
    }

    let n = frame.n();
    let pairing = |l: &str, r: &str, value: Poly, expected: &str| {
        FrameVerdict::Invalid(FrameDefect::Pairing {
            left: l.into(),
            right: r.into(),
            value,
            expected: expected.into(),
        })
    };

    let w11 = frame.x[0].omega(&frame.y[0]);
    let unit = Rational::one();
    let orientation = match (w11.degree(), w11.constant_term()) {
        (0, c) if c.abs() == unit => c,
        _ => return pairing("X1", "Y1", w11, "1 or -1"),
    };
    let sign: i8 = if orientation.is_positive() { 1 } else { -1 };

    for i in 0..n {
        for j in 0..n {
            let w = frame.x[i].omega(&frame.y[j]);
            let want = if i == j {
                Poly::constant(n, orientation.clone())
            } else {
                Poly::zero(n)
            };
            if w != want {
                let expected = if want.is_zero() {
                    "0".into()
                } else {
                    want.to_string()
                };
                return pairing(&format!("X{}", i + 1), &format!("Y{}", j + 1), w, &expected);
            }
        }
    }
    for (side, vs) in [("X", &frame.x), ("Y", &frame.y)] {
        for i in 0..n {
            for j in i + 1..n {
                let w = vs[i].omega(&vs[j]);
                if !w.is_zero() {
                    return pairing(
                        &format!("{side}{}", i + 1),
                        &format!("{side}{}", j + 1),
                        w,
                        "0",
                    );
                }
            }
        }
    }
    FrameVerdict::Valid { orientation: sign }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn standard_frame_validates() {
        assert_eq!(
            validate_aa_frame(&AAFrame::standard(2)),
            FrameVerdict::Valid { orientation: -1 }
        );
        // omega(d/dp, d/dq) = -1 on constant fields
        let (x, y) = (
            VectorField::coordinate(1, Var::P(0)),
            VectorField::coordinate(1, Var::Q(0)),
        );
        assert_eq!(
            x.omega(&y),
            Poly::constant(1, Rational::from_integer((-1).into()))
        );
    }

    #[test]
    fn degenerate_pairing_fails() {
        let dq = VectorField::coordinate(1, Var::Q(0));
        let f = AAFrame::new(vec![dq.clone()], vec![dq]).unwrap();
        assert!(matches!(
            validate_aa_frame(&f),
            FrameVerdict::Invalid(FrameDefect::Pairing { .. })
        ));
    }

    #[test]
    fn noncommuting_fields_fail() {
        let x = VectorField::new(vec![poly("q1", 1), poly("-p1", 1)]).unwrap();
        let y = VectorField::coordinate(1, Var::Q(0));
        // [q d/dq - p d/dp, d/dq] = -d/dq
        assert_eq!(
            x.lie_bracket(&y),
            VectorField::new(vec![poly("-1", 1), Poly::zero(1)]).unwrap()
        );
        let f = AAFrame::new(vec![x], vec![y]).unwrap();
        assert!(matches!(
            validate_aa_frame(&f),
            FrameVerdict::Invalid(FrameDefect::LieBracket { .. })
        ));
    }

    #[test]
    fn mixed_orientation_fails() {
        let n = 2;
        let x = vec![
            VectorField::coordinate(n, Var::P(0)),
            VectorField::coordinate(n, Var::Q(1)),
        ];
        let y = vec![
            VectorField::coordinate(n, Var::Q(0)),
            VectorField::coordinate(n, Var::P(1)),
        ];
        let f = AAFrame::new(x, y).unwrap();
        assert!(!validate_aa_frame(&f).is_valid());
    }
}
