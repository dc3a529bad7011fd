//! Exact polynomial arithmetic on `Q[q1..qn, p1..pn]`, hbar-truncated series
//! over it, and the textual expression language.

mod parse;
mod poly;
mod series;

pub use parse::{parse_poly, Diagnostic, ParseError, ParseResult};
pub use poly::{Monomial, Poly, Var};
pub use series::HSeries;

pub use num_rational::BigRational as Rational;

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Shorthand for `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
