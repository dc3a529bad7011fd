use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::polyring::{rat, Monomial, Poly, Var};
use crate::weyl::is_involutive;

/// Elementary canonical shear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shear {
    /// `(q, p) -> (q, p + grad S(q))`; `S` may only mention `q` variables.
    Position(Poly),
    /// `(q, p) -> (q + grad T(p), p)`; `T` may only mention `p` variables.
    Momentum(Poly),
}

impl Shear {
    fn images(&self, n: usize) -> Result<Vec<Poly>> {
        let mut images: Vec<Poly> = (0..2 * n)
            .map(|s| Poly::var(n, Var::from_slot(s, n)))
            .collect();
        match self {
            Shear::Position(s) => {
                if s.n() != n {
                    return Err(Error::MismatchedArity {
                        left: n,
                        right: s.n(),
                    });
                }
                if !s.only_uses(|v| matches!(v, Var::Q(_))) {
                    return Err(Error::ForbiddenShearVariable {
                        poly: s.clone(),
                        kind: "momentum",
                    });
                }
                for i in 0..n {
                    let slot = Var::P(i).slot(n);
                    images[slot] = &images[slot] + &s.diff_slot(Var::Q(i).slot(n));
                }
            }
            Shear::Momentum(t) => {
                if t.n() != n {
                    return Err(Error::MismatchedArity {
                        left: n,
                        right: t.n(),
                    });
                }
                if !t.only_uses(|v| matches!(v, Var::P(_))) {
                    return Err(Error::ForbiddenShearVariable {
                        poly: t.clone(),
                        kind: "position",
                    });
                }
                for i in 0..n {
                    let slot = Var::Q(i).slot(n);
                    images[slot] = &images[slot] + &t.diff_slot(Var::P(i).slot(n));
                }
            }
        }
        Ok(images)
    }
}

/// Shape of randomly drawn shear sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShearShape {
    pub steps: usize,
    pub max_terms: usize,
    pub max_degree: u32,
}

impl Default for ShearShape {
    fn default() -> Self {
        ShearShape {
            steps: 2,
            max_terms: 2,
            max_degree: 3,
        }
    }
}

impl Shear {
    /// Alternating position and momentum shears with small integer coefficients;
    /// the first kind is drawn at random.
    pub fn random_sequence<R: Rng + ?Sized>(
        n: usize,
        shape: ShearShape,
        rng: &mut R,
    ) -> Vec<Shear> {
        let position_first = rng.gen_bool(0.5);
        (0..shape.steps)
            .map(|k| {
                let position = (k % 2 == 0) == position_first;
                let offset = if position { 0 } else { n };
                let terms = rng.gen_range(1..=shape.max_terms.max(1));
                let mut g = Poly::zero(n);
                for _ in 0..terms {
                    let deg = rng.gen_range(2..=shape.max_degree.max(2));
                    let mut e = vec![0u32; 2 * n];
                    for _ in 0..deg {
                        e[offset + rng.gen_range(0..n)] += 1;
                    }
                    let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
                    g = &g + &Poly::term(n, Monomial::from_exponents(e), rat(c));
                }
                if position {
                    Shear::Position(g)
                } else {
                    Shear::Momentum(g)
                }
            })
            .collect()
    }
}

impl fmt::Display for Shear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shear::Position(s) => write!(f, "S = {s}"),
            Shear::Momentum(t) => write!(f, "T = {t}"),
        }
    }
}

/// Pulls `(p_1, .., p_n)` back through the shears, applied in order.
pub fn gen_involutive_shear(n: usize, shears: &[Shear]) -> Result<Vec<Poly>> {
    let mut fs: Vec<Poly> = (0..n).map(|i| Poly::p(n, i)).collect();
    for shear in shears {
        let images = shear.images(n)?;
        fs = fs.iter().map(|f| f.compose(&images)).collect();
    }
    if let Some(w) = is_involutive(&fs)?.witness() {
        return Err(Error::Internal(format!(
            "shear pullback lost involutivity: {w}"
        )));
    }
    Ok(fs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn identity() {
        assert_eq!(
            gen_involutive_shear(3, &[]).unwrap(),
            vec![poly("p1", 3), poly("p2", 3), poly("p3", 3)]
        );
    }

    #[test]
    fn single_position_shear() {
        let fs = gen_involutive_shear(2, &[Shear::Position(poly("q1^2*q2", 2))]).unwrap();
        assert_eq!(fs, vec![poly("p1 + 2*q1*q2", 2), poly("p2 + q1^2", 2)]);
    }

    #[test]
    fn composed_shears() {
        let fs = gen_involutive_shear(
            1,
            &[
                Shear::Position(poly("q1^3", 1)),
                Shear::Momentum(poly("p1^2", 1)),
            ],
        )
        .unwrap();
        assert_eq!(fs, vec![poly("p1 + 3*(q1 + 2*p1)^2", 1)]);
    }

    #[test]
    fn random_sequences_are_involutive() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            let shears = Shear::random_sequence(n, ShearShape::default(), &mut rng);
            assert_eq!(shears.len(), 2);
            let fs = gen_involutive_shear(n, &shears).unwrap();
            assert!(is_involutive(&fs).unwrap().holds());
        }
    }

    #[test]
    fn forbidden_variables() {
        assert!(matches!(
            gen_involutive_shear(1, &[Shear::Position(poly("q1*p1", 1))]),
            Err(Error::ForbiddenShearVariable { .. })
        ));
        assert!(matches!(
            gen_involutive_shear(1, &[Shear::Momentum(poly("q1", 1))]),
            Err(Error::ForbiddenShearVariable { .. })
        ));
    }
}
