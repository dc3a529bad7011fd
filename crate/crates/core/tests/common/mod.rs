#![allow(dead_code)]

use proptest::prelude::*;
use qlift_core::lift::{gen_involutive_shear, Shear, ShearShape};
use qlift_core::polyring::{ratio, HSeries, Monomial, Poly};
use rand::SeedableRng;

/// Random polynomial in `n` pairs with total degree at most `max_deg`.
pub fn arb_poly(n: usize, max_deg: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    let term = (
        prop::collection::vec(0..2 * n, 0..=max_deg),
        -4i64..=4,
        1i64..=3,
    );
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        Poly::from_terms(
            n,
            terms.into_iter().map(|(slots, num, den)| {
                let mut e = vec![0u32; 2 * n];
                for s in slots {
                    e[s] += 1;
                }
                (Monomial::from_exponents(e), ratio(num, den))
            }),
        )
    })
}

pub fn arb_series(
    n: usize,
    l: usize,
    max_deg: usize,
    max_terms: usize,
) -> impl Strategy<Value = HSeries> {
    prop::collection::vec(arb_poly(n, max_deg, max_terms), l + 1)
        .prop_map(|cs| HSeries::from_coeffs(cs).unwrap())
}

pub fn poly(s: &str, n: usize) -> Poly {
    Poly::parse(s, n).unwrap()
}

/// Involutive systems: hand-picked ones plus seeded shear pullbacks, `n <= 3`.
pub fn corpus() -> Vec<Vec<Poly>> {
    let mut out = vec![
        vec![poly("p1*q1", 1)],
        vec![poly("p1*q1", 2), poly("p2*q2", 2)],
        vec![poly("q1*p1 + q2*p2", 2), poly("q1*p2 - q2*p1", 2)],
        vec![poly("p1 + 2*q1*q2", 2), poly("p2 + q1^2", 2)],
        vec![poly("p1*q1", 3), poly("p2*q2", 3), poly("p3^2", 3)],
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for k in 0..20 {
        let n = 1 + k % 3;
        let shears = Shear::random_sequence(n, ShearShape::default(), &mut rng);
        out.push(gen_involutive_shear(n, &shears).unwrap());
    }
    out
}

/// Homogeneous involutive systems for graded checks.
pub fn homogeneous_corpus() -> Vec<Vec<Poly>> {
    vec![
        vec![poly("p1*q1", 1)],
        vec![poly("p1^2", 1)],
        vec![poly("p1*q1", 2), poly("p2*q2", 2)],
        vec![poly("q1*p1 + q2*p2", 2), poly("q1*p2 - q2*p1", 2)],
        vec![poly("p1", 2), poly("p2^2", 2)],
        vec![poly("p1^3", 2), poly("p2*q2", 2)],
    ]
}

pub fn shared_corpus() -> &'static [Vec<Poly>] {
    static CORPUS: std::sync::OnceLock<Vec<Vec<Poly>>> = std::sync::OnceLock::new();
    CORPUS.get_or_init(corpus)
}

/// A corpus system together with `count` random polynomials in the same ring.
pub fn system_with_polys(
    count: usize,
    max_deg: usize,
    max_terms: usize,
) -> impl Strategy<Value = (Vec<Poly>, Vec<Poly>)> {
    (0..shared_corpus().len()).prop_flat_map(move |k| {
        let fs = shared_corpus()[k].clone();
        let n = fs[0].n();
        (
            Just(fs),
            prop::collection::vec(arb_poly(n, max_deg, max_terms), count),
        )
    })
}
