use num_traits::{One, Zero};
use proptest::prelude::*;
use witten_psi::poly::{int, rat};
use witten_psi::{parse_poly, Axis, BivariatePoly, Rational};

fn small_poly() -> impl Strategy<Value = BivariatePoly> {
    prop::collection::vec(((0u32..=6, 0u32..=6), -9i64..=9), 0..8).prop_map(|terms| {
        BivariatePoly::from_terms(
            terms.into_iter().filter(|((i, j), _)| i + j <= 6).map(|(e, c)| (e, int(c))),
        )
    })
}

fn rational_coeff_poly() -> impl Strategy<Value = BivariatePoly> {
    prop::collection::vec(((0u32..=6, 0u32..=6), -99i64..=99, 1i64..=12), 0..8).prop_map(|terms| {
        BivariatePoly::from_terms(terms.into_iter().map(|(e, n, d)| (e, rat(n, d))))
    })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn naive_eval(p: &BivariatePoly, x: &Rational, y: &Rational) -> Rational {
    let mut sum = Rational::zero();
    for (&(i, j), c) in p.terms() {
        let mut t = c.clone();
        for _ in 0..i {
            t *= x;
        }
        for _ in 0..j {
            t *= y;
        }
        sum += t;
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn distributive(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
    }

    #[test]
    fn leibniz(p in small_poly(), q in small_poly()) {
        for axis in [Axis::X, Axis::Y] {
            let lhs = (&p * &q).partial_derivative(axis, 1);
            let rhs = &(&p * &q.partial_derivative(axis, 1)) + &(&q * &p.partial_derivative(axis, 1));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn render_parse_round_trip(p in rational_coeff_poly()) {
        let text = p.render();
        prop_assert_eq!(parse_poly(&text).unwrap(), p, "{}", text);
    }

    #[test]
    fn horner_matches_naive(p in rational_coeff_poly(), x in small_rational(), y in small_rational()) {
        prop_assert_eq!(p.evaluate(&x, &y), naive_eval(&p, &x, &y));
    }

    #[test]
    fn no_zero_terms_are_stored(p in small_poly(), q in small_poly()) {
        let d = &(&p * &q) - &(&q * &p);
        prop_assert!(d.is_zero());
        prop_assert!((&p - &p).terms().next().is_none());
    }
}

#[test]
fn expansion_matches_repeated_multiplication() {
    let s = &BivariatePoly::x() + &BivariatePoly::y();
    let expected = &s * &s;
    assert_eq!(parse_poly("(x+y)^2").unwrap(), expected);
    assert_eq!(parse_poly("(x+y)^3").unwrap(), &expected * &s);
    assert_eq!(parse_poly("x^0*y^0").unwrap(), BivariatePoly::constant(Rational::one()));
}

#[test]
fn derivative_examples() {
    let phi = parse_poly("x^3 - x*y^2").unwrap();
    assert_eq!(phi.partial_derivative(Axis::X, 1).render(), "3*x^2 - y^2");
    assert_eq!(phi.partial_derivative(Axis::Y, 1).render(), "-2*x*y");
    assert_eq!(phi.mixed_derivative(1, 2).render(), "-2");
    assert!(phi.partial_derivative(Axis::X, 4).is_zero());
}
