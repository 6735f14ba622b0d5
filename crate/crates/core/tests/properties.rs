use proptest::prelude::*;

use qsym::coeff::{rat, Bindings, Coefficient, ParamMonomial, Rational};
use qsym::op::{CopyExponents, OpElement, OpMonomial};
use qsym::parse::parse_operator;
use qsym::series::series_expand;

fn coefficient(min_z: i32) -> impl Strategy<Value = Coefficient> {
    prop::collection::vec((-3i64..=3, min_z..=1, 0u32..=1, 0u32..=1), 1..3).prop_map(|terms| {
        terms.into_iter().fold(Coefficient::zero(), |acc, (n, z, m, a)| {
            acc + Coefficient::term(Rational::from_integer(n.into()), ParamMonomial::new(z, m, a))
        })
    })
}

fn monomial() -> impl Strategy<Value = OpMonomial> {
    (0u32..=2, 0u32..=1, 0u32..=2, 0u32..=1, -1i32..=1, -2i32..=2)
        .prop_map(|(x, t, dx, dt, sx, st_half)| OpMonomial(vec![CopyExponents { x, t, dx, dt, sx, st_half }]))
}

fn element_with(min_z: i32) -> impl Strategy<Value = OpElement> {
    prop::collection::vec((monomial(), coefficient(min_z)), 1..4).prop_map(|terms| {
        let mut e = OpElement::zero(1);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    })
}

fn element() -> impl Strategy<Value = OpElement> {
    element_with(-1)
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-5i64..=-1, 1i64..=5], 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficient_ring_axioms(p in coefficient(-2), q in coefficient(-2), r in coefficient(-2)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        p in coefficient(-2), q in coefficient(-2),
        z in nonzero_rational(), m in nonzero_rational(), a in nonzero_rational(),
    ) {
        let b = Bindings { z: Some(z), m: Some(m), a: Some(a) };
        let lhs = (&p * &q).eval(&b).unwrap();
        let rhs = &p.eval(&b).unwrap() * &q.eval(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_product_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn jacobi_identity(a in element(), b in element(), c in element()) {
        let j = &(&a.commutator(&b.commutator(&c)) + &b.commutator(&c.commutator(&a)))
            + &c.commutator(&a.commutator(&b));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn different_copies_commute(a in element(), b in element()) {
        let a0 = a.embed(2, &[0]).unwrap();
        let b1 = b.embed(2, &[1]).unwrap();
        prop_assert!(a0.commutator(&b1).is_zero());
        prop_assert_eq!(&a0 * &b1, b1.clone() * a0.clone());
    }

    #[test]
    fn commutator_lowers_weyl_degree(a in element(), b in element()) {
        // the product of normal forms never exceeds the summed degree
        prop_assert!((&a * &b).degree() <= a.degree() + b.degree());
        let c = a.commutator(&b);
        prop_assert!(c.is_zero() || c.degree() <= a.degree() + b.degree());
    }

    #[test]
    fn series_expansion_is_multiplicative(a in element_with(0), b in element_with(0)) {
        let order = 3;
        let lhs = series_expand(&(&a * &b), order).unwrap();
        let rhs = series_expand(&a, order).unwrap().mul(&series_expand(&b, order).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn render_then_parse_round_trips(a in element()) {
        let text = a.to_string();
        prop_assert_eq!(parse_operator(&text).unwrap(), a, "{}", text);
    }
}
