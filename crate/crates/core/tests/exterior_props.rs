use num_bigint::BigInt;
use proptest::prelude::*;
use resultant_core::exterior::ExteriorElement;
use resultant_core::linalg::Rational;

fn rat(c: i64) -> Rational {
    Rational::from_integer(BigInt::from(c))
}

fn element(n: usize) -> impl Strategy<Value = ExteriorElement> {
    prop::collection::vec((0u64..(1 << n), -5i64..=5), 0..6)
        .prop_map(|terms| ExteriorElement::from_terms(terms.into_iter().map(|(m, c)| (m, rat(c)))))
}

fn homogeneous(n: usize, k: usize) -> impl Strategy<Value = ExteriorElement> {
    let monomial = prop::sample::subsequence((0..n).collect::<Vec<_>>(), k).prop_map(|s| s.iter().fold(0u64, |m, &i| m | 1 << i));
    prop::collection::vec((monomial, -5i64..=5), 0..5)
        .prop_map(|terms| ExteriorElement::from_terms(terms.into_iter().map(|(m, c)| (m, rat(c)))))
}

fn pair() -> impl Strategy<Value = (usize, usize, ExteriorElement, ExteriorElement)> {
    (0usize..4, 0usize..4).prop_flat_map(|(p, q)| (Just(p), Just(q), homogeneous(7, p), homogeneous(7, q)))
}

proptest! {
    #[test]
    fn wedge_is_associative(a in element(6), b in element(6), c in element(6)) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn graded_commutativity((p, q, a, b) in pair()) {
        let sign = if p * q % 2 == 0 { rat(1) } else { rat(-1) };
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&sign));
    }

    #[test]
    fn generators_square_to_zero(i in 0usize..8) {
        let e = ExteriorElement::generator(i);
        prop_assert!(e.wedge(&e).is_zero());
    }
}
