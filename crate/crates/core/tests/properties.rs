//! Property tests over randomized exact inputs: scalar field axioms, the
//! octonion composition law, Jordan adjugate identities, and the square-class
//! relation of the coefficient engine.

use proptest::prelude::*;

use e7lift_core::coeff::CoeffContext;
use e7lift_core::jordan::{translate_v1, Jordan2, JordanElement};
use e7lift_core::newform::{Character, NewformRecord};
use e7lift_core::octonion::Octonion;
use e7lift_core::scalar::{rat, Int, Rational, Scalar};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn small_scalar() -> impl Strategy<Value = Scalar> {
    (
        small_rational(),
        small_rational(),
        prop::sample::select(vec![2i64, 3, 5, -1, -3, 6]),
    )
        .prop_map(|(a, b, d)| {
            Scalar::from_rational(a) + Scalar::from_rational(b) * Scalar::sqrt_int(d)
        })
}

fn octonion() -> impl Strategy<Value = Octonion> {
    prop::collection::vec((-6i64..=6, 1i64..=2), 8).prop_map(|cs| {
        let mut o = Octonion::zero();
        for (i, (n, d)) in cs.into_iter().enumerate() {
            o.coords[i] = rat(n, d);
        }
        o
    })
}

fn jordan() -> impl Strategy<Value = JordanElement> {
    (
        -4i64..=4,
        -4i64..=4,
        -4i64..=4,
        octonion(),
        octonion(),
        octonion(),
    )
        .prop_map(|(a, b, c, c1, c2, c3)| JordanElement {
            a: rat(a, 1),
            b: rat(b, 1),
            c: rat(c, 1),
            c1,
            c2,
            c3,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_mul_inverse(x in small_scalar()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(&x * &x.inv(), Scalar::one());
    }

    #[test]
    fn scalar_distributes(x in small_scalar(), y in small_scalar(), z in small_scalar()) {
        let lhs = &x * &(&y + &z);
        let rhs = &(&x * &y) + &(&x * &z);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_conjugation_is_multiplicative(x in small_scalar(), y in small_scalar()) {
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert!((&x * &x.conj()).is_real());
    }

    #[test]
    fn octonion_composition(x in octonion(), y in octonion()) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn octonion_alternative(x in octonion(), y in octonion()) {
        prop_assert_eq!(&x * &(&x * &y), &(&x * &x) * &y);
        prop_assert_eq!(&(&y * &x) * &x, &y * &(&x * &x));
    }

    #[test]
    fn jordan_adjugate(b in jordan()) {
        let adj = b.adj();
        let det = b.det();
        prop_assert_eq!(adj.adj(), b.scale(&det));
        prop_assert_eq!(b.pair(&adj), rat(3, 1) * &det);
        prop_assert_eq!(adj.det(), &det * &det);
    }

    #[test]
    fn translation_det_invariance(
        a in -4i64..=4, bb in -4i64..=4, w in octonion(),
        x0 in octonion(), x1 in octonion(), r in small_rational()
    ) {
        let block = Jordan2 { a: rat(a, 1), b: rat(bb, 1), w };
        let moved = translate_v1(&[x0, x1], &block, &r);
        prop_assert_eq!(moved.det(), &r * block.det());
    }
}

fn level11() -> NewformRecord {
    let a = [
        1i64, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2, 4, 4, -1, -4, -2, 4, 0, 2, 2, -2, -1, 0, -4,
        -8, 5, -4, 0, 2,
    ];
    NewformRecord {
        level: 11,
        weight: 2,
        character: Character::Trivial,
        coefficients: a.iter().map(|&x| rat(x, 1)).collect(),
        precision_bits: None,
        atkin_lehner: [(11u64, -1i8)].into_iter().collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn square_class_relation(a in 1u64..=5, r in 1u64..=29) {
        let ctx = CoeffContext::new(level11(), 30).unwrap();
        let n = Rational::from_integer(Int::from(a * a * r));
        let lhs = ctx.c_value(&n).unwrap();
        let rhs = &ctx.mu_f(&rat(a as i64, 1)).unwrap().inv()
            * &ctx.c_value(&rat(r as i64, 1)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn c_vanishes_off_integers(num in 1i64..=40, den in 2i64..=7) {
        let ctx = CoeffContext::new(level11(), 50).unwrap();
        let q = rat(num, den);
        if !q.is_integer() {
            prop_assert_eq!(ctx.c_value(&q).unwrap(), Scalar::zero());
        }
    }
}
