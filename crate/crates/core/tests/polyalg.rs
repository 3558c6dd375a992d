use ngp_core::poly::compositions;
use ngp_core::{Exponents, MultiPoly, Multidegree, Rational, Scalar, VarKind, VarSpace};
use proptest::prelude::*;

fn vars() -> VarSpace {
    VarSpace::new(2, 1, 0, 0)
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=5, -6i64..=6, 1i64..=5).prop_map(|(a, b, c, d)| Scalar::new(Rational::new(a, b), Rational::new(c, d)))
}

/// Sparse polynomials in (v1, v2, v̄1, v̄2, z1) of total degree ≤ 3.
fn poly_strategy() -> impl Strategy<Value = MultiPoly> {
    let monos: Vec<Exponents> = (0..=3).flat_map(|d| compositions(5, d)).collect();
    let n = monos.len();
    proptest::collection::vec((0..n, scalar_strategy()), 0..6).prop_map(move |ts| {
        let mut p = MultiPoly::zero(vars());
        for (i, c) in ts {
            p.add_term(monos[i].clone(), c);
        }
        p
    })
}

fn point_strategy() -> impl Strategy<Value = Vec<Scalar>> {
    proptest::collection::vec(scalar_strategy(), 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(vars()), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly_strategy(), b in poly_strategy(), x in point_strategy()) {
        prop_assert_eq!((&a * &b).evaluate(&x), &a.evaluate(&x) * &b.evaluate(&x));
        prop_assert_eq!((&a + &b).evaluate(&x), &a.evaluate(&x) + &b.evaluate(&x));
    }

    #[test]
    fn leibniz_rule(a in poly_strategy(), b in poly_strategy(), i in 0usize..5) {
        let lhs = (&a * &b).derivative(i);
        let rhs = &(&a.derivative(i) * &b) + &(&a * &b.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_is_an_involutive_antilinear_ring_map(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        prop_assert_eq!(a.scale(&Scalar::I).conjugate(), a.conjugate().scale(&-Scalar::I));
    }

    #[test]
    fn fischer_pairing_is_hermitian_and_positive(a in poly_strategy(), b in poly_strategy()) {
        let ab = a.fischer_inner(&b).unwrap();
        let ba = b.fischer_inner(&a).unwrap();
        prop_assert_eq!(ab, ba.conj());
        let n = a.fischer_norm_sqr();
        prop_assert!(!n.is_negative());
        prop_assert_eq!(n.is_zero(), a.is_zero());
    }

    #[test]
    fn graded_components_sum_back(a in poly_strategy()) {
        let mut sum = MultiPoly::zero(vars());
        for (d, c) in a.components() {
            prop_assert!(c.is_homogeneous());
            prop_assert_eq!(c.multidegrees(), vec![d]);
            sum = &sum + &c;
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn substitution_matches_evaluation(a in poly_strategy(), x in point_strategy()) {
        // substitute constants, then evaluate anywhere
        let target = vars();
        let images: Vec<MultiPoly> = x.iter().map(|c| MultiPoly::constant(target, c.clone())).collect();
        let s = a.substitute(&images, target);
        prop_assert_eq!(s.evaluate(&[Scalar::ZERO; 5]), a.evaluate(&x));
    }
}

/// Hand oracle: `∂/∂v₁ (v₁² v̄₂ z) = 2 v₁ v̄₂ z`.
#[test]
fn derivative_example() {
    let v = vars();
    let v1 = MultiPoly::var(v, VarKind::V, 0);
    let vb2 = MultiPoly::var(v, VarKind::VBar, 1);
    let z = MultiPoly::var(v, VarKind::Z, 0);
    let p = &(&(&v1 * &v1) * &vb2) * &z;
    let d = p.derivative(v.index(VarKind::V, 0));
    assert_eq!(d, (&(&v1 * &vb2) * &z).scale(&Scalar::int(2)));
}

#[test]
fn fischer_weights_are_factorials() {
    let v = vars();
    let v1 = MultiPoly::var(v, VarKind::V, 0);
    let z = MultiPoly::var(v, VarKind::Z, 0);
    // ‖v₁³ z²‖² = 3!·2! = 12
    let p = &v1.pow(3) * &z.pow(2);
    assert_eq!(p.fischer_norm_sqr(), Rational::from_int(12));
    // conjugate-linear in the second slot
    let ip = p.fischer_inner(&p.scale(&Scalar::I)).unwrap();
    assert_eq!(ip, Scalar::new(Rational::ZERO, Rational::from_int(-12)));
}

#[test]
fn multidegree_of_mixed_monomial() {
    let v = vars();
    let e: Exponents = Exponents::from_slice(&[1, 2, 0, 1, 3]);
    let p = MultiPoly::monomial(v, e, Scalar::ONE);
    assert_eq!(p.multidegrees(), vec![Multidegree::new(3, 1, 3, 0)]);
    assert_eq!(p.total_degree(), 7);
}

#[test]
fn mismatched_spaces_are_rejected() {
    let a = MultiPoly::one(VarSpace::new(1, 0, 0, 0));
    let b = MultiPoly::one(VarSpace::new(2, 0, 0, 0));
    assert!(a.checked_add(&b).is_err());
    assert!(a.checked_mul(&b).is_err());
    assert!(a.fischer_inner(&b).is_err());
}

#[test]
fn rational_overflow_is_exact() {
    let big = Rational::from_int(i64::MAX);
    let sq = &big * &big;
    let back = &sq / &big;
    assert_eq!(back, big);
    let s: Rational = "170141183460469231722463931679029329921/3".parse().unwrap();
    assert_eq!(&s * &Rational::from_int(3), "170141183460469231722463931679029329921".parse().unwrap());
}
