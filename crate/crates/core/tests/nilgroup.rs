use ngp_core::nilgroup::{build_mm, build_um, group_vars, symmetrize, vector_fields, DiffOp, Letter, Pbw};
use ngp_core::pairs::make_pair;
use ngp_core::{Error, MultiPoly, Rational, Scalar, VarKind, VarSpace};

const K: usize = 2;

fn z(j: usize) -> Pbw {
    Pbw::letter(K, Letter::Z(j))
}

fn zb(j: usize) -> Pbw {
    Pbw::letter(K, Letter::Zb(j))
}

fn half() -> Scalar {
    Scalar::real(Rational::new(1, 2))
}

fn vv() -> VarSpace {
    VarSpace::new(K, 0, 0, 0)
}

#[test]
fn derivative_then_multiplication() {
    // ∂₁ ∘ v₁ = v₁∂₁ + 1
    let g = group_vars(K);
    let v1 = MultiPoly::var(g, VarKind::V, 0);
    let d1 = DiffOp::partial(K, g.index(VarKind::V, 0));
    let lhs = d1.compose(&DiffOp::mult(&v1));
    let rhs = DiffOp::mult(&v1).compose(&d1).add(&DiffOp::identity(K));
    assert_eq!(lhs, rhs);
}

#[test]
fn heisenberg_commutators() {
    let (zf, zbf, t) = vector_fields(K);
    let i_half = Scalar::new(Rational::ZERO, Rational::new(1, 2));
    for j in 0..K {
        for k in 0..K {
            let c = zf[j].compose(&zbf[k]).sub(&zbf[k].compose(&zf[j]));
            let want = if j == k { t.scale(&i_half) } else { DiffOp::zero(K) };
            assert_eq!(c, want, "[Z{}, Zb{}]", j, k);
            assert!(zf[j].compose(&zf[k]).sub(&zf[k].compose(&zf[j])).is_zero());
        }
        assert!(zf[j].compose(&t).sub(&t.compose(&zf[j])).is_zero());
    }
    // the same relation in the normal ordered algebra
    let c = z(0).mul(&zb(0)).sub(&zb(0).mul(&z(0)));
    assert_eq!(c, Pbw::letter(K, Letter::T).scale(&i_half));
}

#[test]
fn symmetrization_of_low_degree_monomials() {
    let one = MultiPoly::one(vv());
    let v1 = MultiPoly::var(vv(), VarKind::V, 0);
    let vb1 = MultiPoly::var(vv(), VarKind::VBar, 0);
    assert_eq!(symmetrize(&one).unwrap(), Pbw::one(K));
    assert_eq!(symmetrize(&v1).unwrap(), z(0));
    // ½(Z₁Z̄₁ + Z̄₁Z₁)
    let want = z(0).mul(&zb(0)).add(&zb(0).mul(&z(0))).scale(&half());
    assert_eq!(symmetrize(&(&v1 * &vb1)).unwrap(), want);
}

/// Oracle: the average over all orderings of the letters, built by multiplication.
#[test]
fn symmetrization_averages_orderings() {
    let v1 = MultiPoly::var(vv(), VarKind::V, 0);
    let vb1 = MultiPoly::var(vv(), VarKind::VBar, 0);
    let vb2 = MultiPoly::var(vv(), VarKind::VBar, 1);
    let words = [
        z(0).mul(&z(0)).mul(&zb(0)),
        z(0).mul(&zb(0)).mul(&z(0)),
        zb(0).mul(&z(0)).mul(&z(0)),
    ];
    let avg = words.iter().fold(Pbw::zero(K), |a, w| a.add(w)).scale(&Scalar::real(Rational::new(1, 3)));
    assert_eq!(symmetrize(&(&(&v1 * &v1) * &vb1)).unwrap(), avg);

    let perms = [
        z(0).mul(&zb(0)).mul(&zb(1)),
        z(0).mul(&zb(1)).mul(&zb(0)),
        zb(0).mul(&z(0)).mul(&zb(1)),
        zb(0).mul(&zb(1)).mul(&z(0)),
        zb(1).mul(&z(0)).mul(&zb(0)),
        zb(1).mul(&zb(0)).mul(&z(0)),
    ];
    let avg = perms.iter().fold(Pbw::zero(K), |a, w| a.add(w)).scale(&Scalar::real(Rational::new(1, 6)));
    assert_eq!(symmetrize(&(&(&v1 * &vb1) * &vb2)).unwrap(), avg);
}

#[test]
fn symmetrization_rejects_z_variables() {
    let vars = VarSpace::new(K, 3, 0, 0);
    let z1 = MultiPoly::var(vars, VarKind::Z, 0);
    assert!(matches!(symmetrize(&z1), Err(Error::Degree(_))));
}

#[test]
fn adjoints_of_letters() {
    // Z_j* = −Z̄_j and T* = −T for real left-invariant fields
    assert_eq!(z(1).adjoint(), zb(1).scale(&Scalar::int(-1)));
    let t = Pbw::letter(K, Letter::T);
    assert_eq!(t.adjoint(), t.scale(&Scalar::int(-1)));
    // (AB)* = B*A*
    let a = z(0).mul(&zb(1)).add(&t.scale(&Scalar::I));
    let b = zb(0).mul(&zb(0));
    assert_eq!(a.mul(&b).adjoint(), b.adjoint().mul(&a.adjoint()));
}

/// Oracle: integration by parts on the differential operator side.
#[test]
fn pbw_adjoint_matches_formal_adjoint() {
    let samples = [
        z(0).mul(&zb(0)),
        zb(1).mul(&z(0)).mul(&z(1)).scale(&Scalar::new(Rational::from_int(2), Rational::from_int(-1))),
        Pbw::letter(K, Letter::T).mul(&z(1)),
    ];
    for p in samples {
        assert_eq!(p.adjoint().to_diffop(), p.to_diffop().formal_adjoint(), "{}", p);
        assert_eq!(p.to_diffop().to_pbw().unwrap(), p);
    }
}

#[test]
fn homogeneity_of_symmetrized_elements() {
    let v1 = MultiPoly::var(vv(), VarKind::V, 0);
    let vb2 = MultiPoly::var(vv(), VarKind::VBar, 1);
    let p = &(&v1 * &v1) * &vb2;
    assert_eq!(symmetrize(&p).unwrap().doubled_homogeneity(), Some(3));
    assert_eq!(z(0).mul(&zb(0)).doubled_homogeneity(), Some(2));
    assert_eq!(z(0).add(&Pbw::one(K)).doubled_homogeneity(), None);
}

#[test]
fn mm_construction() {
    let p = make_pair(6, 2).unwrap();
    assert!(matches!(build_mm(&p, 0), Err(Error::Degree(_))));
    assert!(matches!(build_mm(&p, 4), Err(Error::Degree(_))));
    let mm = build_mm(&p, 1).unwrap();
    assert_eq!(mm.dim(), 3);
    assert_eq!(build_mm(&make_pair(8, 2).unwrap(), 2).unwrap().dim(), 5);
    for (line, n) in [(6, 2), (8, 2)] {
        let u = build_um(&make_pair(line, n).unwrap(), 1).unwrap();
        assert_eq!(u.adjoint(), u);
    }
}
