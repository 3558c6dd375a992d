use ngp_core::invariants::vm_basis;
use ngp_core::linalg;
use ngp_core::pairs::{
    act, harmonic_invariant_dim, harmonic_projection, hom_dimension, invariant_subspace, is_harmonic, isotypic_components, make_pair,
    express, MonomialIndex, PairDescriptor, PairId,
};
use ngp_core::poly::compositions;
use ngp_core::{Error, Exponents, MultiPoly, Multidegree, Rational, Scalar, VarKind};

/// Oracle: the joint kernel of every generator on all monomials of
/// multidegree `d`, with no weight frame.
fn joint_kernel(pair: &PairDescriptor, d: &Multidegree) -> Vec<MultiPoly> {
    let vars = pair.vars();
    let mut monos = Vec::new();
    for a in compositions(pair.kappa, d.v) {
        for b in compositions(pair.kappa, d.vbar) {
            for c in compositions(pair.nu1, d.z) {
                let e: Exponents = a.iter().chain(b.iter()).chain(c.iter()).copied().collect();
                monos.push(e);
            }
        }
    }
    let idx = MonomialIndex::from_monomials(monos.iter().cloned());
    let mut rows: std::collections::BTreeMap<(usize, Exponents), Vec<(usize, Scalar)>> = Default::default();
    for (col, e) in monos.iter().enumerate() {
        let m = MultiPoly::monomial(vars, e.clone(), Scalar::ONE);
        for (g, gen) in pair.generators.iter().enumerate() {
            for (f, c) in act(gen, &m).terms() {
                rows.entry((g, f.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let rows: Vec<_> = rows.into_values().collect();
    linalg::kernel(&rows, monos.len()).iter().map(|v| idx.from_sparse(vars, v)).collect()
}

fn all_pairs() -> Vec<PairDescriptor> {
    PairId::ALL.iter().map(|id| make_pair(id.line, id.n).unwrap()).collect()
}

#[test]
fn pair_ids_parse_and_reject() {
    let id: PairId = "L8:n=3".parse().unwrap();
    assert_eq!(id, PairId { line: 8, n: 3 });
    assert_eq!("L7:n=2".parse::<PairId>(), Err(Error::UnsupportedPair { line: 7, n: 2 }));
    assert!(matches!("L6n=2".parse::<PairId>(), Err(Error::Schema(_))));
    assert!(matches!(make_pair(6, 4), Err(Error::UnsupportedPair { .. })));
}

#[test]
fn descriptor_dimensions() {
    let dims: Vec<(usize, usize, usize)> = all_pairs().iter().map(|p| (p.kappa, p.nu1, p.d0)).collect();
    // L6: κ = n, 𝔷₀ = su(n); L8: κ = 2n, 𝔷₀ = su(2)
    assert_eq!(dims, vec![(2, 3, 2), (3, 8, 2), (4, 3, 3), (6, 3, 3)]);
    for p in all_pairs() {
        for g in &p.generators {
            assert!(g.xv.is_anti_hermitian(), "{} {}", p.id, g.name);
        }
    }
}

#[test]
fn invariant_subspace_matches_joint_kernel() {
    for p in all_pairs() {
        for d in [Multidegree::new(1, 1, 0, 0), Multidegree::new(1, 1, 1, 0), Multidegree::new(0, 0, 2, 0), Multidegree::new(2, 2, 0, 0), Multidegree::new(1, 0, 1, 0)] {
            if p.id.n == 3 && p.id.line == 6 && d.z > 1 {
                continue;
            }
            let fast = invariant_subspace(&p, &d);
            let oracle = joint_kernel(&p, &d);
            assert_eq!(fast.dim(), oracle.len(), "{} {}", p.id, d);
            for v in &oracle {
                assert!(express(&fast.vectors, v).is_some(), "{} {}: oracle vector outside", p.id, d);
            }
        }
    }
}

#[test]
fn z_only_quadratic_invariants_on_su3() {
    // su(3) has one quadratic Casimir
    let p = make_pair(6, 3).unwrap();
    let d = Multidegree::new(0, 0, 2, 0);
    assert_eq!(invariant_subspace(&p, &d).dim(), 1);
    assert_eq!(invariant_subspace(&p, &Multidegree::new(0, 0, 3, 0)).dim(), 1);
}

#[test]
fn harmonic_invariants_only_at_k_equal_m() {
    for p in all_pairs().iter().filter(|p| p.id != (PairId { line: 8, n: 3 })) {
        for m in 0..=2 {
            for k in 0..=m {
                assert_eq!(harmonic_invariant_dim(p, m, k), usize::from(k == m), "{} m={} k={}", p.id, m, k);
            }
        }
    }
}

#[test]
fn harmonic_projection_by_hand() {
    let p = make_pair(6, 2).unwrap();
    let vars = p.vars();
    let v1 = MultiPoly::var(vars, VarKind::V, 0);
    let vb1 = MultiPoly::var(vars, VarKind::VBar, 0);
    let vb2 = MultiPoly::var(vars, VarKind::VBar, 1);
    let v2 = MultiPoly::var(vars, VarKind::V, 1);
    let r1 = &(&v1 * &vb1) + &(&v2 * &vb2);
    // v₁v̄₂ is already harmonic
    let h = &v1 * &vb2;
    assert_eq!(harmonic_projection(&p, &h, 1).unwrap(), h);
    // v₁v̄₁ − ⟨v₁v̄₁, r₁⟩/‖r₁‖² r₁ = v₁v̄₁ − r₁/2
    let want = &(&v1 * &vb1) - &r1.scale(&Scalar::real(Rational::new(1, 2)));
    assert_eq!(harmonic_projection(&p, &(&v1 * &vb1), 1).unwrap(), want);
    assert!(is_harmonic(&p, &want));
    assert!(!is_harmonic(&p, &r1));
}

#[test]
fn casimir_blocks_on_line_8() {
    let dims = |line, n, s| -> Vec<(Option<u32>, usize)> {
        isotypic_components(&make_pair(line, n).unwrap(), s).unwrap().iter().map(|b| (b.label.i, b.dim())).collect()
    };
    assert_eq!(dims(8, 2, 0), vec![(Some(0), 1)]);
    assert_eq!(dims(8, 2, 1), vec![(Some(1), 4)]);
    assert_eq!(dims(8, 2, 2), vec![(Some(2), 9), (Some(0), 1)]);
    assert_eq!(dims(8, 3, 1), vec![(Some(1), 6)]);
    assert_eq!(dims(8, 3, 2), vec![(Some(2), 18), (Some(0), 3)]);
    // line 6 keeps P^{s,0} whole
    assert_eq!(dims(6, 3, 2), vec![(None, 6)]);
}

#[test]
fn vm_modules_are_pairwise_inequivalent() {
    for (line, n) in [(6, 2), (8, 2)] {
        let p = make_pair(line, n).unwrap();
        let v: Vec<_> = (1..=2).map(|m| vm_basis(&p, m).unwrap().subspace(&p)).collect();
        assert_eq!(hom_dimension(&p, &v[0], &v[0]).unwrap(), 1);
        assert_eq!(hom_dimension(&p, &v[0], &v[1]).unwrap(), 0);
        assert_eq!(hom_dimension(&p, &v[1], &v[1]).unwrap(), 1);
    }
}
