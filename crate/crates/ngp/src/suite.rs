//! The `verify all` suite: one named check per exact statement, run per pair.

use std::collections::BTreeMap;
use std::sync::Arc;

use ngp_core::bargmann::{
    self, admissible, compute_um, dpi_matrix_diffop, dsigma_geom, fock_generator, line6_product, mm_action, spectrum_points, um_min_smax,
    xi_weights,
};
use ngp_core::invariants::{
    canonical_basis, decompose_invariant_ordered, equivariant_components, fundamental_invariants, hadamard_split,
    monomial_product, p_tilde, plain_monomials, r_polynomial, vm_basis, weighted_exponents, PivotOrder, DEGREE_CAP,
};
use ngp_core::linalg::Matrix;
use ngp_core::nilgroup::{self, build_mm, symmetrize, um_from, vector_fields, DiffOp};
use ngp_core::pairs::{
    act, harmonic_invariant_dim, hom_dimension, invariant_subspace, is_harmonic, lift_v, poly_rank, restrict_v, PairDescriptor, PairId,
};
use ngp_core::{Error, MultiPoly, Rational, Scalar, VarKind};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{self, DpiCache};
use crate::error::{CliError, CliResult};
use crate::report::{run_check, CheckResult, Outcome, Report};
use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Depth {
    pub degree: u32,
    pub smax: u32,
    pub mmax: u32,
}

impl Depth {
    pub const DEFAULT: Depth = Depth { degree: 8, smax: 4, mmax: 2 };
    pub const DEEP: Depth = Depth { degree: 10, smax: 6, mmax: 3 };

    fn params(&self) -> BTreeMap<String, Value> {
        let mut p = BTreeMap::new();
        p.insert("degree".into(), json!(self.degree));
        p.insert("smax".into(), json!(self.smax));
        p.insert("mmax".into(), json!(self.mmax));
        p
    }
}

pub struct Ctx {
    pub id: PairId,
    pub pair: Arc<PairDescriptor>,
    pub depth: Depth,
    pub dpi: DpiCache,
}

impl Ctx {
    pub fn new(id: PairId, depth: Depth) -> Ctx {
        Ctx { id, pair: cache::pair(id), depth, dpi: DpiCache::default() }
    }

    fn rng(&self, check: &str) -> rand_chacha::ChaCha8Rng {
        sample::rng_for(check, &self.id.to_string())
    }
}

type CheckFn = fn(&Ctx) -> CliResult<Outcome>;

/// Every check, in report order.
pub const CHECKS: &[(&str, CheckFn)] = &[
    ("bargmann.homomorphism", bargmann_homomorphism),
    ("bargmann.metaplectic", bargmann_metaplectic),
    ("bargmann.unitarity", bargmann_unitarity),
    ("decompose.free_generation", decompose_free_generation),
    ("decompose.hadamard_split", decompose_hadamard),
    ("decompose.roundtrip", decompose_roundtrip),
    ("harmonic.equivariant_components", harmonic_equivariant_components),
    ("harmonic.inequivalence", harmonic_inequivalence),
    ("harmonic.invariant_dims", harmonic_invariant_dims),
    ("harmonic.ptilde_nonzero", harmonic_ptilde),
    ("harmonic.wm_orthogonality", harmonic_wm_orthogonality),
    ("invariants.catalogue", invariants_catalogue),
    ("mm.admissibility", mm_admissibility),
    ("mm.block_structure", mm_block_structure),
    ("nilgroup.equivariance", nilgroup_equivariance),
    ("nilgroup.homogeneity", nilgroup_homogeneity),
    ("nilgroup.operator_algebra", nilgroup_operator_algebra),
    ("spectrum.dilation", spectrum_dilation),
    ("spectrum.eigenvalue_law", spectrum_eigenvalue_law),
    ("um.division", um_division),
    ("um.recovery", um_recovery),
    ("um.vanishing", um_vanishing),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs one named check on one pair.
pub fn run_named(name: &str, id: PairId, depth: Depth) -> CliResult<CheckResult> {
    let (_, f) = CHECKS.iter().find(|(n, _)| *n == name).ok_or_else(|| CliError::Usage(format!("unknown check {:?}", name)))?;
    let ctx = Ctx::new(id, depth);
    Ok(run_check(name, &id.to_string(), depth.params(), || f(&ctx)))
}

/// Runs every check on every pair concurrently; the report is sorted.
pub fn verify_all(pairs: &[PairId], depth: Depth) -> Report {
    let ctxs: Vec<Ctx> = pairs.iter().map(|&id| Ctx::new(id, depth)).collect();
    let jobs: Vec<(&Ctx, &str, CheckFn)> = ctxs.iter().flat_map(|c| CHECKS.iter().map(move |(n, f)| (c, *n, *f))).collect();
    let results: Vec<CheckResult> =
        jobs.par_iter().map(|(c, n, f)| run_check(n, &c.id.to_string(), depth.params(), || f(c))).collect();
    Report::new("verify all", results)
}

fn s(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

fn lambdas(xs: &[(i64, i64)]) -> Vec<Rational> {
    xs.iter().map(|&(p, q)| Rational::new(p, q)).collect()
}

fn first_diff(a: &Matrix, b: &Matrix) -> Option<Value> {
    if a.shape() != b.shape() {
        return Some(json!({"shape": [a.shape(), b.shape()]}));
    }
    a.first_difference(b).map(|(i, j, x, y)| json!({"row": i, "col": j, "lhs": s(&x), "rhs": s(&y)}))
}

// ---- invariants -------------------------------------------------------------

fn invariants_catalogue(c: &Ctx) -> CliResult<Outcome> {
    let cat = fundamental_invariants(&c.pair);
    let mut expected = BTreeMap::new();
    let mut actual = BTreeMap::new();
    let mut witness = None;
    let kinds = [("r", &cat.r), ("q", &cat.q), ("p", &cat.p)];
    let names = cat.named();
    let mut k = 0;
    for (kind, list) in kinds {
        for p in list.iter() {
            let name = names[k].name.clone();
            k += 1;
            let killed = c.pair.generators.iter().all(|g| act(g, p).is_zero());
            let dv = p.degree_in(VarKind::V);
            let dvb = p.degree_in(VarKind::VBar);
            let dz = p.degree_in(VarKind::Z);
            let graded = match kind {
                "r" => dz == 0 && dv > 0 && dv == dvb,
                "q" => dv == 0 && dvb == 0 && dz > 0,
                _ => dv > 0 && dv == dvb && dz > 0,
            };
            expected.insert(name.clone(), json!({"invariant": true, "kind_grading": true}));
            actual.insert(name.clone(), json!({"invariant": killed, "kind_grading": graded, "degree": [dv, dvb, dz]}));
            if (!killed || !graded) && witness.is_none() {
                witness = Some(json!({"invariant": name, "display": p.to_string()}));
            }
        }
    }
    let ok = witness.is_none();
    Ok(Outcome { ok, expected: json!(expected), actual: json!(actual), witness })
}

// ---- harmonic ---------------------------------------------------------------

fn harmonic_invariant_dims(c: &Ctx) -> CliResult<Outcome> {
    let top = c.depth.mmax + 1;
    let mut expected = Vec::new();
    let mut actual = Vec::new();
    let mut witness = None;
    for m in 0..=top {
        let mut er = Vec::new();
        let mut ar = Vec::new();
        for k in 0..=top {
            let d = harmonic_invariant_dim(&c.pair, m, k);
            let want = match k.cmp(&m) {
                std::cmp::Ordering::Less => json!(0),
                std::cmp::Ordering::Equal => json!(1),
                std::cmp::Ordering::Greater => Value::Null,
            };
            if !want.is_null() && want != json!(d) && witness.is_none() {
                witness = Some(json!({"m": m, "k": k, "dim": d}));
            }
            er.push(want);
            ar.push(d);
        }
        expected.push(er);
        actual.push(ar);
    }
    Ok(Outcome { ok: witness.is_none(), expected: json!(expected), actual: json!(actual), witness })
}

fn harmonic_inequivalence(c: &Ctx) -> CliResult<Outcome> {
    let top = c.depth.mmax + 1;
    let spaces = (1..=top).map(|m| Ok(vm_basis(&c.pair, m)?.subspace(&c.pair))).collect::<CliResult<Vec<_>>>()?;
    let mut actual = Vec::new();
    let mut expected = Vec::new();
    for (i, a) in spaces.iter().enumerate() {
        let mut row = Vec::new();
        for b in &spaces {
            row.push(hom_dimension(&c.pair, a, b)?);
        }
        actual.push(row);
        expected.push((0..spaces.len()).map(|j| usize::from(i == j)).collect::<Vec<_>>());
    }
    Ok(Outcome::compare(json!(expected), json!(actual)))
}

fn harmonic_ptilde(c: &Ctx) -> CliResult<Outcome> {
    let cat = fundamental_invariants(&c.pair);
    let ones = vec![1; cat.p.len()];
    let mut actual = BTreeMap::new();
    let mut witness = None;
    for m in 1..=c.depth.mmax + 1 {
        for alpha in weighted_exponents(&ones, m) {
            let pt = p_tilde(&c.pair, &cat, &alpha, None)?;
            let nonzero = !pt.is_zero();
            let harmonic = is_harmonic(&c.pair, &pt);
            let invariant = c.pair.generators.iter().all(|g| act(g, &pt).is_zero());
            let key = format!("{:?}", alpha);
            if !(nonzero && harmonic && invariant) && witness.is_none() {
                witness = Some(json!({"alpha": alpha, "nonzero": nonzero, "harmonic": harmonic, "invariant": invariant}));
            }
            actual.insert(key, json!([nonzero, harmonic, invariant]));
        }
    }
    let expected: BTreeMap<_, _> = actual.keys().map(|k| (k.clone(), json!([true, true, true]))).collect();
    Ok(Outcome { ok: witness.is_none(), expected: json!(expected), actual: json!(actual), witness })
}

fn harmonic_equivariant_components(c: &Ctx) -> CliResult<Outcome> {
    let cat = fundamental_invariants(&c.pair);
    let ones = vec![1; cat.p.len()];
    let mut actual = BTreeMap::new();
    let mut expected = BTreeMap::new();
    let mut witness = None;
    for m in 1..=c.depth.mmax.min(3) {
        let vm = vm_basis(&c.pair, m)?;
        for alpha in weighted_exponents(&ones, m) {
            let ec = equivariant_components(&c.pair, &alpha)?;
            let ok = ec.reconstruct(&c.pair) == ec.ptilde && ec.vm.dim() == vm.dim();
            let key = format!("{:?}", alpha);
            expected.insert(key.clone(), json!({"dim": vm.dim(), "reconstructs": true}));
            actual.insert(key.clone(), json!({"dim": ec.vm.dim(), "reconstructs": ok}));
            if !ok && witness.is_none() {
                witness = Some(json!({"alpha": alpha}));
            }
        }
    }
    Ok(Outcome { ok: witness.is_none(), expected: json!(expected), actual: json!(actual), witness })
}

/// `W_m ⟂ q·𝒫`: each `b_j` is Fischer-orthogonal to every multiple of a
/// `z`-only invariant. Needs an orthonormal z-basis, so L6:n=3 is exempt.
fn harmonic_wm_orthogonality(c: &Ctx) -> CliResult<Outcome> {
    if c.id == (PairId { line: 6, n: 3 }) {
        return Ok(Outcome::pass(json!("not applicable: z-basis is not orthonormal"), json!("skipped")));
    }
    let cat = fundamental_invariants(&c.pair);
    let vars = c.pair.vars();
    let mut checked = 0usize;
    for m in 1..=c.depth.mmax.min(2) {
        let mut alpha = vec![0; cat.p.len()];
        alpha[0] = m;
        let ec = equivariant_components(&c.pair, &alpha)?;
        for (qi, q) in cat.q.iter().enumerate() {
            let dq = q.degree_in(VarKind::Z);
            if dq > m {
                continue;
            }
            for e in ngp_core::poly::compositions(vars.z, m - dq) {
                let mut mono = MultiPoly::one(vars);
                for (j, &x) in e.iter().enumerate() {
                    mono = &mono * &MultiPoly::var(vars, VarKind::Z, j).pow(x as u32);
                }
                let w = q * &mono;
                for (j, b) in ec.b.iter().enumerate() {
                    let ip = b.fischer_inner(&w)?;
                    checked += 1;
                    if !ip.is_zero() {
                        return Ok(Outcome::fail(
                            json!("all zero"),
                            json!(checked),
                            json!({"m": m, "q": cat.q_names[qi], "j": j, "inner": s(&ip)}),
                        ));
                    }
                }
            }
        }
    }
    Ok(Outcome::pass(json!("all zero"), json!({"products_checked": checked})))
}

// ---- decompose --------------------------------------------------------------

fn decompose_free_generation(c: &Ctx) -> CliResult<Outcome> {
    let cat = fundamental_invariants(&c.pair);
    let mut rows = Vec::new();
    let mut witness = None;
    for d in sample::invariant_degrees(c.depth.degree) {
        let plain: Vec<MultiPoly> = plain_monomials(&c.pair, &cat, &d).into_iter().map(|(_, p)| p).collect();
        let count = plain.len();
        let rank = poly_rank(&plain);
        let dim = invariant_subspace(&c.pair, &d).dim();
        let canon = canonical_basis(&c.pair, &d)?.len();
        if !(count == rank && rank == dim && canon == dim) && witness.is_none() {
            witness = Some(json!({"degree": d.to_string(), "count": count, "rank": rank, "dim": dim, "canonical": canon}));
        }
        rows.push(json!([d.to_string(), dim]));
    }
    Ok(Outcome { ok: witness.is_none(), expected: json!("count = rank = dim = #canonical"), actual: json!(rows), witness })
}

fn decompose_roundtrip(c: &Ctx) -> CliResult<Outcome> {
    let cat = fundamental_invariants(&c.pair);
    let mut rng = c.rng("decompose.roundtrip");
    let count = if c.depth == Depth::DEEP { 20 } else { 10 };
    let cap = c.depth.degree.max(DEGREE_CAP);
    for k in 0..count {
        let g = sample::invariant(&mut rng, &c.pair, &cat, c.depth.degree, None);
        let dec = decompose_invariant_ordered(&c.pair, &g, PivotOrder::Lexicographic, cap)?;
        let back = dec.reconstruct(&c.pair)?;
        if back != g {
            return Ok(Outcome::fail(json!(count), json!(k), json!({"sample": k, "input": g.to_string(), "remainder": (&g - &back).to_string()})));
        }
        let rev = decompose_invariant_ordered(&c.pair, &g, PivotOrder::Reversed, cap)?;
        if rev.terms != dec.terms {
            return Ok(Outcome::fail(json!(count), json!(k), json!({"sample": k, "pivot_dependent": true})));
        }
    }
    Ok(Outcome::pass(json!(count), json!(count)))
}

fn decompose_hadamard(c: &Ctx) -> CliResult<Outcome> {
    let cat = fundamental_invariants(&c.pair);
    let vars = c.pair.vars();
    let mut rng = c.rng("decompose.hadamard_split");
    let mut done = 0;
    for k in 0..=3u32 {
        for _ in 0..3 {
            let g = sample::invariant(&mut rng, &c.pair, &cat, c.depth.degree.min(8), Some(k));
            let split = hadamard_split(&c.pair, &g, k)?;
            let mut back = MultiPoly::zero(vars);
            for ((alpha, beta), gamma) in &split {
                let pt = p_tilde(&c.pair, &cat, alpha, None)?;
                let zpart = &pt * &monomial_product(vars, &cat.q, beta);
                back = &back + &(&zpart * &r_polynomial(&cat, gamma));
                let bracket: u32 = zpart.degree_in(VarKind::Z);
                if bracket != k {
                    return Ok(Outcome::fail(json!(k), json!(bracket), json!({"alpha": alpha, "beta": beta})));
                }
            }
            if back != g {
                return Ok(Outcome::fail(json!("exact reconstruction"), json!("mismatch"), json!({"k": k, "input": g.to_string()})));
            }
            done += 1;
        }
    }
    let bad = hadamard_split(&c.pair, &(&cat.q[0] + &cat.p[0]), 1);
    if !matches!(bad, Err(Error::Degree(_))) {
        return Ok(Outcome::fail(json!("degree error"), json!(format!("{:?}", bad.map(|m| m.len()))), json!("mixed z-degree accepted")));
    }
    Ok(Outcome::pass(json!(done), json!(done)))
}

// ---- nilgroup ---------------------------------------------------------------

fn nilgroup_operator_algebra(c: &Ctx) -> CliResult<Outcome> {
    let k = c.pair.kappa;
    let mut rng = c.rng("nilgroup.operator_algebra");
    let gv = nilgroup::group_vars(k);
    let (zs, zbs, t) = vector_fields(k);
    for j in 0..k {
        let comm = zs[j].compose(&zbs[j]).sub(&zbs[j].compose(&zs[j]));
        if comm != t.scale(&Scalar::frac(1, 2).mul_i()) {
            return Ok(Outcome::fail(json!("[Z_j, Zbar_j] = (i/2) d_t"), json!(comm.to_string()), json!({"j": j})));
        }
        for l in 0..k {
            if !zs[j].compose(&zs[l]).sub(&zs[l].compose(&zs[j])).is_zero() {
                return Ok(Outcome::fail(json!("[Z_j, Z_l] = 0"), json!("nonzero"), json!({"j": j, "l": l})));
            }
        }
    }
    for n in 0..20 {
        let d1 = sample::pbw_monomial(&mut rng, k, 2).to_diffop();
        let d2 = sample::pbw_monomial(&mut rng, k, 2).to_diffop();
        let f = sample::poly(&mut rng, gv, 3, 0.05);
        let lhs = d1.compose(&d2).apply(&f);
        let rhs = d1.apply(&d2.apply(&f));
        if lhs != rhs {
            return Ok(Outcome::fail(json!("apply∘compose coherent"), json!("mismatch"), json!({"sample": n})));
        }
        if d1.compose(&d2).formal_adjoint() != d2.formal_adjoint().compose(&d1.formal_adjoint()) {
            return Ok(Outcome::fail(json!("(D1 D2)* = D2* D1*"), json!("mismatch"), json!({"sample": n})));
        }
        if d1.formal_adjoint().formal_adjoint() != d1 {
            return Ok(Outcome::fail(json!("D** = D"), json!("mismatch"), json!({"sample": n})));
        }
        let d = d1.add(&d2);
        if d.to_pbw()?.to_diffop() != d {
            return Ok(Outcome::fail(json!("normal form roundtrip"), json!("mismatch"), json!({"sample": n})));
        }
    }
    let id = DiffOp::identity(k);
    if id.compose(&t) != t || t.compose(&id) != t {
        return Ok(Outcome::fail(json!("identity is neutral"), json!("mismatch"), Value::Null));
    }
    Ok(Outcome::pass(json!(20), json!(20)))
}

fn nilgroup_homogeneity(c: &Ctx) -> CliResult<Outcome> {
    let mut actual = BTreeMap::new();
    let mut expected = BTreeMap::new();
    for m in 1..=c.depth.mmax {
        let mm = build_mm(&c.pair, m)?;
        let um = um_from(&mm);
        let a: Vec<Option<u32>> = mm.components.iter().map(|a| a.doubled_homogeneity()).collect();
        let self_adjoint = um.adjoint() == um;
        expected.insert(format!("m={}", m), json!({"components": mm.vm.dim(), "A_doubled_degree": 2 * m, "U_doubled_degree": 4 * m, "U_self_adjoint": true}));
        let ad = if a.iter().all(|x| *x == Some(2 * m)) { json!(2 * m) } else { json!(a) };
        actual.insert(
            format!("m={}", m),
            json!({"components": mm.components.len(), "A_doubled_degree": ad, "U_doubled_degree": um.doubled_homogeneity(), "U_self_adjoint": self_adjoint}),
        );
    }
    Ok(Outcome::compare(json!(expected), json!(actual)))
}

fn nilgroup_equivariance(c: &Ctx) -> CliResult<Outcome> {
    let vv = c.pair.vvars();
    let vars = c.pair.vars();
    let mut rng = c.rng("nilgroup.equivariance");
    let mut checked = 0;
    for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let p = sample::bihomogeneous(&mut rng, vv, a, b);
        let sp = symmetrize(&p)?;
        for g in &c.pair.generators {
            let ap = restrict_v(&act(g, &lift_v(&p, vars)), vv);
            let sap = symmetrize(&ap)?;
            for lambda in lambdas(&[(1, 1), (-1, 1)]) {
                let x = fock_generator(&g.xv, &lambda);
                for s in 0..=c.depth.smax.min(3) {
                    let lhs = c.dpi.get(&sap, &lambda, s)?;
                    let m = c.dpi.get(&sp, &lambda, s)?;
                    if m.target.is_empty() {
                        if !lhs.matrix.is_zero() {
                            return Ok(Outcome::fail(json!("zero"), json!("nonzero"), json!({"generator": g.name, "s": s})));
                        }
                        continue;
                    }
                    let rhs = &(&dsigma_geom(&x, &m.target) * &m.matrix) - &(&m.matrix * &dsigma_geom(&x, &m.source));
                    checked += 1;
                    if let Some(w) = first_diff(&lhs.matrix, &rhs) {
                        return Ok(Outcome::fail(
                            json!("dπ(sym(X·p)) = [dσ(X), dπ(sym p)]"),
                            json!("mismatch"),
                            json!({"generator": g.name, "bidegree": [a, b], "lambda": lambda.to_string(), "s": s, "entry": w}),
                        ));
                    }
                }
            }
        }
    }
    Ok(Outcome::pass(json!("all generators"), json!({"matrices_checked": checked})))
}

// ---- bargmann ---------------------------------------------------------------

fn bargmann_homomorphism(c: &Ctx) -> CliResult<Outcome> {
    let k = c.pair.kappa;
    let mut rng = c.rng("bargmann.homomorphism");
    let mut checked = 0;
    for n in 0..20 {
        let e1 = sample::pbw_monomial(&mut rng, k, 2);
        let e2 = sample::pbw_monomial(&mut rng, k, 2);
        let composed = e1.to_diffop().compose(&e2.to_diffop());
        for lambda in lambdas(&[(1, 1), (-2, 1)]) {
            for s in 0..=c.depth.smax {
                let lhs = dpi_matrix_diffop(&composed, &lambda, s)?;
                let m2 = c.dpi.get(&e2, &lambda, s)?;
                let ok = if m2.target.is_empty() {
                    lhs.matrix.is_zero()
                } else {
                    let m1 = c.dpi.get(&e1, &lambda, m2.target.s)?;
                    let prod = m1.compose(&m2)?;
                    if prod.target.is_empty() {
                        lhs.matrix.is_zero()
                    } else {
                        lhs.matrix == prod.matrix
                    }
                };
                checked += 1;
                if !ok {
                    return Ok(Outcome::fail(
                        json!("dπ(D1 D2) = dπ(D1) dπ(D2)"),
                        json!("mismatch"),
                        json!({"sample": n, "lambda": lambda.to_string(), "s": s, "D1": e1.to_string(), "D2": e2.to_string()}),
                    ));
                }
            }
        }
    }
    Ok(Outcome::pass(json!("exact"), json!({"matrices_checked": checked})))
}

fn bargmann_unitarity(c: &Ctx) -> CliResult<Outcome> {
    let k = c.pair.kappa;
    let mut rng = c.rng("bargmann.unitarity");
    let mut checked = 0;
    for n in 0..20 {
        let e = sample::pbw_monomial(&mut rng, k, 2);
        let adj = e.adjoint();
        if e.to_diffop().formal_adjoint().to_pbw()? != adj {
            return Ok(Outcome::fail(json!("formal adjoint matches"), json!("mismatch"), json!({"sample": n, "op": e.to_string()})));
        }
        for lambda in lambdas(&[(1, 1), (3, 2), (-1, 1)]) {
            for s in 0..=c.depth.smax {
                let m = c.dpi.get(&e, &lambda, s)?;
                if m.target.is_empty() {
                    continue;
                }
                let lhs = c.dpi.get(&adj, &lambda, m.target.s)?;
                let rhs = m.fock_adjoint(&lambda);
                checked += 1;
                if let Some(w) = first_diff(&lhs.matrix, &rhs.matrix) {
                    return Ok(Outcome::fail(
                        json!("dπ(D*) = dπ(D)†"),
                        json!("mismatch"),
                        json!({"sample": n, "op": e.to_string(), "lambda": lambda.to_string(), "s": s, "entry": w}),
                    ));
                }
            }
        }
    }
    Ok(Outcome::pass(json!("exact"), json!({"matrices_checked": checked})))
}

fn bargmann_metaplectic(c: &Ctx) -> CliResult<Outcome> {
    let k = c.pair.kappa;
    let mut rng = c.rng("bargmann.metaplectic");
    let mut cs = vec![Matrix::zeros(k, k), Matrix::identity(k)];
    let mut e11 = Matrix::zeros(k, k);
    e11[(0, 0)] = Scalar::ONE;
    cs.push(e11);
    let mut sigma1 = Matrix::zeros(k, k);
    sigma1[(0, 1)] = Scalar::ONE;
    sigma1[(1, 0)] = Scalar::ONE;
    cs.push(sigma1);
    for _ in 0..10 {
        cs.push(sample::hermitian(&mut rng, k));
    }
    for (n, cm) in cs.iter().enumerate() {
        for lambda in lambdas(&[(1, 1), (3, 2)]) {
            let r = bargmann::check_metaplectic(cm, &lambda, c.depth.smax)?;
            if let Some((deg, i, j, a, b)) = r.mismatch {
                return Ok(Outcome::fail(
                    json!("dπ(iL_C) = (λ/2)dσ_met(iC)"),
                    json!("mismatch"),
                    json!({"sample": n, "lambda": lambda.to_string(), "s": deg, "row": i, "col": j, "lhs": s(&a), "rhs": s(&b)}),
                ));
            }
        }
    }
    Ok(Outcome::pass(json!("exact"), json!({"matrices": cs.len()})))
}

// ---- spectrum ---------------------------------------------------------------

fn spectrum_eigenvalue_law(c: &Ctx) -> CliResult<Outcome> {
    let ls = lambdas(&[(1, 1), (2, 1), (3, 1), (-1, 1), (1, 2)]);
    let smax = c.depth.smax + 1;
    let pts = spectrum_points(&c.pair, &ls, smax)?;
    let kappa = c.pair.kappa as i64;
    for p in &pts {
        let want = Scalar::real(&p.lambda.abs() * &Rational::from_int(2 * p.label.s as i64 + kappa));
        let got = &p.xi[0];
        let last = p.xi.last().expect("λ coordinate");
        if *got != want || *last != Scalar::real(p.lambda.clone()) {
            return Ok(Outcome::fail(
                json!("ξ1 = |λ|(2s+κ), ξ_last = λ"),
                json!("mismatch"),
                json!({"lambda": p.lambda.to_string(), "block": p.label.to_string(), "xi1": s(got), "want": s(&want), "last": s(last)}),
            ));
        }
    }
    Ok(Outcome::pass(json!("ξ1 = |λ|(2s+κ)"), json!({"points": pts.len()})))
}

fn spectrum_dilation(c: &Ctx) -> CliResult<Outcome> {
    let weights = xi_weights(&c.pair);
    let base = lambdas(&[(1, 1), (-1, 1), (1, 2)]);
    let p0 = spectrum_points(&c.pair, &base, c.depth.smax)?;
    let mut checked = 0;
    for r in [2i64, 3] {
        let mu = Rational::from_int(r * r);
        let scaled: Vec<Rational> = base.iter().map(|l| l * &mu).collect();
        let p1 = spectrum_points(&c.pair, &scaled, c.depth.smax)?;
        for (a, b) in p0.iter().zip(&p1) {
            for (j, (x, y)) in a.xi.iter().zip(&b.xi).enumerate() {
                let want = x.scale(&mu.pow(weights[j]));
                checked += 1;
                if *y != want {
                    return Ok(Outcome::fail(
                        json!("ξ_j(r²λ) = (r²)^δ_j ξ_j(λ)"),
                        json!("mismatch"),
                        json!({"r": r, "lambda": a.lambda.to_string(), "block": a.label.to_string(), "j": j, "got": s(y), "want": s(&want)}),
                    ));
                }
            }
        }
    }
    Ok(Outcome::pass(json!("exact"), json!({"coordinates_checked": checked})))
}

// ---- M_m --------------------------------------------------------------------

fn mm_admissibility(c: &Ctx) -> CliResult<Outcome> {
    let mut rows = Vec::new();
    for m in 1..=c.depth.mmax {
        let mm = build_mm(&c.pair, m)?;
        for lambda in lambdas(&[(1, 1), (-1, 1)]) {
            for s in 0..=m + 2 {
                let a = mm_action(&c.pair, &mm, &lambda, s)?;
                for b in &a.blocks {
                    let adm = admissible(&b.label, m);
                    rows.push(json!([m, lambda.to_string(), b.label.to_string(), b.joint_rank]));
                    if adm != (b.joint_rank > 0) {
                        return Ok(Outcome::fail(
                            json!("joint rank > 0 iff admissible"),
                            json!(rows),
                            json!({"m": m, "lambda": lambda.to_string(), "block": b.label.to_string(), "admissible": adm, "joint_rank": b.joint_rank}),
                        ));
                    }
                }
            }
        }
    }
    Ok(Outcome::pass(json!("joint rank > 0 iff admissible"), json!(rows)))
}

fn mm_block_structure(c: &Ctx) -> CliResult<Outcome> {
    let mut count = 0;
    for m in 1..=c.depth.mmax.min(2) {
        let mm = build_mm(&c.pair, m)?;
        for s in 0..=c.depth.smax {
            let a = mm_action(&c.pair, &mm, &Rational::ONE, s)?;
            for b in &a.blocks {
                count += 1;
                if !b.preserved {
                    return Ok(Outcome::fail(json!("no cross-label entries"), json!("leak"), json!({"m": m, "s": s, "block": b.label.to_string()})));
                }
            }
        }
    }
    Ok(Outcome::pass(json!("no cross-label entries"), json!({"blocks": count})))
}

// ---- u_m --------------------------------------------------------------------

fn um_recovery(c: &Ctx) -> CliResult<Outcome> {
    let mut actual = BTreeMap::new();
    let mut expected = BTreeMap::new();
    let mut witness = None;
    for m in 1..=c.depth.mmax {
        let fit = compute_um(&c.pair, m, c.depth.smax.max(um_min_smax(&c.pair, m)))?;
        let key = format!("u{}", m);
        actual.insert(key.clone(), json!(fit.poly.to_string()));
        if c.pair.line() == 6 {
            let want = line6_product(&c.pair, m);
            expected.insert(key.clone(), json!(want.to_string()));
            if fit.poly != want && witness.is_none() {
                witness = Some(json!({"m": m}));
            }
        } else {
            // no term odd in λ, nonzero pure ξ₂^m coefficient
            let vars = fit.poly.vars();
            let odd = fit.poly.terms().any(|(e, _)| e[vars.xi - 1] % 2 == 1);
            let mut e2 = ngp_core::Exponents::from_elem(0, vars.nvars());
            e2[1] = m as u8;
            let a2 = fit.poly.coeff(&e2);
            expected.insert(key.clone(), json!({"odd_lambda_terms": false, "xi2_coefficient_nonzero": true}));
            if (odd || a2.is_zero()) && witness.is_none() {
                witness = Some(json!({"m": m, "odd_lambda_terms": odd, "xi2_coefficient": s(&a2)}));
            }
        }
    }
    Ok(Outcome { ok: witness.is_none(), expected: json!(expected), actual: json!(actual), witness })
}

fn um_vanishing(c: &Ctx) -> CliResult<Outcome> {
    let ls = lambdas(&[(1, 1), (-1, 1), (2, 1)]);
    let pts = spectrum_points(&c.pair, &ls, c.depth.smax)?;
    let mut counts = BTreeMap::new();
    for m in 1..=c.depth.mmax {
        let fit = compute_um(&c.pair, m, c.depth.smax.max(um_min_smax(&c.pair, m)))?;
        let mut in_sm = 0;
        for p in &pts {
            let zero = fit.poly.evaluate(&p.xi).is_zero();
            if zero == admissible(&p.label, m) {
                return Ok(Outcome::fail(
                    json!("u_m(ξ) = 0 iff block is not m-admissible"),
                    json!("mismatch"),
                    json!({"m": m, "lambda": p.lambda.to_string(), "block": p.label.to_string(), "vanishes": zero}),
                ));
            }
            in_sm += usize::from(zero);
        }
        counts.insert(format!("m={}", m), in_sm);
    }
    Ok(Outcome::pass(json!("S_m = non-admissible blocks"), json!(counts)))
}

fn um_division(c: &Ctx) -> CliResult<Outcome> {
    let mut rng = c.rng("um.division");
    let vars = bargmann::xi_vars(&c.pair);
    let lam = MultiPoly::var(vars, VarKind::Xi, vars.xi - 1);
    let mut done = 0;
    for m in 1..=c.depth.mmax.min(2) {
        let fit = compute_um(&c.pair, m, c.depth.smax.max(um_min_smax(&c.pair, m)))?;
        for n in 0..20 {
            let q = sample::poly(&mut rng, vars, 4, 0.3);
            let p = &fit.poly * &q;
            let got = bargmann::divide_by_um(&c.pair, &fit, &p)?;
            if got != q {
                return Ok(Outcome::fail(json!("p = u_m q"), json!("wrong quotient"), json!({"m": m, "sample": n})));
            }
            done += 1;
        }
        for n in 0..5 {
            let q = sample::poly(&mut rng, vars, 3, 0.3);
            let bump = lam.pow(n as u32).scale(&sample::nonzero_scalar(&mut rng));
            let p = &(&fit.poly * &q) + &bump;
            match bargmann::divide_by_um(&c.pair, &fit, &p) {
                Err(Error::DoesNotVanish(_)) => done += 1,
                other => {
                    return Ok(Outcome::fail(
                        json!("rejected: does not vanish on S_m"),
                        json!(format!("{:?}", other.map(|q| q.to_string()))),
                        json!({"m": m, "sample": n}),
                    ))
                }
            }
        }
    }
    Ok(Outcome::pass(json!("exact quotients and rejections"), json!({"cases": done})))
}
