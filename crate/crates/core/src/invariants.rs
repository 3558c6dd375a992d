//! Fundamental invariants, the canonical basis `p̃^α q^β r^γ` and the
//! decomposition of invariant polynomials against it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::pairs::{self, act, harmonic_part, lift_v, HarmonicProjector, MonomialIndex, PairDescriptor};
use crate::poly::{Exponents, MultiPoly, Multidegree, VarKind, VarSpace};
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Largest total degree (v-bidegree sum plus z-degree) accepted by the solvers.
pub const DEGREE_CAP: u32 = 8;

#[derive(Clone, Debug)]
pub struct NamedInvariant {
    pub name: String,
    pub poly: MultiPoly,
    /// `(v-degree, v̄-degree, z-degree)`
    pub degree: (u32, u32, u32),
}

/// The free generators `r` (v only), `q` (z only) and `p` (mixed).
#[derive(Clone, Debug)]
pub struct InvariantCatalogue {
    pub r: Vec<MultiPoly>,
    pub q: Vec<MultiPoly>,
    pub p: Vec<MultiPoly>,
    pub r_names: Vec<String>,
    pub q_names: Vec<String>,
    pub p_names: Vec<String>,
}

impl InvariantCatalogue {
    pub fn named(&self) -> Vec<NamedInvariant> {
        let mut out = Vec::new();
        for (names, polys) in [(&self.r_names, &self.r), (&self.q_names, &self.q), (&self.p_names, &self.p)] {
            for (name, poly) in names.iter().zip(polys) {
                let d = Multidegree::of(&poly.vars(), poly.terms().next().expect("nonzero invariant").0);
                out.push(NamedInvariant { name: name.clone(), poly: poly.clone(), degree: (d.v, d.vbar, d.z) });
            }
        }
        out
    }

    pub fn r_delta(&self) -> Vec<u32> {
        self.r.iter().map(|r| r.degree_in(VarKind::V)).collect()
    }

    pub fn q_degree(&self) -> Vec<u32> {
        self.q.iter().map(|q| q.degree_in(VarKind::Z)).collect()
    }

    pub fn p_degree(&self) -> Vec<u32> {
        self.p.iter().map(|p| p.degree_in(VarKind::Z)).collect()
    }
}

type PolyMatrix = Vec<Vec<MultiPoly>>;

fn pm_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let vars = a[0][0].vars();
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![MultiPoly::zero(vars); m]; n];
    for i in 0..n {
        for j in 0..m {
            for l in 0..k {
                if !a[i][l].is_zero() && !b[l][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

fn pm_trace(a: &PolyMatrix) -> MultiPoly {
    let mut t = MultiPoly::zero(a[0][0].vars());
    for (i, row) in a.iter().enumerate() {
        t = &t + &row[i];
    }
    t
}

/// `v` as a `rows × cols` matrix of variables (row-major index), and `v*`.
fn v_matrices(vars: VarSpace, rows: usize, cols: usize) -> (PolyMatrix, PolyMatrix) {
    let v: PolyMatrix = (0..rows)
        .map(|a| (0..cols).map(|i| MultiPoly::var(vars, VarKind::V, a * cols + i)).collect())
        .collect();
    let vstar: PolyMatrix = (0..cols)
        .map(|i| (0..rows).map(|a| MultiPoly::var(vars, VarKind::VBar, a * cols + i)).collect())
        .collect();
    (v, vstar)
}

/// The catalogue of fundamental invariants, each checked to be annihilated
/// by every generator.
pub fn fundamental_invariants(pair: &PairDescriptor) -> InvariantCatalogue {
    let vars = pair.vars();
    let n = pair.n();
    let iz = pair.iz_matrix(vars);
    let mut cat = InvariantCatalogue { r: vec![], q: vec![], p: vec![], r_names: vec![], q_names: vec![], p_names: vec![] };
    match pair.line() {
        6 => {
            let (v, vstar) = v_matrices(vars, n, 1);
            cat.r.push(pm_trace(&pm_mul(&vstar, &v)));
            cat.r_names.push(String::from("r1"));
            let mut pow = iz.clone();
            for k in 1..n {
                cat.p.push(pm_trace(&pm_mul(&pm_mul(&vstar, &pow), &v)));
                cat.p_names.push(format!("p{}", k));
                pow = pm_mul(&pow, &iz);
                cat.q.push(pm_trace(&pow));
                cat.q_names.push(format!("q{}", k + 1));
            }
        }
        _ => {
            let (v, vstar) = v_matrices(vars, 2, n);
            let vv = pm_mul(&v, &vstar);
            cat.r.push(pm_trace(&vv));
            cat.r.push(pm_trace(&pm_mul(&vv, &vv)));
            cat.r_names.extend([String::from("r1"), String::from("r2")]);
            let mut q = MultiPoly::zero(vars);
            for a in 0..pair.nu1 {
                let za = MultiPoly::var(vars, VarKind::Z, a);
                q = &q + &(&za * &za);
            }
            cat.q.push(q);
            cat.q_names.push(String::from("q1"));
            cat.p.push(pm_trace(&pm_mul(&pm_mul(&vstar, &iz), &v)));
            cat.p_names.push(String::from("p1"));
        }
    }
    for f in cat.r.iter().chain(&cat.q).chain(&cat.p) {
        for g in &pair.generators {
            assert!(act(g, f).is_zero(), "catalogue entry not annihilated by {}", g.name);
        }
    }
    cat
}

/// Exponent multi-indices `(α, β, γ)` over `(p, q, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub gamma: Vec<u32>,
}

impl BasisLabel {
    pub fn m(&self) -> u32 {
        self.alpha.iter().sum()
    }

    /// Renders with catalogue names, e.g. `~p1^2*q2*r1^3`; the empty label is `1`.
    pub fn render(&self, cat: &InvariantCatalogue) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (names, exps, tilde) in [(&cat.p_names, &self.alpha, "~"), (&cat.q_names, &self.beta, ""), (&cat.r_names, &self.gamma, "")] {
            for (name, &e) in names.iter().zip(exps) {
                match e {
                    0 => {}
                    1 => parts.push(format!("{}{}", tilde, name)),
                    _ => parts.push(format!("{}{}^{}", tilde, name, e)),
                }
            }
        }
        if parts.is_empty() {
            String::from("1")
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}|{:?}", self.alpha, self.beta, self.gamma)
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalBasisElement {
    pub label: BasisLabel,
    pub poly: MultiPoly,
    /// z-degree contributed by `p̃^α`.
    pub bracket: u32,
}

pub fn monomial_product(vars: VarSpace, polys: &[MultiPoly], exps: &[u32]) -> MultiPoly {
    let mut out = MultiPoly::one(vars);
    for (p, &e) in polys.iter().zip(exps) {
        if e > 0 {
            out = &out * &p.pow(e);
        }
    }
    out
}

/// All exponent vectors over `weights.len()` slots with `Σ e_i w_i = total`.
pub fn weighted_exponents(weights: &[u32], total: u32) -> Vec<Vec<u32>> {
    fn rec(w: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if w.is_empty() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e * w[0] <= left {
            cur.push(e);
            rec(&w[1..], left - e * w[0], cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(weights, total, &mut Vec::new(), &mut out);
    out
}

/// Labels `(α, β, γ)` whose product has multidegree `d` (no `t`).
pub fn basis_labels(cat: &InvariantCatalogue, d: &Multidegree) -> Vec<BasisLabel> {
    if d.v != d.vbar || d.t != 0 || d.xi != 0 {
        return Vec::new();
    }
    let rd = cat.r_delta();
    let pd = cat.p_degree();
    let qd = cat.q_degree();
    let mut out = Vec::new();
    for m in 0..=d.v {
        let ones = vec![1; pd.len()];
        for alpha in weighted_exponents(&ones, m) {
            let zp: u32 = alpha.iter().zip(&pd).map(|(a, b)| a * b).sum();
            if zp > d.z {
                continue;
            }
            for gamma in weighted_exponents(&rd, d.v - m) {
                for beta in weighted_exponents(&qd, d.z - zp) {
                    out.push(BasisLabel { alpha: alpha.clone(), beta, gamma: gamma.clone() });
                }
            }
        }
    }
    out.sort();
    out
}

/// `p̃^α`, the harmonic projection of `p^α`.
pub fn p_tilde(pair: &PairDescriptor, cat: &InvariantCatalogue, alpha: &[u32], proj: Option<&HarmonicProjector>) -> Result<MultiPoly> {
    let m: u32 = alpha.iter().sum();
    let pa = monomial_product(pair.vars(), &cat.p, alpha);
    match proj {
        Some(h) if h.m == m => h.project(&pa),
        _ => pairs::harmonic_projection(pair, &pa, m),
    }
}

/// Canonical basis elements of multidegree `d`.
pub fn canonical_basis(pair: &PairDescriptor, d: &Multidegree) -> Result<Vec<CanonicalBasisElement>> {
    let cat = fundamental_invariants(pair);
    canonical_basis_with(pair, &cat, d, &mut BTreeMap::new())
}

/// As [`canonical_basis`], reusing a catalogue and a cache of harmonic projectors keyed by `m`.
pub fn canonical_basis_with(
    pair: &PairDescriptor,
    cat: &InvariantCatalogue,
    d: &Multidegree,
    projectors: &mut BTreeMap<u32, HarmonicProjector>,
) -> Result<Vec<CanonicalBasisElement>> {
    let vars = pair.vars();
    let pd = cat.p_degree();
    let mut out = Vec::new();
    let mut tilde_cache: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
    for label in basis_labels(cat, d) {
        let m = label.m();
        let pt = match tilde_cache.get(&label.alpha) {
            Some(p) => p.clone(),
            None => {
                let h = projectors.entry(m).or_insert_with(|| HarmonicProjector::new(pair, m));
                let p = p_tilde(pair, cat, &label.alpha, Some(h))?;
                tilde_cache.insert(label.alpha.clone(), p.clone());
                p
            }
        };
        let poly = &(&pt * &monomial_product(vars, &cat.q, &label.beta)) * &monomial_product(vars, &cat.r, &label.gamma);
        let bracket = label.alpha.iter().zip(&pd).map(|(a, b)| a * b).sum();
        out.push(CanonicalBasisElement { label, poly, bracket });
    }
    Ok(out)
}

/// Monomials `p^α q^β r^γ` (no harmonic projection) of multidegree `d`.
pub fn plain_monomials(pair: &PairDescriptor, cat: &InvariantCatalogue, d: &Multidegree) -> Vec<(BasisLabel, MultiPoly)> {
    let vars = pair.vars();
    basis_labels(cat, d)
        .into_iter()
        .map(|l| {
            let p = &(&monomial_product(vars, &cat.p, &l.alpha) * &monomial_product(vars, &cat.q, &l.beta))
                * &monomial_product(vars, &cat.r, &l.gamma);
            (l, p)
        })
        .collect()
}

/// Unique coordinates of an invariant against the canonical basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: BTreeMap<BasisLabel, Scalar>,
}

impl Decomposition {
    /// Groups by `(α, β)`: each value maps `γ` to its coefficient, i.e. a
    /// polynomial in the `r` invariants.
    pub fn grouped(&self) -> BTreeMap<(Vec<u32>, Vec<u32>), BTreeMap<Vec<u32>, Scalar>> {
        let mut out: BTreeMap<(Vec<u32>, Vec<u32>), BTreeMap<Vec<u32>, Scalar>> = BTreeMap::new();
        for (l, c) in &self.terms {
            out.entry((l.alpha.clone(), l.beta.clone())).or_default().insert(l.gamma.clone(), c.clone());
        }
        out
    }

    pub fn reconstruct(&self, pair: &PairDescriptor) -> Result<MultiPoly> {
        let cat = fundamental_invariants(pair);
        let vars = pair.vars();
        let mut out = MultiPoly::zero(vars);
        let mut projectors = BTreeMap::new();
        for (l, c) in &self.terms {
            let h = projectors.entry(l.m()).or_insert_with(|| HarmonicProjector::new(pair, l.m()));
            let pt = p_tilde(pair, &cat, &l.alpha, Some(h))?;
            let poly = &(&pt * &monomial_product(vars, &cat.q, &l.beta)) * &monomial_product(vars, &cat.r, &l.gamma);
            out.add_scaled(&poly, c);
        }
        Ok(out)
    }
}

/// Order in which basis columns are pivoted; the result must not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    Lexicographic,
    Reversed,
}

/// Decomposes a `K`-invariant polynomial over `(v, v̄, z)` in the canonical basis.
pub fn decompose_invariant(pair: &PairDescriptor, g: &MultiPoly) -> Result<Decomposition> {
    decompose_invariant_ordered(pair, g, PivotOrder::Lexicographic, DEGREE_CAP)
}

pub fn decompose_invariant_ordered(pair: &PairDescriptor, g: &MultiPoly, order: PivotOrder, cap: u32) -> Result<Decomposition> {
    if g.vars() != pair.vars() {
        return Err(Error::VarMismatch { left: g.vars(), right: pair.vars() });
    }
    for gen in &pair.generators {
        if !act(gen, g).is_zero() {
            return Err(Error::NotInvariant(format!("generator {} does not annihilate the input", gen.name)));
        }
    }
    let deg = g.total_degree();
    if deg > cap {
        return Err(Error::Degree(format!("total degree {} exceeds the cap {}", deg, cap)));
    }
    let cat = fundamental_invariants(pair);
    let mut projectors = BTreeMap::new();
    let mut out = Decomposition::default();
    for (d, comp) in g.components() {
        let mut basis = canonical_basis_with(pair, &cat, &d, &mut projectors)?;
        if order == PivotOrder::Reversed {
            basis.reverse();
        }
        let mut idx = MonomialIndex::new();
        let cols: Vec<SparseVec> = basis.iter().map(|b| idx.to_sparse(&b.poly)).collect();
        let target = idx.to_sparse(&comp);
        let (x, unique) = linalg::solve_columns(&cols, &target)
            .ok_or_else(|| Error::Inconsistent(format!("component of multidegree {} is outside the canonical span", d)))?;
        if !unique {
            return Err(Error::Inconsistent(format!("canonical elements of multidegree {} are dependent", d)));
        }
        for (b, c) in basis.into_iter().zip(x) {
            if !c.is_zero() {
                out.terms.insert(b.label, c);
            }
        }
    }
    Ok(out)
}

/// Regroups the decomposition of a `z`-homogeneous invariant by its
/// `z`-carrying factor `p̃^α q^β` (bracket degree `k`), leaving polynomials in
/// the `r` invariants.
pub fn hadamard_split(pair: &PairDescriptor, g: &MultiPoly, k: u32) -> Result<BTreeMap<(Vec<u32>, Vec<u32>), BTreeMap<Vec<u32>, Scalar>>> {
    if g.multidegrees().iter().any(|d| d.z != k) {
        return Err(Error::Degree(format!("input is not homogeneous of degree {} in z", k)));
    }
    Ok(decompose_invariant(pair, g)?.grouped())
}

/// Evaluates an `r`-coefficient map `γ ↦ c` as a polynomial in `vars`.
pub fn r_polynomial(cat: &InvariantCatalogue, coeffs: &BTreeMap<Vec<u32>, Scalar>) -> MultiPoly {
    let vars = cat.r[0].vars();
    let mut out = MultiPoly::zero(vars);
    for (gamma, c) in coeffs {
        out.add_scaled(&monomial_product(vars, &cat.r, gamma), c);
    }
    out
}

/// The `z`-coefficients `ℓ_a(v)` of `p₁ = Σ z_a ℓ_a`, in the `v`-only space.
pub fn ell_polys(pair: &PairDescriptor) -> Vec<MultiPoly> {
    let cat = fundamental_invariants(pair);
    let vv = pair.vvars();
    let p1 = &cat.p[0];
    let nv = 2 * pair.kappa;
    let mut out = vec![MultiPoly::zero(vv); pair.nu1];
    for (e, c) in p1.terms() {
        let a = (0..pair.nu1).find(|&a| e[nv + a] == 1).expect("p1 is linear in z");
        out[a].add_term(Exponents::from_slice(&e[..nv]), c.clone());
    }
    out
}

/// Orthogonal basis `a_j` of `V_m = H^{m,m}(𝔳) ∩ P^m(ℓ)` with squared Fischer norms.
#[derive(Clone, Debug)]
pub struct VmBasis {
    pub m: u32,
    pub a: Vec<MultiPoly>,
    pub norms: Vec<Rational>,
}

impl VmBasis {
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// As a subspace of the full `(v, v̄, z)` space.
    pub fn subspace(&self, pair: &PairDescriptor) -> pairs::SubspaceBasis {
        let vars = pair.vars();
        pairs::SubspaceBasis::new(format!("V{}", self.m), None, self.a.iter().map(|a| lift_v(a, vars)).collect())
    }
}

pub fn vm_basis(pair: &PairDescriptor, m: u32) -> Result<VmBasis> {
    if m == 0 {
        return Err(Error::Degree(String::from("V_m needs m ≥ 1")));
    }
    let ell = ell_polys(pair);
    let vv = pair.vvars();
    let ones = vec![1; ell.len()];
    let products: Vec<MultiPoly> = weighted_exponents(&ones, m).iter().map(|e| monomial_product(vv, &ell, e)).collect();
    let span = pairs::echelon_basis(vv, &products);
    let harm = harmonic_part(pair, &span);
    let mut a: Vec<MultiPoly> = Vec::new();
    let mut norms: Vec<Rational> = Vec::new();
    for u in harm {
        let mut w = u.clone();
        for (ai, ni) in a.iter().zip(&norms) {
            let c = u.fischer_inner(ai)?.scale(&ni.recip());
            w.add_scaled(ai, &-c);
        }
        let n = w.fischer_norm_sqr();
        a.push(w);
        norms.push(n);
    }
    Ok(VmBasis { m, a, norms })
}

/// `p̃^α = Σ_j a_j(v) b_j(z)` with `a_j` from [`vm_basis`].
#[derive(Clone, Debug)]
pub struct EquivariantComponents {
    pub vm: VmBasis,
    pub ptilde: MultiPoly,
    pub b: Vec<MultiPoly>,
}

impl EquivariantComponents {
    pub fn reconstruct(&self, pair: &PairDescriptor) -> MultiPoly {
        let vars = pair.vars();
        let mut out = MultiPoly::zero(vars);
        for (a, b) in self.vm.a.iter().zip(&self.b) {
            out = &out + &(&lift_v(a, vars) * b);
        }
        out
    }
}

pub fn equivariant_components(pair: &PairDescriptor, alpha: &[u32]) -> Result<EquivariantComponents> {
    let m: u32 = alpha.iter().sum();
    if m == 0 {
        return Err(Error::Degree(String::from("degenerate multi-index |α| = 0")));
    }
    let cat = fundamental_invariants(pair);
    let vm = vm_basis(pair, m)?;
    let ptilde = p_tilde(pair, &cat, alpha, None)?;
    let vars = pair.vars();
    let nv = 2 * pair.kappa;
    let mut b = vec![MultiPoly::zero(vars); vm.dim()];
    for (outer, inner) in ptilde.split_by(&[VarKind::V, VarKind::VBar]) {
        let f = MultiPoly::from_terms(pair.vvars(), inner.terms().map(|(e, c)| (Exponents::from_slice(&e[..nv]), c.clone())))?;
        for (j, (aj, nj)) in vm.a.iter().zip(&vm.norms).enumerate() {
            let c = f.fischer_inner(aj)?.scale(&nj.recip());
            b[j].add_term(outer.clone(), c);
        }
    }
    Ok(EquivariantComponents { vm, ptilde, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::make_pair;

    #[test]
    fn weighted_exponent_enumeration() {
        assert_eq!(weighted_exponents(&[1, 2], 4), vec![vec![0, 2], vec![2, 1], vec![4, 0]]);
        assert_eq!(weighted_exponents(&[], 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn label_render() {
        let cat = fundamental_invariants(&make_pair(6, 2).unwrap());
        let l = BasisLabel { alpha: vec![2], beta: vec![1], gamma: vec![0] };
        assert_eq!(l.render(&cat), "~p1^2*q2");
        let l = BasisLabel { alpha: vec![0], beta: vec![0], gamma: vec![0] };
        assert_eq!(l.render(&cat), "1");
    }

    #[test]
    fn catalogue_sizes() {
        let c = fundamental_invariants(&make_pair(6, 3).unwrap());
        assert_eq!((c.r.len(), c.q.len(), c.p.len()), (1, 2, 2));
        let c = fundamental_invariants(&make_pair(8, 2).unwrap());
        assert_eq!((c.r.len(), c.q.len(), c.p.len()), (2, 1, 1));
    }
}
