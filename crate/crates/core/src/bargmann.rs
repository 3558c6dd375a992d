//! Bargmann–Fock model: matrices of `dπ_λ` on the graded spaces `P^{s,0}(𝔳)`,
//! spherical eigenvalues, the metaplectic identity, admissibility of `M_m`,
//! recovery of `u_m` and division by it.
//!
//! For `λ > 0`: `Z_j ↦ ∂_{v_j}`, `Z̄_j ↦ −(λ/2) v_j`; for `λ < 0`:
//! `Z_j ↦ (λ/2) v_j`, `Z̄_j ↦ ∂_{v_j}`; always `T ↦ iλ`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, SparseVec};
use crate::nilgroup::{self, l_c, EquivariantOperator, Pbw};
use crate::pairs::{isotypic_components, BlockLabel, FockBlock, PairDescriptor};
use crate::poly::{compositions, multi_factorial, Exponents, MultiPoly, VarKind, VarSpace};
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Monomial basis of `P^{s,0}(ℂ^κ)` in graded-lexicographic order (descending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockBasis {
    pub kappa: usize,
    pub s: u32,
    monos: Vec<Exponents>,
    index: BTreeMap<Exponents, usize>,
}

impl FockBasis {
    pub fn new(kappa: usize, s: u32) -> Self {
        let monos = compositions(kappa, s);
        let index = monos.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        FockBasis { kappa, s, monos, index }
    }

    /// The zero space, used as the target of degree-lowering maps at `s = 0`.
    pub fn empty(kappa: usize) -> Self {
        FockBasis { kappa, s: 0, monos: Vec::new(), index: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomials(&self) -> &[Exponents] {
        &self.monos
    }

    pub fn position(&self, e: &Exponents) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Squared norms `α!(2/|λ|)^{|α|}` of the monomials for the λ-scaled Fock pairing.
    pub fn weights(&self, lambda: &Rational) -> Vec<Rational> {
        let base = (&Rational::from_int(2) / &lambda.abs()).pow(self.s);
        self.monos.iter().map(|e| &multi_factorial(e) * &base).collect()
    }

    pub fn to_poly(&self, coords: &[Scalar]) -> FockPoly {
        self.monos
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    }

    pub fn to_coords(&self, p: &FockPoly) -> Result<Vec<Scalar>> {
        let mut v = vec![Scalar::ZERO; self.len()];
        for (e, c) in p {
            let k = self
                .position(e)
                .ok_or_else(|| Error::Degree(format!("monomial of degree {} outside P^{{{},0}}", e.iter().map(|&x| x as u32).sum::<u32>(), self.s)))?;
            v[k] = c.clone();
        }
        Ok(v)
    }
}

/// A holomorphic polynomial on `𝔳`, keyed by exponents of length κ.
pub type FockPoly = BTreeMap<Exponents, Scalar>;

fn add_to(p: &mut FockPoly, e: Exponents, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(e.clone()).or_insert(Scalar::ZERO);
    *entry += &c;
    if entry.is_zero() {
        p.remove(&e);
    }
}

/// Exact matrix of a linear map between two Fock components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    pub source: FockBasis,
    pub target: FockBasis,
    pub matrix: Matrix,
}

impl GradedMatrix {
    pub fn compose(&self, inner: &GradedMatrix) -> Result<GradedMatrix> {
        if inner.target != self.source {
            return Err(Error::Degree(String::from("graded matrices do not compose: degree mismatch")));
        }
        Ok(GradedMatrix { source: inner.source.clone(), target: self.target.clone(), matrix: &self.matrix * &inner.matrix })
    }

    /// Adjoint with respect to the λ-scaled Fock pairings on source and target.
    pub fn fock_adjoint(&self, lambda: &Rational) -> GradedMatrix {
        let ws = self.source.weights(lambda);
        let wt = self.target.weights(lambda);
        let inv: Vec<Rational> = ws.iter().map(Rational::recip).collect();
        let m = self.matrix.adjoint().scale_rows(&inv);
        // right-multiplication by diag(wt)
        let mut out = m.clone();
        for i in 0..out.nrows() {
            for j in 0..out.ncols() {
                out[(i, j)] = m[(i, j)].scale(&wt[j]);
            }
        }
        GradedMatrix { source: self.target.clone(), target: self.source.clone(), matrix: out }
    }
}

fn check_lambda(lambda: &Rational) -> Result<()> {
    if lambda.is_zero() {
        return Err(Error::Parameter(String::from("λ must be nonzero")));
    }
    Ok(())
}

/// Fock degree shift of a normal ordered monomial.
fn shift_of(key: &Exponents, kappa: usize, positive: bool) -> i64 {
    let a: i64 = key[..kappa].iter().map(|&x| x as i64).sum();
    let b: i64 = key[kappa..2 * kappa].iter().map(|&x| x as i64).sum();
    if positive {
        b - a
    } else {
        a - b
    }
}

/// Applies `dπ_λ(e)` to a holomorphic polynomial.
pub fn apply_pbw(e: &Pbw, lambda: &Rational, f: &FockPoly) -> Result<FockPoly> {
    check_lambda(lambda)?;
    let k = e.kappa();
    let positive = !lambda.is_negative();
    let lam = Scalar::real(lambda.clone());
    let t_val = lam.mul_i();
    let half = Scalar::real(lambda * &Rational::new(1, 2));
    let mut out = FockPoly::new();
    for (key, c) in e.terms() {
        let a = &key[..k];
        let b = &key[k..2 * k];
        let ct = key[2 * k] as u32;
        let mut coeff = c * &t_val.pow(ct);
        let (mult, diff) = if positive {
            // Z̄^b first: multiplication by (−λ/2)^{|b|} v^b, then ∂^a
            let nb: u32 = b.iter().map(|&x| x as u32).sum();
            coeff = &coeff * &(-&half).pow(nb);
            (b, a)
        } else {
            // Z̄^b first: ∂^b, then multiplication by (λ/2)^{|a|} v^a
            let na: u32 = a.iter().map(|&x| x as u32).sum();
            coeff = &coeff * &half.pow(na);
            (a, b)
        };
        for (mono, x) in f {
            let mut m = mono.clone();
            let mut w = &coeff * x;
            if positive {
                for j in 0..k {
                    m[j] += mult[j];
                }
            }
            let mut dead = false;
            for j in 0..k {
                for step in 0..diff[j] {
                    if m[j] == 0 {
                        dead = true;
                        break;
                    }
                    w = w.scale(&Rational::from(m[j] as u64));
                    m[j] -= 1;
                    let _ = step;
                }
                if dead {
                    break;
                }
            }
            if dead {
                continue;
            }
            if !positive {
                for j in 0..k {
                    m[j] += mult[j];
                }
            }
            add_to(&mut out, m, w);
        }
    }
    Ok(out)
}

/// `dπ_λ(e)` restricted to `P^{s,0}`, mapping into the component it lands in.
pub fn dpi_matrix(e: &Pbw, lambda: &Rational, s: u32) -> Result<GradedMatrix> {
    check_lambda(lambda)?;
    let k = e.kappa();
    let positive = !lambda.is_negative();
    let mut shift: Option<i64> = None;
    for (key, _) in e.terms() {
        let sh = shift_of(key, k, positive);
        match shift {
            None => shift = Some(sh),
            Some(x) if x != sh => {
                return Err(Error::Degree(String::from("operator mixes Fock degree shifts")));
            }
            _ => {}
        }
    }
    let shift = shift.unwrap_or(0);
    let source = FockBasis::new(k, s);
    let ts = s as i64 + shift;
    let target = if ts < 0 { FockBasis::empty(k) } else { FockBasis::new(k, ts as u32) };
    let mut matrix = Matrix::zeros(target.len(), source.len());
    for (j, mono) in source.monomials().iter().enumerate() {
        let mut f = FockPoly::new();
        f.insert(mono.clone(), Scalar::ONE);
        for (e2, c) in apply_pbw(e, lambda, &f)? {
            let i = target.position(&e2).expect("image has the target degree");
            matrix[(i, j)] = c;
        }
    }
    Ok(GradedMatrix { source, target, matrix })
}

/// `dπ_λ` of a coordinate-form operator, through its normal ordered form.
pub fn dpi_matrix_diffop(d: &nilgroup::DiffOp, lambda: &Rational, s: u32) -> Result<GradedMatrix> {
    dpi_matrix(&d.to_pbw()?, lambda, s)
}

/// Matrix of `φ ↦ −(X v)·∇φ` on `P^{s,0}`.
pub fn dsigma_geom(x: &Matrix, basis: &FockBasis) -> Matrix {
    let k = basis.kappa;
    let mut m = Matrix::zeros(basis.len(), basis.len());
    for (col, e) in basis.monomials().iter().enumerate() {
        for a in 0..k {
            if e[a] == 0 {
                continue;
            }
            for b in 0..k {
                let xab = &x[(a, b)];
                if xab.is_zero() {
                    continue;
                }
                let mut f = e.clone();
                f[a] -= 1;
                f[b] += 1;
                let row = basis.position(&f).expect("degree preserved");
                m[(row, col)] -= &xab.scale(&Rational::from(e[a] as u64));
            }
        }
    }
    m
}

/// The matrix whose geometric action on `P^{s,0}` intertwines `dπ_λ` with the
/// `K`-action on symbols: `conj(X)` in the `λ > 0` model, `X` in the
/// conjugate one.
pub fn fock_generator(x: &Matrix, lambda: &Rational) -> Matrix {
    if lambda.is_negative() {
        x.clone()
    } else {
        x.conj()
    }
}

/// `dσ_met(X) = dσ_geom(X) − ½ tr(X)·Id`.
pub fn dsigma_met(x: &Matrix, basis: &FockBasis) -> Matrix {
    let shift = x.trace().scale(&Rational::new(1, 2));
    &dsigma_geom(x, basis) - &Matrix::identity(basis.len()).scale(&shift)
}

#[derive(Clone, Debug)]
pub struct MetaplecticReport {
    pub checked: Vec<u32>,
    /// `(s, row, col, lhs, rhs)` of the first mismatch.
    pub mismatch: Option<(u32, usize, usize, Scalar, Scalar)>,
}

impl MetaplecticReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Checks `dπ_λ(i L_C) = (λ/2) dσ_met(iC)` on `P^{s,0}` for all `s ≤ smax`.
pub fn check_metaplectic(c: &Matrix, lambda: &Rational, smax: u32) -> Result<MetaplecticReport> {
    if !c.is_hermitian() {
        return Err(Error::Parameter(String::from("C must be hermitian")));
    }
    check_lambda(lambda)?;
    let ic = c.scale(&Scalar::I);
    let lhs_op = l_c(c).scale(&Scalar::I);
    let mut checked = Vec::new();
    for s in 0..=smax {
        let basis = FockBasis::new(c.nrows(), s);
        let lhs = dpi_matrix(&lhs_op, lambda, s)?.matrix;
        let rhs = dsigma_met(&ic, &basis).scale(&Scalar::real(lambda * &Rational::new(1, 2)));
        checked.push(s);
        if let Some((i, j, a, b)) = lhs.first_difference(&rhs) {
            return Ok(MetaplecticReport { checked, mismatch: Some((s, i, j, a, b)) });
        }
    }
    Ok(MetaplecticReport { checked, mismatch: None })
}

/// The scalar by which `dπ_λ(e)` acts on the span of `vectors`; errors when
/// the restriction is not scalar.
pub fn eigenvalue_on(e: &Pbw, lambda: &Rational, basis: &FockBasis, vectors: &[Vec<Scalar>]) -> Result<Scalar> {
    let mut value: Option<Scalar> = None;
    for v in vectors {
        let img = apply_pbw(e, lambda, &basis.to_poly(v))?;
        let w = basis.to_coords(&img)?;
        let (k, lead) = v.iter().enumerate().find(|(_, x)| !x.is_zero()).ok_or_else(|| Error::Parameter(String::from("zero vector")))?;
        let c = &w[k] / lead;
        if w.iter().zip(v).any(|(a, b)| *a != &c * b) {
            return Err(Error::NotScalar(format!("vector is not an eigenvector at λ={}", lambda)));
        }
        match &value {
            None => value = Some(c),
            Some(x) if *x != c => return Err(Error::NotScalar(format!("eigenvalues {} and {} on one block", x, c))),
            _ => {}
        }
    }
    value.ok_or_else(|| Error::Parameter(String::from("empty block")))
}

/// `ξ_j(λ, μ)` for a spectral generator on a labelled block.
pub fn spectral_eigenvalue(e: &Pbw, lambda: &Rational, basis: &FockBasis, block: &FockBlock) -> Result<Scalar> {
    eigenvalue_on(e, lambda, basis, &block.vectors)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub lambda: Rational,
    pub label: BlockLabel,
    pub xi: Vec<Scalar>,
}

/// Blocks of `P^{s,0}` for `s ≤ smax`.
pub fn blocks_upto(pair: &PairDescriptor, smax: u32) -> Result<Vec<(FockBasis, Vec<FockBlock>)>> {
    (0..=smax).map(|s| Ok((FockBasis::new(pair.kappa, s), isotypic_components(pair, s)?))).collect()
}

/// Spectral points `ξ(λ, μ)` for all blocks with `s ≤ smax`.
pub fn spectrum_points(pair: &PairDescriptor, lambdas: &[Rational], smax: u32) -> Result<Vec<SpectrumPoint>> {
    let gens = nilgroup::spectral_generators(pair);
    let blocks = blocks_upto(pair, smax)?;
    let mut out = Vec::new();
    for lambda in lambdas {
        check_lambda(lambda)?;
        for (basis, bl) in &blocks {
            for b in bl {
                let xi = gens.iter().map(|g| spectral_eigenvalue(g, lambda, basis, b)).collect::<Result<Vec<_>>>()?;
                out.push(SpectrumPoint { lambda: lambda.clone(), label: b.label, xi });
            }
        }
    }
    Ok(out)
}

/// Admissibility of a block for `M_m`: `s ≥ m` on line 6, `i ≥ m` on line 8.
pub fn admissible(label: &BlockLabel, m: u32) -> bool {
    match label.i {
        Some(i) => i >= m,
        None => label.s >= m,
    }
}

#[derive(Clone, Debug)]
pub struct BlockAction {
    pub label: BlockLabel,
    pub dim: usize,
    pub joint_rank: usize,
    /// Every component maps the block into itself.
    pub preserved: bool,
}

#[derive(Clone, Debug)]
pub struct MmAction {
    pub m: u32,
    pub s: u32,
    pub matrices: Vec<GradedMatrix>,
    pub blocks: Vec<BlockAction>,
}

/// Matrices of `dπ_λ(A_j)` on `P^{s,0}` with the per-block joint rank and the
/// block-preservation test.
pub fn mm_action(pair: &PairDescriptor, mm: &EquivariantOperator, lambda: &Rational, s: u32) -> Result<MmAction> {
    let matrices = mm.components.iter().map(|a| dpi_matrix(a, lambda, s)).collect::<Result<Vec<_>>>()?;
    for g in &matrices {
        if g.target.s != s || g.target.len() != g.source.len() {
            return Err(Error::Degree(String::from("M_m component does not preserve the Fock degree")));
        }
    }
    let blocks = isotypic_components(pair, s)?;
    let n = FockBasis::new(pair.kappa, s).len();
    // coordinates relative to the concatenated block basis
    let all: Vec<SparseVec> = blocks
        .iter()
        .flat_map(|b| b.vectors.iter())
        .map(|v| v.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect())
        .collect();
    let mut offsets = Vec::new();
    let mut off = 0;
    for b in &blocks {
        offsets.push(off);
        off += b.dim();
    }
    let mut out = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        let bm = b.as_matrix(n);
        let mut stacked: Vec<SparseVec> = Vec::new();
        let mut preserved = true;
        for g in &matrices {
            let img = &g.matrix * &bm;
            for col in 0..img.ncols() {
                let v: SparseVec = (0..n).filter(|&r| !img[(r, col)].is_zero()).map(|r| (r, img[(r, col)].clone())).collect();
                if v.is_empty() {
                    continue;
                }
                let (x, _) = linalg::solve_columns(&all, &v).ok_or_else(|| Error::Inconsistent(String::from("blocks do not span P^{s,0}")))?;
                if x.iter().enumerate().any(|(k, c)| !c.is_zero() && (k < offsets[bi] || k >= offsets[bi] + b.dim())) {
                    preserved = false;
                }
                stacked.push(v);
            }
        }
        let joint_rank = linalg::rank(&stacked, n);
        out.push(BlockAction { label: b.label, dim: b.dim(), joint_rank, preserved });
    }
    Ok(MmAction { m: mm.m, s, matrices, blocks: out })
}

/// `ξ`-variable space `(ξ₁, …, ξ_{d₀−1}, λ)`.
pub fn xi_vars(pair: &PairDescriptor) -> VarSpace {
    VarSpace::new(0, 0, 0, pair.d0)
}

/// Weights `δ_j` of the spectral coordinates under dilation.
pub fn xi_weights(pair: &PairDescriptor) -> Vec<u32> {
    if pair.line() == 8 {
        vec![1, 2, 1]
    } else {
        vec![1, 1]
    }
}

/// Eigenvalue of `dπ_λ(U_m)` on each vector of a block, computed as
/// `Σ_j dπ(A_j*) dπ(A_j) / ‖a_j‖²`.
pub fn um_eigenvalue(mm: &EquivariantOperator, lambda: &Rational, basis: &FockBasis, block: &FockBlock) -> Result<Scalar> {
    let adjoints: Vec<Pbw> = mm.components.iter().map(Pbw::adjoint).collect();
    let mut value: Option<Scalar> = None;
    for v in &block.vectors {
        let f = basis.to_poly(v);
        let mut acc = FockPoly::new();
        for ((a, ad), n) in mm.components.iter().zip(&adjoints).zip(&mm.vm.norms) {
            let g = apply_pbw(ad, lambda, &apply_pbw(a, lambda, &f)?)?;
            let inv = n.recip();
            for (e, c) in g {
                add_to(&mut acc, e, c.scale(&inv));
            }
        }
        let w = basis.to_coords(&acc)?;
        let (k, lead) = v.iter().enumerate().find(|(_, x)| !x.is_zero()).expect("nonzero block vector");
        let c = &w[k] / lead;
        if w.iter().zip(v).any(|(a, b)| *a != &c * b) {
            return Err(Error::NotScalar(format!("U_{} is not scalar on block {}", mm.m, block.label)));
        }
        match &value {
            None => value = Some(c),
            Some(x) if *x != c => return Err(Error::NotScalar(format!("U_{} has two eigenvalues on block {}", mm.m, block.label))),
            _ => {}
        }
    }
    value.ok_or_else(|| Error::Parameter(String::from("empty block")))
}

/// Result of fitting `u_m` to the exact spectrum of `U_m`.
#[derive(Clone, Debug)]
pub struct UmFit {
    pub m: u32,
    /// Normalized so the `ξ₁^{2m}` coefficient is 1 (or the first nonzero one).
    pub poly: MultiPoly,
    /// The factor `c` with `U_m`-eigenvalue `= c·poly(ξ)`.
    pub scale: Scalar,
    pub training: usize,
    pub held_out: usize,
}

fn weighted_monomials(weights: &[u32], total: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for e in (0..=total).flat_map(|d| compositions(weights.len(), d)) {
        let w: u32 = e.iter().zip(weights).map(|(&a, &b)| a as u32 * b).sum();
        if w == total {
            out.push(e);
        }
    }
    out.sort();
    out.reverse();
    out
}

fn xi_point(vars: VarSpace, xi: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(vars.nvars(), xi.len());
    xi.to_vec()
}

/// Sample `λ` values used for training and held-out verification.
pub fn um_sample_lambdas() -> (Vec<Rational>, Vec<Rational>) {
    (
        vec![Rational::ONE, Rational::from_int(2), Rational::from_int(-1), Rational::new(1, 2)],
        vec![Rational::from_int(3), Rational::new(-3, 2)],
    )
}

/// Smallest sample cap on `s` for which the training blocks determine `u_m`.
/// On line 8 the labels `(s, i)` with `s < S` form a triangle, and a
/// weight-`2m` polynomial needs `S ≥ 2m + 1` before they stop lying on a
/// common curve of that degree.
pub fn um_min_smax(pair: &PairDescriptor, m: u32) -> u32 {
    if pair.line() == 8 {
        (m + 3).max(2 * m + 1)
    } else {
        m + 3
    }
}

/// Interpolates `u_m` from eigenvalues of `U_m` on blocks with `s ≤ smax`;
/// training uses `s < smax` and the first λ set, everything else is held out
/// and must match exactly.
pub fn compute_um(pair: &PairDescriptor, m: u32, smax: u32) -> Result<UmFit> {
    let mm = nilgroup::build_mm(pair, m)?;
    compute_um_with(pair, &mm, smax)
}

pub fn compute_um_with(pair: &PairDescriptor, mm: &EquivariantOperator, smax: u32) -> Result<UmFit> {
    let m = mm.m;
    let need = um_min_smax(pair, m);
    if smax < need {
        return Err(Error::Parameter(format!("sample cap s ≤ {} is too small for m = {} (need ≥ {})", smax, m, need)));
    }
    let vars = xi_vars(pair);
    let monos = weighted_monomials(&xi_weights(pair), 2 * m);
    let gens = nilgroup::spectral_generators(pair);
    let blocks = blocks_upto(pair, smax)?;
    let (train_l, held_l) = um_sample_lambdas();
    let mut train: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
    let mut held: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
    for (is_train_l, lambdas) in [(true, &train_l), (false, &held_l)] {
        for lambda in lambdas.iter() {
            for (basis, bl) in &blocks {
                for b in bl {
                    let xi = gens.iter().map(|g| spectral_eigenvalue(g, lambda, basis, b)).collect::<Result<Vec<_>>>()?;
                    let ev = um_eigenvalue(mm, lambda, basis, b)?;
                    if is_train_l && basis.s < smax {
                        train.push((xi, ev));
                    } else {
                        held.push((xi, ev));
                    }
                }
            }
        }
    }
    let eval_monos = |xi: &[Scalar]| -> Vec<Scalar> {
        monos
            .iter()
            .map(|e| {
                let mut acc = Scalar::ONE;
                for (x, &k) in xi.iter().zip(e.iter()) {
                    acc = &acc * &x.pow(k as u32);
                }
                acc
            })
            .collect()
    };
    // columns: monomials; rows: samples
    let cols: Vec<SparseVec> = (0..monos.len())
        .map(|j| {
            train
                .iter()
                .enumerate()
                .map(|(r, (xi, _))| (r, eval_monos(xi)[j].clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    let rhs: SparseVec = train.iter().enumerate().filter(|(_, (_, v))| !v.is_zero()).map(|(r, (_, v))| (r, v.clone())).collect();
    let (coef, unique) = linalg::solve_columns(&cols, &rhs)
        .ok_or_else(|| Error::Inconsistent(format!("no weighted-homogeneous polynomial of degree {} fits the U_{} spectrum", 2 * m, m)))?;
    if !unique {
        return Err(Error::Inconsistent(String::from("training samples do not determine u_m")));
    }
    let mut poly = MultiPoly::zero(vars);
    for (e, c) in monos.iter().zip(&coef) {
        poly.add_term(e.clone(), c.clone());
    }
    for (xi, ev) in &held {
        let got = poly.evaluate(&xi_point(vars, xi));
        if got != *ev {
            return Err(Error::Inconsistent(format!("held-out sample ξ={:?}: fit gives {}, spectrum gives {}", xi, got, ev)));
        }
    }
    let mut lead_key = Exponents::from_elem(0, vars.nvars());
    lead_key[0] = (2 * m) as u8;
    let scale = if !poly.coeff(&lead_key).is_zero() {
        poly.coeff(&lead_key)
    } else {
        poly.terms().last().map(|(_, c)| c.clone()).unwrap_or(Scalar::ONE)
    };
    let normalized = poly.scale(&scale.recip());
    Ok(UmFit { m, poly: normalized, scale, training: train.len(), held_out: held.len() })
}

/// `∏_{s<m} (ξ₁² − (2s+κ)² λ²)` in the line-6 spectral variables.
pub fn line6_product(pair: &PairDescriptor, m: u32) -> MultiPoly {
    let vars = xi_vars(pair);
    let x = MultiPoly::var(vars, VarKind::Xi, 0);
    let l = MultiPoly::var(vars, VarKind::Xi, pair.d0 - 1);
    let mut out = MultiPoly::one(vars);
    for s in 0..m {
        let c = (2 * s as i64 + pair.kappa as i64).pow(2);
        out = &out * &(&(&x * &x) - &(&l * &l).scale(&Scalar::int(c)));
    }
    out
}

/// `x_{s,i}`: eigenvalue of `Ď₂` at λ = ±1 on the line-8 block `(s, i)`,
/// read off the extremal vector `v₁₁^i·Δ^j`.
pub fn line8_xi2(pair: &PairDescriptor, s: u32, i: u32, lambda: &Rational) -> Result<Scalar> {
    let d2 = &nilgroup::spectral_generators(pair)[1];
    line8_xi2_with(pair, d2, s, i, lambda)
}

fn line8_xi2_with(pair: &PairDescriptor, d2: &Pbw, s: u32, i: u32, lambda: &Rational) -> Result<Scalar> {
    if pair.line() != 8 || i > s || (s - i) % 2 != 0 {
        return Err(Error::Parameter(format!("no line-8 block with s={}, i={}", s, i)));
    }
    let n = pair.n();
    let k = pair.kappa;
    let j = (s - i) / 2;
    let mono = |idx: &[usize]| {
        let mut e = Exponents::from_elem(0, k);
        for &x in idx {
            e[x] += 1;
        }
        e
    };
    let mut f = FockPoly::new();
    f.insert(mono(&vec![0; i as usize]), Scalar::ONE);
    let mut delta = FockPoly::new();
    delta.insert(mono(&[0, n + 1]), Scalar::ONE);
    delta.insert(mono(&[1, n]), Scalar::int(-1));
    for _ in 0..j {
        let mut next = FockPoly::new();
        for (a, x) in &f {
            for (b, y) in &delta {
                let e: Exponents = a.iter().zip(b.iter()).map(|(p, q)| p + q).collect();
                add_to(&mut next, e, x * y);
            }
        }
        f = next;
    }
    poly_eigenvalue(d2, lambda, &f)
}

/// The scalar `c` with `dπ_λ(e) f = c·f`, without building a basis.
pub fn poly_eigenvalue(e: &Pbw, lambda: &Rational, f: &FockPoly) -> Result<Scalar> {
    let (lead, x) = f.iter().next().ok_or_else(|| Error::Parameter(String::from("zero vector")))?;
    let img = apply_pbw(e, lambda, f)?;
    let c = &img.get(lead).cloned().unwrap_or(Scalar::ZERO) / x;
    let same = img.len() == f.len() && f.iter().all(|(m, y)| img.get(m).is_some_and(|z| *z == &c * y)) || c.is_zero() && img.is_empty();
    if !same {
        return Err(Error::NotScalar(format!("not an eigenvector at λ={}", lambda)));
    }
    Ok(c)
}

/// Evaluates `p` on the line through `S_m` given by `ξ = (c₁λ, c₂λ², λ)`,
/// returning a polynomial in `λ` (as the last ξ variable).
fn restrict_to_ray(p: &MultiPoly, coeffs: &[Scalar]) -> MultiPoly {
    let vars = p.vars();
    let l = MultiPoly::var(vars, VarKind::Xi, vars.xi - 1);
    let weights = if vars.xi == 3 { vec![1u32, 2] } else { vec![1u32] };
    let mut images: Vec<MultiPoly> = coeffs.iter().zip(&weights).map(|(c, &w)| l.pow(w).scale(c)).collect();
    images.push(l.clone());
    p.substitute(&images, vars)
}

/// Rays `(c₁, [c₂])` of `S_m` for `λ > 0` and `λ < 0` with `s ≤ smax`.
pub fn sm_rays(pair: &PairDescriptor, m: u32, smax: u32) -> Result<Vec<(BlockLabel, bool, Vec<Scalar>)>> {
    let mut out = Vec::new();
    let kappa = pair.kappa as i64;
    let gens = nilgroup::spectral_generators(pair);
    for s in 0..=smax {
        let labels: Vec<Option<u32>> = if pair.line() == 6 {
            if s < m {
                vec![None]
            } else {
                vec![]
            }
        } else {
            (0..m.min(s + 1)).filter(|i| (s - i) % 2 == 0).map(Some).collect()
        };
        for i in labels {
            for positive in [true, false] {
                let sign = if positive { 1 } else { -1 };
                let mut c = vec![Scalar::int(sign * (2 * s as i64 + kappa))];
                if let Some(i) = i {
                    let lam = Rational::from_int(sign);
                    c.push(line8_xi2_with(pair, &gens[1], s, i, &lam)?);
                }
                out.push((BlockLabel { s, i }, positive, c));
            }
        }
    }
    Ok(out)
}

/// Checks that `p(ξ)` vanishes on the rays of `S_m` with `s ≤ smax`.
pub fn vanishes_on_sm(pair: &PairDescriptor, m: u32, p: &MultiPoly, smax: u32) -> Result<()> {
    for (label, positive, c) in sm_rays(pair, m, smax)? {
        if !restrict_to_ray(p, &c).is_zero() {
            return Err(Error::DoesNotVanish(format!("nonzero on block {} for λ {} 0", label, if positive { ">" } else { "<" })));
        }
    }
    Ok(())
}

/// Long division by `u` in the variable `main`, whose leading coefficient in
/// `u` must be a nonzero constant. Returns `(q, r)` with `p = u·q + r`.
pub fn divide_main(p: &MultiPoly, u: &MultiPoly, main: usize) -> Result<(MultiPoly, MultiPoly)> {
    let vars = p.vars();
    let deg = |f: &MultiPoly| f.terms().map(|(e, _)| e[main]).max().unwrap_or(0);
    let du = deg(u);
    let lead: Vec<(Exponents, Scalar)> = u.terms().filter(|(e, _)| e[main] == du).map(|(e, c)| (e.clone(), c.clone())).collect();
    if lead.len() != 1 || lead[0].0.iter().enumerate().any(|(i, &x)| i != main && x != 0) {
        return Err(Error::Inconsistent(String::from("divisor's leading coefficient in the main variable is not constant")));
    }
    let lc_inv = lead[0].1.recip();
    let mut r = p.clone();
    let mut q = MultiPoly::zero(vars);
    while !r.is_zero() && deg(&r) >= du {
        let dr = deg(&r);
        let mut t = MultiPoly::zero(vars);
        for (e, c) in r.terms().filter(|(e, _)| e[main] == dr) {
            let mut f = e.clone();
            f[main] -= du as u8;
            t.add_term(f, c * &lc_inv);
        }
        q = &q + &t;
        r = &r - &(&t * u);
    }
    Ok((q, r))
}

/// Exact quotient `p / u_m` after checking that `p` vanishes on `S_m`.
pub fn divide_by_um(pair: &PairDescriptor, um: &UmFit, p: &MultiPoly) -> Result<MultiPoly> {
    let vars = xi_vars(pair);
    if p.vars() != vars {
        return Err(Error::VarMismatch { left: p.vars(), right: vars });
    }
    let smax = p.total_degree() + um.m + 2;
    vanishes_on_sm(pair, um.m, p, smax)?;
    let main = if pair.line() == 8 { 1 } else { 0 };
    let (q, r) = divide_main(p, &um.poly, main)?;
    if !r.is_zero() {
        return Err(Error::Remainder(format!("{} terms remain", r.len())));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilgroup::Letter;

    #[test]
    fn fock_basis_sizes() {
        assert_eq!(FockBasis::new(4, 2).len(), 10);
        assert_eq!(FockBasis::new(2, 3).len(), 4);
        assert_eq!(FockBasis::new(3, 0).len(), 1);
    }

    #[test]
    fn z_and_zbar_images() {
        let z1 = Pbw::letter(2, Letter::Z(0));
        let m = dpi_matrix(&z1, &Rational::ONE, 2).unwrap();
        // v1^2 -> 2 v1
        let src = m.source.position(&Exponents::from_slice(&[2, 0])).unwrap();
        let tgt = m.target.position(&Exponents::from_slice(&[1, 0])).unwrap();
        assert_eq!(m.matrix[(tgt, src)], Scalar::int(2));
        let zb1 = Pbw::letter(2, Letter::Zb(0));
        let m = dpi_matrix(&zb1, &Rational::ONE, 1).unwrap();
        let src = m.source.position(&Exponents::from_slice(&[1, 0])).unwrap();
        let tgt = m.target.position(&Exponents::from_slice(&[2, 0])).unwrap();
        assert_eq!(m.matrix[(tgt, src)], Scalar::frac(-1, 2));
    }

    #[test]
    fn lambda_zero_rejected() {
        assert!(dpi_matrix(&Pbw::one(2), &Rational::ZERO, 1).is_err());
    }

    #[test]
    fn divide_main_exact() {
        let vars = VarSpace::new(0, 0, 0, 2);
        let x = MultiPoly::var(vars, VarKind::Xi, 0);
        let l = MultiPoly::var(vars, VarKind::Xi, 1);
        let u = &(&x * &x) - &(&l * &l).scale(&Scalar::int(4));
        let p = &u * &x;
        let (q, r) = divide_main(&p, &u, 0).unwrap();
        assert_eq!(q, x);
        assert!(r.is_zero());
    }
}
