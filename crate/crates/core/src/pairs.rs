//! The supported Gelfand pairs: Lie-algebra actions on `v ⊕ 𝔷₀`, invariant
//! subspaces, harmonic projection and equivariant maps between submodules.
//!
//! Two families are implemented:
//!
//! * line 6: `K = U_n` on `𝔳 = ℂⁿ`, `𝔷₀ = 𝔰𝔲_n`;
//! * line 8: `K = U₂ × SU_n` on `𝔳 = ℂ² ⊗ ℂⁿ`, `𝔷₀ = 𝔰𝔲₂`.
//!
//! `z` coordinates are taken against hermitian matrices `h_a`, i.e.
//! `iz = Σ z_a h_a`, in Gell-Mann order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bargmann::{dsigma_geom, FockBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Rref, SparseVec};
use crate::poly::{compositions, Exponents, MultiPoly, Multidegree, VarKind, VarSpace};
use crate::rational::Rational;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairId {
    pub line: u32,
    pub n: u32,
}

impl PairId {
    pub const ALL: [PairId; 4] = [
        PairId { line: 6, n: 2 },
        PairId { line: 6, n: 3 },
        PairId { line: 8, n: 2 },
        PairId { line: 8, n: 3 },
    ];
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}:n={}", self.line, self.n)
    }
}

impl FromStr for PairId {
    type Err = Error;

    /// Parses identifiers of the form `L6:n=2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Schema(format!("malformed pair id {:?} (expected e.g. L6:n=2)", s));
        let rest = s.strip_prefix('L').ok_or_else(bad)?;
        let (line, n) = rest.split_once(":n=").ok_or_else(bad)?;
        let line: u32 = line.parse().map_err(|_| bad())?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        let id = PairId { line, n };
        if !PairId::ALL.contains(&id) {
            return Err(Error::UnsupportedPair { line, n });
        }
        Ok(id)
    }
}

/// Hermitian basis element type in Gell-Mann order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZKind {
    /// `E_jk + E_kj`
    X(usize, usize),
    /// `−iE_jk + iE_kj`
    Y(usize, usize),
    /// `diag(1,…,1,−l,0,…)` with `l` ones.
    D(usize),
}

fn unit(n: usize, j: usize, k: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(j, k)] = Scalar::ONE;
    m
}

/// Hermitian traceless basis of `i·𝔰𝔲_n`, orthogonal for the trace form.
pub fn su_basis(n: usize) -> Vec<(ZKind, Matrix)> {
    let mut out = Vec::new();
    for k in 1..n {
        for j in 0..k {
            out.push((ZKind::X(j, k), &unit(n, j, k) + &unit(n, k, j)));
            out.push((ZKind::Y(j, k), &unit(n, j, k).scale(&-Scalar::I) + &unit(n, k, j).scale(&Scalar::I)));
        }
        let mut d = Matrix::zeros(n, n);
        for i in 0..k {
            d[(i, i)] = Scalar::ONE;
        }
        d[(k, k)] = Scalar::int(-(k as i64));
        out.push((ZKind::D(k), d));
    }
    out
}

/// Coefficients of a hermitian traceless matrix in the basis `hs`.
fn coords_in(hs: &[Matrix], m: &Matrix) -> Vec<Scalar> {
    hs.iter()
        .map(|h| {
            let num = (m * h).trace();
            let den = (h * h).trace();
            &num / &den
        })
        .collect()
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut m = Matrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            if a[(i, j)].is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    m[(i * br + k, j * bc + l)] = &a[(i, j)] * &b[(k, l)];
                }
            }
        }
    }
    m
}

/// A real generator of `𝔨` acting on `v` and on `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieGenerator {
    pub name: String,
    /// κ×κ anti-hermitian matrix.
    pub xv: Matrix,
    /// ν₁×ν₁ real matrix.
    pub xz: Matrix,
    /// Member of the chosen maximal torus.
    pub torus: bool,
}

/// Derivation `−(dv·v)·∂_v − (dvbar·v̄)·∂_v̄ − (dz·z)·∂_z`. Real generators
/// give `dvbar = conj(dv)`; complexified ones need not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub dv: Matrix,
    pub dvbar: Matrix,
    pub dz: Matrix,
}

impl Derivation {
    pub fn of(g: &LieGenerator) -> Self {
        Derivation { dv: g.xv.clone(), dvbar: g.xv.conj(), dz: g.xz.clone() }
    }

    /// `a + c·b`
    pub fn combine(a: &Derivation, c: &Scalar, b: &Derivation) -> Derivation {
        Derivation {
            dv: &a.dv + &b.dv.scale(c),
            dvbar: &a.dvbar + &b.dvbar.scale(c),
            dz: &a.dz + &b.dz.scale(c),
        }
    }

    pub fn apply(&self, p: &MultiPoly) -> MultiPoly {
        let vars = p.vars();
        let blocks: [(VarKind, &Matrix); 3] = [(VarKind::V, &self.dv), (VarKind::VBar, &self.dvbar), (VarKind::Z, &self.dz)];
        let mut out = MultiPoly::zero(vars);
        for (e, c) in p.terms() {
            for (kind, mat) in blocks {
                let off = vars.offset(kind);
                for a in 0..vars.count(kind) {
                    let k = e[off + a];
                    if k == 0 {
                        continue;
                    }
                    let base = c.scale(&Rational::from(k as u64));
                    for b in 0..vars.count(kind) {
                        let m = &mat[(a, b)];
                        if m.is_zero() {
                            continue;
                        }
                        let mut f = e.clone();
                        f[off + a] -= 1;
                        f[off + b] += 1;
                        out.add_term(f, -(&base * m));
                    }
                }
            }
        }
        out
    }

    /// Conjugates the `z` block by `z = B w`, giving the derivation in `w` coordinates.
    fn in_frame(&self, b: &Matrix, b_inv: &Matrix) -> Derivation {
        Derivation { dv: self.dv.clone(), dvbar: self.dvbar.clone(), dz: &(b_inv * &self.dz) * b }
    }
}

/// One supported Gelfand pair with its exact Lie-algebra data.
#[derive(Clone, Debug)]
pub struct PairDescriptor {
    pub id: PairId,
    pub kappa: usize,
    pub nu1: usize,
    pub d0: usize,
    pub generators: Vec<LieGenerator>,
    /// The hermitian matrices `h_a` with `iz = Σ z_a h_a`.
    pub zbasis: Vec<Matrix>,
    pub zkinds: Vec<ZKind>,
    /// Simple raising operators of `𝔨_ℂ`, used for invariant computations.
    raising: Vec<Derivation>,
    /// `z = B w` where torus generators act diagonally on `w`.
    frame: Matrix,
    frame_inv: Matrix,
    /// For each torus generator, integer weights of `(v, v̄, w)` coordinates.
    weights: Vec<Vec<i64>>,
}

impl PairDescriptor {
    pub fn line(&self) -> u32 {
        self.id.line
    }

    pub fn n(&self) -> usize {
        self.id.n as usize
    }

    /// Variable space `(v, v̄, z)` without `t` or `ξ`.
    pub fn vars(&self) -> VarSpace {
        VarSpace::new(self.kappa, self.nu1, 0, 0)
    }

    /// The `v`-only variable space.
    pub fn vvars(&self) -> VarSpace {
        VarSpace::new(self.kappa, 0, 0, 0)
    }

    /// `iz` as a matrix with polynomial entries in the `z` variables.
    pub fn iz_matrix(&self, vars: VarSpace) -> Vec<Vec<MultiPoly>> {
        let m = self.zbasis[0].nrows();
        let mut out = vec![vec![MultiPoly::zero(vars); m]; m];
        for (a, h) in self.zbasis.iter().enumerate() {
            let za = MultiPoly::var(vars, VarKind::Z, a);
            for (i, row) in out.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    if !h[(i, j)].is_zero() {
                        entry.add_scaled(&za, &h[(i, j)]);
                    }
                }
            }
        }
        out
    }

    /// Weight-zero test in the torus frame for an exponent over `(v, v̄, w)`.
    fn weight_zero(&self, e: &[u8]) -> bool {
        self.weights
            .iter()
            .all(|w| w.iter().zip(e).map(|(a, &b)| a * b as i64).sum::<i64>() == 0)
    }

    /// Derivation of a complex element given as `P + iQ` with `P, Q ∈ 𝔨`.
    fn complexify(&self, p: &LieGenerator, q: &LieGenerator) -> Derivation {
        Derivation::combine(&Derivation::of(p), &Scalar::I, &Derivation::of(q))
    }
}

fn adjoint_coords(hs: &[Matrix], y: &Matrix) -> Matrix {
    let n = hs.len();
    let mut xz = Matrix::zeros(n, n);
    for (a, h) in hs.iter().enumerate() {
        let c = coords_in(hs, &y.commutator(h));
        for (b, x) in c.into_iter().enumerate() {
            xz[(b, a)] = x;
        }
    }
    xz
}

/// Real basis of `𝔲_n`: torus `iE_jj`, then `E_jk − E_kj` and `i(E_jk + E_kj)`.
fn u_basis(n: usize) -> Vec<(String, Matrix, bool)> {
    let mut out = Vec::new();
    for j in 0..n {
        out.push((format!("iE{}{}", j + 1, j + 1), unit(n, j, j).scale(&Scalar::I), true));
    }
    for j in 0..n {
        for k in j + 1..n {
            out.push((format!("A{}{}", j + 1, k + 1), &unit(n, j, k) - &unit(n, k, j), false));
            out.push((format!("S{}{}", j + 1, k + 1), (&unit(n, j, k) + &unit(n, k, j)).scale(&Scalar::I), false));
        }
    }
    out
}

/// Real basis of `𝔰𝔲_n`: torus `i(E_jj − E_{j+1,j+1})`, then off-diagonals.
fn su_real_basis(n: usize) -> Vec<(String, Matrix, bool)> {
    let mut out = Vec::new();
    for j in 0..n - 1 {
        out.push((format!("iH{}", j + 1), (&unit(n, j, j) - &unit(n, j + 1, j + 1)).scale(&Scalar::I), true));
    }
    out.extend(u_basis(n).into_iter().filter(|g| !g.2));
    out
}

/// `P, Q ∈ 𝔲` with `E_jk = P + iQ`.
fn raising_parts(n: usize, j: usize, k: usize) -> (Matrix, Matrix) {
    let e = unit(n, j, k);
    let p = (&e - &e.adjoint()).scale(&Scalar::frac(1, 2));
    let q = (&e + &e.adjoint()).scale(&Scalar::new(Rational::ZERO, Rational::new(-1, 2)));
    (p, q)
}

fn weight_frame(kinds: &[ZKind]) -> (Matrix, Matrix) {
    let n = kinds.len();
    let mut b = Matrix::zeros(n, n);
    let half = Scalar::frac(1, 2);
    let ihalf = Scalar::new(Rational::ZERO, Rational::new(1, 2));
    for (x, k) in kinds.iter().enumerate() {
        match *k {
            ZKind::X(j, l) => {
                let y = kinds.iter().position(|kk| *kk == ZKind::Y(j, l)).expect("paired Y coordinate");
                // w_x = z_x − i z_y, w_y = z_x + i z_y
                b[(x, x)] = half.clone();
                b[(x, y)] = half.clone();
                b[(y, x)] = ihalf.clone();
                b[(y, y)] = -&ihalf;
            }
            ZKind::Y(..) => {}
            ZKind::D(_) => b[(x, x)] = Scalar::ONE,
        }
    }
    let inv = b.inverse().expect("weight frame is invertible");
    (b, inv)
}

/// Builds the descriptor for `(line, n)`.
pub fn make_pair(line: u32, n: u32) -> Result<PairDescriptor> {
    let id = PairId { line, n };
    if !PairId::ALL.contains(&id) {
        return Err(Error::UnsupportedPair { line, n });
    }
    let nn = n as usize;
    let (zkinds, zbasis): (Vec<ZKind>, Vec<Matrix>) = match line {
        6 => su_basis(nn).into_iter().unzip(),
        _ => su_basis(2).into_iter().unzip(),
    };
    let (generators, raising_pq, kappa, d0) = match line {
        6 => {
            let gens: Vec<LieGenerator> = u_basis(nn)
                .into_iter()
                .map(|(name, y, torus)| LieGenerator { name, xz: adjoint_coords(&zbasis, &y), xv: y, torus })
                .collect();
            let raising: Vec<(LieGenerator, LieGenerator)> = (0..nn - 1)
                .map(|j| {
                    let (p, q) = raising_parts(nn, j, j + 1);
                    let mk = |m: Matrix| LieGenerator { name: String::new(), xz: adjoint_coords(&zbasis, &m), xv: m, torus: false };
                    (mk(p), mk(q))
                })
                .collect();
            (gens, raising, nn, 2)
        }
        _ => {
            let id2 = Matrix::identity(2);
            let idn = Matrix::identity(nn);
            let zero_z = Matrix::zeros(3, 3);
            let left = |a: &Matrix| kron(a, &idn);
            let right = |y: &Matrix| kron(&id2, &y.transpose().scale(&Scalar::int(-1)));
            let mut gens: Vec<LieGenerator> = u_basis(2)
                .into_iter()
                .map(|(name, a, torus)| LieGenerator { name: format!("u2:{}", name), xv: left(&a), xz: adjoint_coords(&zbasis, &a), torus })
                .collect();
            gens.extend(su_real_basis(nn).into_iter().map(|(name, y, torus)| LieGenerator {
                name: format!("su{}:{}", nn, name),
                xv: right(&y),
                xz: zero_z.clone(),
                torus,
            }));
            let mut raising = Vec::new();
            let (p, q) = raising_parts(2, 0, 1);
            let mk2 = |m: Matrix| LieGenerator { name: String::new(), xv: left(&m), xz: adjoint_coords(&zbasis, &m), torus: false };
            raising.push((mk2(p), mk2(q)));
            for j in 0..nn - 1 {
                let (p, q) = raising_parts(nn, j, j + 1);
                let mkn = |m: Matrix| LieGenerator { name: String::new(), xv: right(&m), xz: zero_z.clone(), torus: false };
                raising.push((mkn(p), mkn(q)));
            }
            (gens, raising, 2 * nn, 3)
        }
    };
    let nu1 = zbasis.len();
    let (frame, frame_inv) = weight_frame(&zkinds);
    let mut weights = Vec::new();
    for g in generators.iter().filter(|g| g.torus) {
        let d = Derivation::of(g).in_frame(&frame, &frame_inv);
        let mut w = Vec::with_capacity(2 * kappa + nu1);
        for (mat, len) in [(&d.dv, kappa), (&d.dvbar, kappa), (&d.dz, nu1)] {
            for i in 0..len {
                for j in 0..len {
                    assert!(i == j || mat[(i, j)].is_zero(), "torus generator {} is not diagonal", g.name);
                }
                let x = &mat[(i, i)];
                assert!(x.re.is_zero() && x.im.is_integer(), "non-integral weight for {}", g.name);
                w.push(x.im.to_i64().expect("small weight"));
            }
        }
        weights.push(w);
    }
    let mut pair = PairDescriptor {
        id,
        kappa,
        nu1,
        d0,
        generators,
        zbasis,
        zkinds,
        raising: Vec::new(),
        frame,
        frame_inv,
        weights,
    };
    pair.raising = raising_pq
        .iter()
        .map(|(p, q)| pair.complexify(p, q).in_frame(&pair.frame, &pair.frame_inv))
        .collect();
    Ok(pair)
}

/// `dσ(X)p`: the derivation `−(Xv·v)·∂_v − (conj(Xv)·v̄)·∂_v̄ − (Xz·z)·∂_z`.
pub fn act(x: &LieGenerator, p: &MultiPoly) -> MultiPoly {
    Derivation::of(x).apply(p)
}

/// Basis of a subspace together with a label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub label: String,
    pub degree: Option<Multidegree>,
    pub vectors: Vec<MultiPoly>,
}

impl SubspaceBasis {
    pub fn new(label: impl Into<String>, degree: Option<Multidegree>, vectors: Vec<MultiPoly>) -> Self {
        SubspaceBasis { label: label.into(), degree, vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Monomial coordinates for a family of polynomials in one variable space.
#[derive(Clone, Debug, Default)]
pub struct MonomialIndex {
    index: BTreeMap<Exponents, usize>,
    monos: Vec<Exponents>,
}

impl MonomialIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_monomials<I: IntoIterator<Item = Exponents>>(it: I) -> Self {
        let mut m = Self::new();
        for e in it {
            m.id(&e);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn id(&mut self, e: &Exponents) -> usize {
        if let Some(&k) = self.index.get(e) {
            return k;
        }
        let k = self.monos.len();
        self.index.insert(e.clone(), k);
        self.monos.push(e.clone());
        k
    }

    pub fn get(&self, e: &Exponents) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn monomial(&self, k: usize) -> &Exponents {
        &self.monos[k]
    }

    pub fn to_sparse(&mut self, p: &MultiPoly) -> SparseVec {
        let mut v: SparseVec = p.terms().map(|(e, c)| (self.id(e), c.clone())).collect();
        v.sort_by_key(|x| x.0);
        v
    }

    pub fn from_sparse(&self, vars: VarSpace, v: &SparseVec) -> MultiPoly {
        MultiPoly::from_terms(vars, v.iter().map(|(k, c)| (self.monos[*k].clone(), c.clone()))).expect("consistent exponent length")
    }
}

/// Canonical (reduced echelon) basis of the span of `polys`, pivots taken in
/// descending monomial order.
pub fn echelon_basis(vars: VarSpace, polys: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut all: Vec<Exponents> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    all.sort();
    all.dedup();
    all.reverse();
    let mut idx = MonomialIndex::from_monomials(all);
    let rows: Vec<SparseVec> = polys.iter().map(|p| idx.to_sparse(p)).collect();
    let rref = Rref::from_rows(idx.len(), rows);
    rref.basis().iter().map(|r| idx.from_sparse(vars, r)).collect()
}

/// Exact rank of a family of polynomials.
pub fn poly_rank(polys: &[MultiPoly]) -> usize {
    let mut idx = MonomialIndex::new();
    let rows: Vec<SparseVec> = polys.iter().map(|p| idx.to_sparse(p)).collect();
    linalg::rank(&rows, idx.len())
}

/// Coordinates of `target` in the family `basis`; `None` when outside the span.
pub fn express(basis: &[MultiPoly], target: &MultiPoly) -> Option<Vec<Scalar>> {
    let mut idx = MonomialIndex::new();
    let cols: Vec<SparseVec> = basis.iter().map(|p| idx.to_sparse(p)).collect();
    let t = idx.to_sparse(target);
    linalg::solve_columns(&cols, &t).map(|(x, _)| x)
}

/// Exponents over `(v, v̄, z)` of multidegree `d` with `t` and `ξ` parts zero.
fn graded_monomials(vars: VarSpace, d: &Multidegree) -> Vec<Exponents> {
    let k = vars.v;
    let mut out = Vec::new();
    for a in compositions(k, d.v) {
        for b in compositions(k, d.vbar) {
            for c in compositions(vars.z, d.z) {
                let mut e = Exponents::new();
                e.extend_from_slice(&a);
                e.extend_from_slice(&b);
                e.extend_from_slice(&c);
                e.extend(core::iter::repeat(0).take(vars.t + vars.xi));
                out.push(e);
            }
        }
    }
    out
}

/// Exact basis of the `K`-invariant polynomials of multidegree `d` (the `t`
/// part of `d` contributes a factor `t^{d.t}`).
///
/// Only torus-weight-zero monomials of the torus frame are considered; a
/// weight-zero vector annihilated by the simple raising operators is a
/// highest weight vector of weight zero, hence invariant.
pub fn invariant_subspace(pair: &PairDescriptor, d: &Multidegree) -> SubspaceBasis {
    let label = format!("inv{}", d);
    let base = pair.vars();
    let zero_weight: Vec<Exponents> = graded_monomials(base, d).into_iter().filter(|e| pair.weight_zero(e)).collect();
    if zero_weight.is_empty() {
        return SubspaceBasis::new(label, Some(*d), Vec::new());
    }
    let idx = MonomialIndex::from_monomials(zero_weight.iter().cloned());
    let ncols = zero_weight.len();
    // equations: image monomial -> (column, coeff)
    let mut eqs: BTreeMap<(usize, Exponents), Vec<(usize, Scalar)>> = BTreeMap::new();
    for (col, e) in zero_weight.iter().enumerate() {
        let m = MultiPoly::monomial(base, e.clone(), Scalar::ONE);
        for (r, der) in pair.raising.iter().enumerate() {
            for (f, c) in der.apply(&m).terms() {
                eqs.entry((r, f.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let rows: Vec<SparseVec> = eqs.into_values().collect();
    let ker = linalg::kernel(&rows, ncols);
    // back to z coordinates: w = B⁻¹ z
    let images: Vec<MultiPoly> = (0..base.nvars())
        .map(|i| match base.kind_of(i) {
            (VarKind::Z, c) => {
                let mut p = MultiPoly::zero(base);
                for a in 0..base.z {
                    let x = &pair.frame_inv[(c, a)];
                    if !x.is_zero() {
                        p.add_scaled(&MultiPoly::var(base, VarKind::Z, a), x);
                    }
                }
                p
            }
            (kind, j) => MultiPoly::var(base, kind, j),
        })
        .collect();
    let polys: Vec<MultiPoly> = ker.iter().map(|v| idx.from_sparse(base, v).substitute(&images, base)).collect();
    let mut vectors = echelon_basis(base, &polys);
    if d.t > 0 {
        let full = VarSpace::new(pair.kappa, pair.nu1, 1, 0);
        let map: Vec<Option<usize>> = (0..base.nvars()).map(Some).collect();
        let tpow = MultiPoly::var(full, VarKind::T, 0).pow(d.t);
        vectors = vectors.iter().map(|p| &p.embed(full, &map).expect("same layout prefix") * &tpow).collect();
    }
    SubspaceBasis::new(label, Some(*d), vectors)
}

/// Applies `r*(∂)`, the Fischer adjoint of multiplication by `r`, in the
/// `v, v̄` variables.
pub fn adjoint_multiplication(r: &MultiPoly, f: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(f.vars());
    let nv = 2 * f.vars().v;
    for (e, c) in r.terms() {
        let mut alpha: Exponents = Exponents::from_elem(0, f.vars().nvars());
        alpha[..nv].copy_from_slice(&e[..nv]);
        out.add_scaled(&f.derivative_multi(&alpha), &c.conj());
    }
    out
}

/// The `v`-only fundamental invariants `r_j` re-embedded into `vars`.
pub fn r_invariants(pair: &PairDescriptor, vars: VarSpace) -> Vec<MultiPoly> {
    crate::invariants::fundamental_invariants(pair)
        .r
        .iter()
        .map(|r| lift_v(r, vars))
        .collect()
}

/// Re-embeds a polynomial in `v, v̄` (possibly with other variables absent
/// or zero exponents) into `vars`.
pub fn lift_v(p: &MultiPoly, vars: VarSpace) -> MultiPoly {
    let src = p.vars();
    assert_eq!(src.v, vars.v);
    let map: Vec<Option<usize>> = (0..src.nvars())
        .map(|i| match src.kind_of(i) {
            (VarKind::V, j) => Some(vars.index(VarKind::V, j)),
            (VarKind::VBar, j) => Some(vars.index(VarKind::VBar, j)),
            (VarKind::Z, j) if j < vars.z => Some(vars.index(VarKind::Z, j)),
            (VarKind::T, j) if j < vars.t => Some(vars.index(VarKind::T, j)),
            (VarKind::Xi, j) if j < vars.xi => Some(vars.index(VarKind::Xi, j)),
            _ => None,
        })
        .collect();
    p.embed(vars, &map).expect("variables fit the target space")
}

/// Drops the (unused) `z`, `t`, `ξ` slots of a polynomial that depends on
/// `v, v̄` only.
pub fn restrict_v(p: &MultiPoly, vv: VarSpace) -> MultiPoly {
    let src = p.vars();
    let map: Vec<Option<usize>> = (0..src.nvars())
        .map(|i| match src.kind_of(i) {
            (VarKind::V, j) => Some(vv.index(VarKind::V, j)),
            (VarKind::VBar, j) => Some(vv.index(VarKind::VBar, j)),
            _ => None,
        })
        .collect();
    p.embed(vv, &map).expect("polynomial depends on v, v̄ only")
}

/// Degree `(a, b)` of the `r_j` in `(v, v̄)`.
fn r_shifts(pair: &PairDescriptor) -> Vec<u32> {
    crate::invariants::fundamental_invariants(pair).r.iter().map(|r| r.degree_in(VarKind::V)).collect()
}

/// Orthogonal projector onto `H^{m,m}(𝔳)` inside `P^{m,m}(𝔳)`.
#[derive(Clone, Debug)]
pub struct HarmonicProjector {
    pub m: u32,
    vvars: VarSpace,
    /// Basis of `Σ r_j·P^{m−δ_j, m−δ_j}`.
    span: Vec<MultiPoly>,
    gram_inv: Matrix,
}

impl HarmonicProjector {
    pub fn new(pair: &PairDescriptor, m: u32) -> Self {
        let vvars = pair.vvars();
        let mut gens = Vec::new();
        for (r, delta) in r_invariants(pair, vvars).iter().zip(r_shifts(pair)) {
            if delta > m {
                continue;
            }
            for e in graded_monomials(vvars, &Multidegree::new(m - delta, m - delta, 0, 0)) {
                gens.push(&MultiPoly::monomial(vvars, e, Scalar::ONE) * r);
            }
        }
        let span = echelon_basis(vvars, &gens);
        let k = span.len();
        let mut gram = Matrix::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let g = span[b].fischer_inner(&span[a]).expect("same space");
                gram[(a, b)] = g.clone();
                gram[(b, a)] = g.conj();
            }
        }
        let gram_inv = gram.inverse().expect("Gram matrix of a basis is invertible");
        HarmonicProjector { m, vvars, span, gram_inv }
    }

    /// Projects a polynomial in `v, v̄` only.
    fn project_v(&self, f: &MultiPoly) -> MultiPoly {
        if self.span.is_empty() || f.is_zero() {
            return f.clone();
        }
        // ⟨f − Σ c_b s_b, s_a⟩ = 0  ⇔  Σ_b ⟨s_b, s_a⟩ c_b = ⟨f, s_a⟩
        let y: Vec<Scalar> = self.span.iter().map(|s| f.fischer_inner(s).expect("same space")).collect();
        // gram[(a,b)] = ⟨s_b, s_a⟩
        let c = self.gram_inv.apply(&y);
        let mut out = f.clone();
        for (s, cb) in self.span.iter().zip(&c) {
            out.add_scaled(s, &-cb);
        }
        out
    }

    /// Projection in the `v, v̄` variables, coefficient-wise in the others.
    pub fn project(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let vars = p.vars();
        for d in p.multidegrees() {
            if d.v != self.m || d.vbar != self.m {
                return Err(Error::Degree(format!(
                    "harmonic projection needs v-bidegree ({},{}), found ({},{})",
                    self.m, self.m, d.v, d.vbar
                )));
            }
        }
        let nv = 2 * vars.v;
        let mut out = MultiPoly::zero(vars);
        for (outer, inner) in p.split_by(&[VarKind::V, VarKind::VBar]) {
            let f = MultiPoly::from_terms(self.vvars, inner.terms().map(|(e, c)| (Exponents::from_slice(&e[..nv]), c.clone())))?;
            let h = self.project_v(&f);
            for (e, c) in h.terms() {
                let mut full = outer.clone();
                full[..nv].copy_from_slice(e);
                out.add_term(full, c.clone());
            }
        }
        Ok(out)
    }
}

/// Fischer-orthogonal projection onto `H^{m,m}(𝔳) ⊗ P(z, t)`.
pub fn harmonic_projection(pair: &PairDescriptor, p: &MultiPoly, m: u32) -> Result<MultiPoly> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    HarmonicProjector::new(pair, m).project(p)
}

/// True when every `r_j*(∂)` annihilates `p`.
pub fn is_harmonic(pair: &PairDescriptor, p: &MultiPoly) -> bool {
    r_invariants(pair, p.vars()).iter().all(|r| adjoint_multiplication(r, p).is_zero())
}

/// `dim (H^{m,m}(𝔳) ⊗ P^k(𝔷₀))^K`.
pub fn harmonic_invariant_dim(pair: &PairDescriptor, m: u32, k: u32) -> usize {
    let inv = invariant_subspace(pair, &Multidegree::new(m, m, k, 0));
    harmonic_part(pair, &inv.vectors).len()
}

/// Basis of the harmonic elements in the span of `basis`.
pub fn harmonic_part(pair: &PairDescriptor, basis: &[MultiPoly]) -> Vec<MultiPoly> {
    if basis.is_empty() {
        return Vec::new();
    }
    let vars = basis[0].vars();
    let rs = r_invariants(pair, vars);
    let mut idx = MonomialIndex::new();
    // columns: basis elements; rows: image monomials (tagged by r index)
    let mut eqs: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
    for (col, b) in basis.iter().enumerate() {
        for (ri, r) in rs.iter().enumerate() {
            for (e, c) in adjoint_multiplication(r, b).terms() {
                eqs.entry((ri, idx.id(e))).or_default().push((col, c.clone()));
            }
        }
    }
    let ker = linalg::kernel(&eqs.into_values().collect::<Vec<_>>(), basis.len());
    let polys: Vec<MultiPoly> = ker
        .iter()
        .map(|v| {
            let mut p = MultiPoly::zero(vars);
            for (k, c) in v {
                p.add_scaled(&basis[*k], c);
            }
            p
        })
        .collect();
    echelon_basis(vars, &polys)
}

/// Matrix of a derivation on a stable subspace: column `i` holds the
/// coordinates of `D(b_i)`.
pub fn rep_matrix(basis: &[MultiPoly], d: &Derivation) -> Result<Matrix> {
    let k = basis.len();
    let mut m = Matrix::zeros(k, k);
    let mut idx = MonomialIndex::new();
    let cols: Vec<SparseVec> = basis.iter().map(|p| idx.to_sparse(p)).collect();
    for (i, b) in basis.iter().enumerate() {
        let img = d.apply(b);
        let t = idx.to_sparse(&img);
        let (x, _) = linalg::solve_columns(&cols, &t)
            .ok_or_else(|| Error::NotStable(format!("image of basis vector {} leaves the span", i)))?;
        for (j, xj) in x.into_iter().enumerate() {
            m[(j, i)] = xj;
        }
    }
    Ok(m)
}

/// Dimension of the space of `𝔨`-equivariant linear maps `A → B`, i.e. of
/// the solutions `T` of `T·ρ_A(X) = ρ_B(X)·T` for every generator.
pub fn hom_dimension(pair: &PairDescriptor, a: &SubspaceBasis, b: &SubspaceBasis) -> Result<usize> {
    let (da, db) = (a.dim(), b.dim());
    if da == 0 || db == 0 {
        return Ok(0);
    }
    let mut rows: Vec<SparseVec> = Vec::new();
    for g in &pair.generators {
        let d = Derivation::of(g);
        let ra = rep_matrix(&a.vectors, &d)?;
        let rb = rep_matrix(&b.vectors, &d)?;
        // unknown T[(p,q)] at column p*da + q, p < db, q < da
        for p in 0..db {
            for q in 0..da {
                let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                for k in 0..da {
                    // (T ρ_A)[p,q] = Σ_k T[p,k] ρ_A[k,q]
                    let x = &ra[(k, q)];
                    if !x.is_zero() {
                        *row.entry(p * da + k).or_insert(Scalar::ZERO) += x;
                    }
                }
                for k in 0..db {
                    // (ρ_B T)[p,q] = Σ_k ρ_B[p,k] T[k,q]
                    let x = &rb[(p, k)];
                    if !x.is_zero() {
                        *row.entry(k * da + q).or_insert(Scalar::ZERO) -= x;
                    }
                }
                let row = linalg::sparse_from_map(row);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    Ok(da * db - linalg::rank(&rows, da * db))
}

/// Label of an irreducible block of the Fock space `P^{s,0}(𝔳)`. For line 8,
/// `i` is the `SU₂` label and `(s − i)/2` the multiplicity of the determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockLabel {
    pub s: u32,
    pub i: Option<u32>,
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.i {
            Some(i) => write!(f, "s={},i={}", self.s, i),
            None => write!(f, "s={}", self.s),
        }
    }
}

/// Irreducible block of `P^{s,0}(𝔳)`, as coordinate vectors over the Fock basis.
#[derive(Clone, Debug)]
pub struct FockBlock {
    pub label: BlockLabel,
    pub vectors: Vec<Vec<Scalar>>,
}

impl FockBlock {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Basis vectors as columns.
    pub fn as_matrix(&self, rows: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, self.vectors.len());
        for (j, v) in self.vectors.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }
}

fn dense_kernel(m: &Matrix) -> Vec<Vec<Scalar>> {
    linalg::kernel(&m.to_sparse_rows(), m.ncols())
        .into_iter()
        .map(|v| {
            let mut d = vec![Scalar::ZERO; m.ncols()];
            for (k, x) in v {
                d[k] = x;
            }
            d
        })
        .collect()
}

/// Casimir `−Σ_a dσ(i h_a ⊗ I)²` of the `SU₂` factor on `P^{s,0}` (line 8).
pub fn su2_casimir(pair: &PairDescriptor, basis: &FockBasis) -> Matrix {
    let n = pair.n();
    let mut c = Matrix::zeros(basis.len(), basis.len());
    for h in su_basis(2).iter().map(|x| &x.1) {
        let x = kron(&h.scale(&Scalar::I), &Matrix::identity(n));
        let d = dsigma_geom(&x, basis);
        c = &c - &(&d * &d);
    }
    c
}

/// Splits `P^{s,0}(𝔳)` into irreducible blocks. Line 6 keeps the whole space
/// (irreducible under `U_n`); line 8 uses the `SU₂` Casimir eigenspaces.
pub fn isotypic_components(pair: &PairDescriptor, s: u32) -> Result<Vec<FockBlock>> {
    let basis = FockBasis::new(pair.kappa, s);
    if pair.line() == 6 {
        let vectors = (0..basis.len())
            .map(|i| {
                let mut v = vec![Scalar::ZERO; basis.len()];
                v[i] = Scalar::ONE;
                v
            })
            .collect();
        return Ok(vec![FockBlock { label: BlockLabel { s, i: None }, vectors }]);
    }
    let cas = su2_casimir(pair, &basis);
    let mut out = Vec::new();
    let mut total = 0;
    let mut i = s as i64;
    while i >= 0 {
        let ev = Scalar::int(i * (i + 2));
        let shifted = &cas - &Matrix::identity(basis.len()).scale(&ev);
        let vectors = dense_kernel(&shifted);
        total += vectors.len();
        if !vectors.is_empty() {
            out.push(FockBlock { label: BlockLabel { s, i: Some(i as u32) }, vectors });
        }
        i -= 2;
    }
    if total != basis.len() {
        return Err(Error::Inconsistent(format!(
            "Casimir eigenspaces of the form i(i+2) cover {} of {} dimensions at s={}",
            total,
            basis.len(),
            s
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn pair_shapes() {
        let p = make_pair(6, 2).unwrap();
        assert_eq!((p.kappa, p.nu1, p.generators.len()), (2, 3, 4));
        let p = make_pair(8, 2).unwrap();
        assert_eq!((p.kappa, p.nu1, p.generators.len()), (4, 3, 7));
        let p = make_pair(8, 3).unwrap();
        assert_eq!((p.kappa, p.nu1, p.generators.len()), (6, 3, 12));
        assert!(matches!(make_pair(7, 2), Err(Error::UnsupportedPair { .. })));
    }

    #[test]
    fn pair_id_parse() {
        assert_eq!("L8:n=3".parse::<PairId>().unwrap(), PairId { line: 8, n: 3 });
        assert!("L7:n=2".parse::<PairId>().is_err());
        assert!("L6n=2".parse::<PairId>().is_err());
        assert_eq!(PairId { line: 6, n: 2 }.to_string(), "L6:n=2");
    }

    #[test]
    fn generators_are_anti_hermitian_and_real_on_z() {
        for id in PairId::ALL {
            let p = make_pair(id.line, id.n).unwrap();
            for g in &p.generators {
                assert!(g.xv.is_anti_hermitian(), "{}", g.name);
                assert!(g.xz.conj() == g.xz, "{}", g.name);
            }
        }
    }

    #[test]
    fn small_invariant_dims() {
        let p = make_pair(6, 2).unwrap();
        assert_eq!(invariant_subspace(&p, &Multidegree::new(1, 1, 1, 0)).dim(), 1);
        assert_eq!(invariant_subspace(&p, &Multidegree::new(0, 0, 1, 0)).dim(), 0);
        assert_eq!(invariant_subspace(&p, &Multidegree::new(1, 1, 0, 0)).dim(), 1);
        assert_eq!(invariant_subspace(&p, &Multidegree::new(0, 0, 0, 0)).dim(), 1);
    }
}
