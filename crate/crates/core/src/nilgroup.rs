//! The Heisenberg group `Ň = 𝔳 × ℝ`: left-invariant vector fields, Weyl
//! symmetrization and polynomial-coefficient differential operators.
//!
//! Left-invariant operators are held in two forms. [`Pbw`] is the normal
//! ordered enveloping-algebra form `Σ c·Z^a Z̄^b T^c`, which is what the Fock
//! model consumes. [`DiffOp`] is the explicit coordinate form
//! `Σ f_α(v, v̄, t) ∂^α`; the two are related by [`Pbw::to_diffop`] and
//! [`DiffOp::to_pbw`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::invariants::{self, VmBasis};
use crate::pairs::PairDescriptor;
use crate::poly::{binomial, factorial, Exponents, MultiPoly, VarKind, VarSpace};
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Coefficient space `(v, v̄, t)` of operators on `Ň`.
pub fn group_vars(kappa: usize) -> VarSpace {
    VarSpace::new(kappa, 0, 1, 0)
}

fn minus_one_pow(k: u32) -> Scalar {
    if k % 2 == 0 {
        Scalar::ONE
    } else {
        Scalar::int(-1)
    }
}

/// `Σ_α f_α ∂^α`, with multi-indices over `(v, v̄, t)`.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    kappa: usize,
    terms: BTreeMap<Exponents, MultiPoly>,
}

impl DiffOp {
    pub fn zero(kappa: usize) -> Self {
        DiffOp { kappa, terms: BTreeMap::new() }
    }

    pub fn identity(kappa: usize) -> Self {
        Self::mult(&MultiPoly::one(group_vars(kappa)))
    }

    pub fn vars(&self) -> VarSpace {
        group_vars(self.kappa)
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    /// Multiplication by `f`.
    pub fn mult(f: &MultiPoly) -> Self {
        let vars = f.vars();
        assert!(vars.z == 0 && vars.t == 1 && vars.xi == 0, "operator coefficients live in (v, v̄, t)");
        let mut d = DiffOp::zero(vars.v);
        d.add_term(Exponents::from_elem(0, vars.nvars()), f.clone());
        d
    }

    /// `∂` in the variable `idx` of `(v, v̄, t)`.
    pub fn partial(kappa: usize, idx: usize) -> Self {
        let vars = group_vars(kappa);
        let mut e = Exponents::from_elem(0, vars.nvars());
        e[idx] = 1;
        let mut d = DiffOp::zero(kappa);
        d.add_term(e, MultiPoly::one(vars));
        d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, alpha: Exponents, f: MultiPoly) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(g) => {
                *g = &*g + &f;
                if g.is_zero() {
                    self.terms.remove(&alpha);
                }
            }
            None => {
                self.terms.insert(alpha, f);
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (a, f) in &other.terms {
            out.add_term(a.clone(), f.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> DiffOp {
        let mut out = DiffOp::zero(self.kappa);
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f.scale(c));
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    /// Highest derivative order.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(f.vars());
        for (a, c) in &self.terms {
            let g = f.derivative_multi(a);
            if !g.is_zero() {
                out = &out + &(c * &g);
            }
        }
        out
    }

    /// `self ∘ other` by the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero(self.kappa);
        for (alpha, c) in &self.terms {
            // every γ ≤ α
            let mut gammas: Vec<Exponents> = vec![Exponents::new()];
            for &a in alpha.iter() {
                let mut next = Vec::new();
                for g in &gammas {
                    for k in 0..=a {
                        let mut h = g.clone();
                        h.push(k);
                        next.push(h);
                    }
                }
                gammas = next;
            }
            for gamma in &gammas {
                let mut binom = Rational::ONE;
                for (&a, &g) in alpha.iter().zip(gamma.iter()) {
                    binom = &binom * &binomial(a as u32, g as u32);
                }
                let rest: Exponents = alpha.iter().zip(gamma.iter()).map(|(a, g)| a - g).collect();
                for (beta, d) in &other.terms {
                    let dd = d.derivative_multi(gamma);
                    if dd.is_zero() {
                        continue;
                    }
                    let coeff = (c * &dd).scale_rational(&binom);
                    let key: Exponents = rest.iter().zip(beta.iter()).map(|(x, y)| x + y).collect();
                    out.add_term(key, coeff);
                }
            }
        }
        out
    }

    /// Formal adjoint for Lebesgue measure in `(v, v̄, t)`: `∂_{v_j}* = −∂_{v̄_j}`,
    /// `∂_t* = −∂_t`, `f* = conj(f)`.
    pub fn formal_adjoint(&self) -> DiffOp {
        let k = self.kappa;
        let mut out = DiffOp::zero(k);
        for (alpha, c) in &self.terms {
            let mut swapped = alpha.clone();
            for j in 0..k {
                swapped.swap(j, k + j);
            }
            let order: u32 = alpha.iter().map(|&x| x as u32).sum();
            let mut d = DiffOp::zero(k);
            d.add_term(swapped, MultiPoly::one(self.vars()).scale(&minus_one_pow(order)));
            out = out.add(&d.compose(&DiffOp::mult(&c.conjugate())));
        }
        out
    }

    /// Weighted degree under `r·(v, t) = (r^{1/2} v, r t)`, doubled so it is an
    /// integer; `None` when the operator is not homogeneous.
    pub fn doubled_homogeneity(&self) -> Option<u32> {
        let vars = self.vars();
        let tix = vars.index(VarKind::T, 0);
        let mut deg: Option<i64> = None;
        for (a, f) in &self.terms {
            let da: i64 = a.iter().enumerate().map(|(i, &x)| if i == tix { 2 * x as i64 } else { x as i64 }).sum();
            for (e, _) in f.terms() {
                let de: i64 = e.iter().enumerate().map(|(i, &x)| if i == tix { 2 * x as i64 } else { x as i64 }).sum();
                let w = da - de;
                match deg {
                    None => deg = Some(w),
                    Some(d) if d != w => return None,
                    _ => {}
                }
            }
        }
        deg.map(|d| d.max(0) as u32)
    }

    /// Rewrites a left-invariant operator in normal ordered form, peeling the
    /// highest-order derivative at the origin each step.
    pub fn to_pbw(&self) -> Result<Pbw> {
        let vars = self.vars();
        let origin = Exponents::from_elem(0, vars.nvars());
        let mut rest = self.clone();
        let mut out = Pbw::zero(self.kappa);
        let mut cache = BTreeMap::new();
        for _ in 0..100_000 {
            let pick = rest
                .terms
                .iter()
                .filter_map(|(a, f)| {
                    let c = f.coeff(&origin);
                    (!c.is_zero()).then(|| (a.iter().map(|&x| x as u32).sum::<u32>(), a.clone(), c))
                })
                .max_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
            let Some((_, alpha, c)) = pick else {
                break;
            };
            out.add_term(alpha.clone(), c.clone());
            let mono = Pbw::key_diffop(self.kappa, &alpha, &mut cache);
            rest = rest.sub(&mono.scale(&c));
        }
        if !rest.is_zero() {
            return Err(Error::NotLeftInvariant(format!("{} coefficient terms remain after peeling", rest.terms.len())));
        }
        Ok(out)
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for DiffOp {
    /// `c*d_v1*d_vb2^2*d_t` per term, with polynomial coefficients in brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = self.kappa;
        for (n, (a, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{}]", c)?;
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let name = if i < k {
                    format!("d_v{}", i + 1)
                } else if i < 2 * k {
                    format!("d_vb{}", i - k + 1)
                } else {
                    String::from("d_t")
                };
                if x == 1 {
                    write!(f, "*{}", name)?;
                } else {
                    write!(f, "*{}^{}", name, x)?;
                }
            }
        }
        Ok(())
    }
}

/// Left-invariant fields `Z_j = ∂_{v_j} − (i/4) v̄_j ∂_t`, `Z̄_j = ∂_{v̄_j} + (i/4) v_j ∂_t`, `T = ∂_t`.
pub fn vector_fields(kappa: usize) -> (Vec<DiffOp>, Vec<DiffOp>, DiffOp) {
    let vars = group_vars(kappa);
    let tix = vars.index(VarKind::T, 0);
    let dt = DiffOp::partial(kappa, tix);
    let quarter_i = Scalar::new(Rational::ZERO, Rational::new(1, 4));
    let mut z = Vec::new();
    let mut zb = Vec::new();
    for j in 0..kappa {
        let vb = MultiPoly::var(vars, VarKind::VBar, j);
        let v = MultiPoly::var(vars, VarKind::V, j);
        z.push(DiffOp::partial(kappa, j).sub(&DiffOp::mult(&vb.scale(&quarter_i)).compose(&dt)));
        zb.push(DiffOp::partial(kappa, kappa + j).add(&DiffOp::mult(&v.scale(&quarter_i)).compose(&dt)));
    }
    (z, zb, dt)
}

/// Normal ordered element `Σ c·Z^a Z̄^b T^c` of the enveloping algebra; keys
/// are `(a, b, c)` concatenated (length `2κ + 1`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pbw {
    kappa: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

/// Letters of words in the enveloping algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Z(usize),
    Zb(usize),
    T,
}

impl Pbw {
    pub fn zero(kappa: usize) -> Self {
        Pbw { kappa, terms: BTreeMap::new() }
    }

    pub fn one(kappa: usize) -> Self {
        let mut p = Pbw::zero(kappa);
        p.add_term(Exponents::from_elem(0, 2 * kappa + 1), Scalar::ONE);
        p
    }

    pub fn letter(kappa: usize, l: Letter) -> Self {
        let mut e = Exponents::from_elem(0, 2 * kappa + 1);
        match l {
            Letter::Z(j) => e[j] = 1,
            Letter::Zb(j) => e[kappa + j] = 1,
            Letter::T => e[2 * kappa] = 1,
        }
        let mut p = Pbw::zero(kappa);
        p.add_term(e, Scalar::ONE);
        p
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert(Scalar::ZERO);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Pbw) -> Pbw {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Pbw {
        let mut out = Pbw::zero(self.kappa);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &Pbw) -> Pbw {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    /// Product in the enveloping algebra, using
    /// `Z̄^b Z^c = Σ_k k!·C(b,k)·C(c,k)·(−(i/2)T)^k Z^{c−k} Z̄^{b−k}` per index.
    pub fn mul(&self, other: &Pbw) -> Pbw {
        let k = self.kappa;
        let mut out = Pbw::zero(k);
        let minus_half_i = Scalar::new(Rational::ZERO, Rational::new(-1, 2));
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                // per-index choices of k_j ≤ min(b_j, a'_j)
                let mut partial: Vec<(Exponents, Scalar)> = vec![(Exponents::from_elem(0, k), cx * cy)];
                for j in 0..k {
                    let b = x[k + j] as u32;
                    let a2 = y[j] as u32;
                    let mut next = Vec::new();
                    for (kv, c) in &partial {
                        for kk in 0..=b.min(a2) {
                            let w = &(&factorial(kk) * &binomial(b, kk)) * &binomial(a2, kk);
                            let mut kv2 = kv.clone();
                            kv2[j] = kk as u8;
                            next.push((kv2, c.scale(&w)));
                        }
                    }
                    partial = next;
                }
                for (kv, c) in partial {
                    let total: u32 = kv.iter().map(|&v| v as u32).sum();
                    let mut key = Exponents::from_elem(0, 2 * k + 1);
                    for j in 0..k {
                        key[j] = x[j] + y[j] - kv[j];
                        key[k + j] = x[k + j] - kv[j] + y[k + j];
                    }
                    key[2 * k] = x[2 * k] + y[2 * k] + total as u8;
                    out.add_term(key, &c * &minus_half_i.pow(total));
                }
            }
        }
        out
    }

    /// Formal adjoint: `Z_j* = −Z̄_j`, `T* = −T`, antimultiplicative.
    pub fn adjoint(&self) -> Pbw {
        let k = self.kappa;
        let mut out = Pbw::zero(k);
        for (x, c) in &self.terms {
            let mut key = Exponents::from_elem(0, 2 * k + 1);
            for j in 0..k {
                key[j] = x[k + j];
                key[k + j] = x[j];
            }
            key[2 * k] = x[2 * k];
            let order: u32 = x.iter().map(|&v| v as u32).sum();
            out.add_term(key, &c.conj() * &minus_one_pow(order));
        }
        out
    }

    /// Doubled weighted degree `|a| + |b| + 2c` when all terms agree.
    pub fn doubled_homogeneity(&self) -> Option<u32> {
        let k = self.kappa;
        let mut deg = None;
        for x in self.terms.keys() {
            let d: u32 = x[..2 * k].iter().map(|&v| v as u32).sum::<u32>() + 2 * x[2 * k] as u32;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    fn key_diffop(kappa: usize, key: &Exponents, cache: &mut BTreeMap<Exponents, DiffOp>) -> DiffOp {
        if let Some(d) = cache.get(key) {
            return d.clone();
        }
        let (z, zb, dt) = vector_fields(kappa);
        let d = if let Some(j) = (0..kappa).find(|&j| key[j] > 0) {
            let mut rest = key.clone();
            rest[j] -= 1;
            z[j].compose(&Self::key_diffop(kappa, &rest, cache))
        } else if let Some(j) = (0..kappa).find(|&j| key[kappa + j] > 0) {
            let mut rest = key.clone();
            rest[kappa + j] -= 1;
            zb[j].compose(&Self::key_diffop(kappa, &rest, cache))
        } else if key[2 * kappa] > 0 {
            let mut rest = key.clone();
            rest[2 * kappa] -= 1;
            dt.compose(&Self::key_diffop(kappa, &rest, cache))
        } else {
            DiffOp::identity(kappa)
        };
        cache.insert(key.clone(), d.clone());
        d
    }

    /// Coordinate form of the element as a differential operator on `Ň`.
    pub fn to_diffop(&self) -> DiffOp {
        let mut cache = BTreeMap::new();
        let mut out = DiffOp::zero(self.kappa);
        for (key, c) in &self.terms {
            out = out.add(&Self::key_diffop(self.kappa, key, &mut cache).scale(c));
        }
        out
    }
}

impl fmt::Debug for Pbw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Pbw {
    /// Renders as `1/2*Z1^2*Zb1*T - i*T`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = self.kappa;
        for (n, (x, c)) in self.terms.iter().enumerate() {
            let factors: Vec<(String, u32)> = x
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = if i < k {
                        format!("Z{}", i + 1)
                    } else if i < 2 * k {
                        format!("Zb{}", i - k + 1)
                    } else {
                        String::from("T")
                    };
                    (name, e as u32)
                })
                .collect();
            crate::poly::write_term(f, n == 0, c, &factors)?;
        }
        Ok(())
    }
}

/// Left multiplication by a single letter `Z_j` or `Z̄_j`.
fn lmul_letter(l: usize, p: &Pbw) -> Pbw {
    let k = p.kappa;
    let mut out = Pbw::zero(k);
    let minus_half_i = Scalar::new(Rational::ZERO, Rational::new(-1, 2));
    for (x, c) in &p.terms {
        let mut key = x.clone();
        key[l] += 1;
        out.add_term(key, c.clone());
        if l >= k {
            // Z̄_j Z_j^a = Z_j^a Z̄_j − a (i/2) Z_j^{a−1} T
            let j = l - k;
            let a = x[j];
            if a > 0 {
                let mut key = x.clone();
                key[j] -= 1;
                key[2 * k] += 1;
                out.add_term(key, c * &minus_half_i.scale(&Rational::from(a as u64)));
            }
        }
    }
    out
}

/// Weyl symmetrization of a polynomial in `v, v̄`: each monomial goes to the
/// average over all orderings of its word in `Z_j` (for `v_j`) and `Z̄_j`
/// (for `v̄_j`).
pub fn symmetrize(p: &MultiPoly) -> Result<Pbw> {
    let vars = p.vars();
    let k = vars.v;
    let nv = 2 * k;
    let mut memo: BTreeMap<Exponents, Pbw> = BTreeMap::new();
    fn words(e: &Exponents, k: usize, memo: &mut BTreeMap<Exponents, Pbw>) -> Pbw {
        if let Some(w) = memo.get(e) {
            return w.clone();
        }
        let mut out = Pbw::zero(k);
        if e.iter().all(|&x| x == 0) {
            out = Pbw::one(k);
        } else {
            for l in 0..e.len() {
                if e[l] > 0 {
                    let mut rest = e.clone();
                    rest[l] -= 1;
                    out = out.add(&lmul_letter(l, &words(&rest, k, memo)));
                }
            }
        }
        memo.insert(e.clone(), out.clone());
        out
    }
    let mut out = Pbw::zero(k);
    for (e, c) in p.terms() {
        if e[nv..].iter().any(|&x| x > 0) {
            return Err(Error::Degree(String::from("symmetrization takes polynomials in v, v̄ only")));
        }
        let letters = Exponents::from_slice(&e[..nv]);
        let total: u32 = letters.iter().map(|&x| x as u32).sum();
        let mut w = Rational::ONE;
        for &x in letters.iter() {
            w = &w * &factorial(x as u32);
        }
        w = &w / &factorial(total);
        out = out.add(&words(&letters, k, &mut memo).scale(&c.scale(&w)));
    }
    Ok(out)
}

/// `M_m = Σ_j e_j A_j` with `A_j = sym(a_j)`; the `a_j` are orthogonal, not
/// normalized, with squared norms kept alongside.
#[derive(Clone, Debug)]
pub struct EquivariantOperator {
    pub m: u32,
    pub vm: VmBasis,
    pub components: Vec<Pbw>,
}

impl EquivariantOperator {
    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

pub const MAX_M: u32 = 3;

pub fn build_mm(pair: &PairDescriptor, m: u32) -> Result<EquivariantOperator> {
    if m == 0 || m > MAX_M {
        return Err(Error::Degree(format!("M_m is built for 1 ≤ m ≤ {}, got {}", MAX_M, m)));
    }
    let vm = invariants::vm_basis(pair, m)?;
    let components = vm.a.iter().map(symmetrize).collect::<Result<Vec<_>>>()?;
    Ok(EquivariantOperator { m, vm, components })
}

/// `U_m = Σ_j A_j* A_j / ‖a_j‖²`, the normalized `M_m* M_m`.
pub fn build_um(pair: &PairDescriptor, m: u32) -> Result<Pbw> {
    let mm = build_mm(pair, m)?;
    Ok(um_from(&mm))
}

pub fn um_from(mm: &EquivariantOperator) -> Pbw {
    let k = mm.vm.a.first().map_or(0, |a| a.vars().v);
    let mut out = Pbw::zero(k);
    for (a, n) in mm.components.iter().zip(&mm.vm.norms) {
        out = out.add(&a.adjoint().mul(a).scale(&Scalar::real(n.recip())));
    }
    out
}

/// The generators `Ď` of the spectral coordinates: `−4·sym(|v|²)`, on line 8
/// also `16·sym(tr((vv*)²))`, and finally `−iT`.
pub fn spectral_generators(pair: &PairDescriptor) -> Vec<Pbw> {
    let cat = invariants::fundamental_invariants(pair);
    let vv = pair.vvars();
    let to_v = |p: &MultiPoly| crate::pairs::restrict_v(p, vv);
    let mut out = vec![symmetrize(&to_v(&cat.r[0])).expect("v-only").scale(&Scalar::int(-4))];
    if pair.line() == 8 {
        out.push(symmetrize(&to_v(&cat.r[1])).expect("v-only").scale(&Scalar::int(16)));
    }
    out.push(Pbw::letter(pair.kappa, Letter::T).scale(&-Scalar::I));
    out
}

/// `L_C = sym(Σ c_jk v_j v̄_k) = ½ Σ c_jk (Z_j Z̄_k + Z̄_k Z_j)`.
pub fn l_c(c: &crate::linalg::Matrix) -> Pbw {
    let k = c.nrows();
    let vars = VarSpace::new(k, 0, 0, 0);
    let mut p = MultiPoly::zero(vars);
    for j in 0..k {
        for l in 0..k {
            if !c[(j, l)].is_zero() {
                p = &p + &(&MultiPoly::var(vars, VarKind::V, j) * &MultiPoly::var(vars, VarKind::VBar, l)).scale(&c[(j, l)]);
            }
        }
    }
    symmetrize(&p).expect("v-only polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_relation() {
        let (z, zb, dt) = vector_fields(2);
        let comm = z[0].compose(&zb[0]).sub(&zb[0].compose(&z[0]));
        assert_eq!(comm, dt.scale(&Scalar::new(Rational::ZERO, Rational::new(1, 2))));
        assert!(z[0].compose(&z[1]).sub(&z[1].compose(&z[0])).is_zero());
        assert!(z[0].compose(&zb[1]).sub(&zb[1].compose(&z[0])).is_zero());
    }

    #[test]
    fn pbw_matches_diffop_products() {
        let k = 2;
        let z1 = Pbw::letter(k, Letter::Z(0));
        let zb1 = Pbw::letter(k, Letter::Zb(0));
        let prod = zb1.mul(&z1).mul(&zb1);
        let (z, zb, _) = vector_fields(k);
        let direct = zb[0].compose(&z[0]).compose(&zb[0]);
        assert_eq!(prod.to_diffop(), direct);
        assert_eq!(direct.to_pbw().unwrap(), prod);
    }

    #[test]
    fn symmetrize_quadratic() {
        let vars = VarSpace::new(1, 0, 0, 0);
        let p = &MultiPoly::var(vars, VarKind::V, 0) * &MultiPoly::var(vars, VarKind::VBar, 0);
        let s = symmetrize(&p).unwrap();
        let z = Pbw::letter(1, Letter::Z(0));
        let zb = Pbw::letter(1, Letter::Zb(0));
        let expect = z.mul(&zb).add(&zb.mul(&z)).scale(&Scalar::frac(1, 2));
        assert_eq!(s, expect);
    }

    #[test]
    fn adjoint_of_z() {
        let (z, zb, _) = vector_fields(2);
        assert_eq!(z[0].formal_adjoint(), zb[0].scale(&Scalar::int(-1)));
        let p = Pbw::letter(2, Letter::Z(1));
        assert_eq!(p.adjoint(), Pbw::letter(2, Letter::Zb(1)).scale(&Scalar::int(-1)));
    }
}
