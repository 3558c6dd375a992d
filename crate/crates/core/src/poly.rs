//! Sparse multigraded polynomials over the Gaussian rationals.
//!
//! Variables are laid out in the fixed order `(v, v̄, z, t, ξ)`. The holomorphic
//! coordinates `v` and their conjugates `v̄` are treated as independent
//! indeterminates, which is what makes the bidegree splitting and the
//! Fischer pairing purely combinatorial.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::Scalar;

pub type Exponents = SmallVec<[u8; 24]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    V,
    VBar,
    Z,
    T,
    Xi,
}

/// Variable counts per kind. `v` is the complex dimension κ; there are as
/// many `v̄` variables as `v` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSpace {
    pub v: usize,
    pub z: usize,
    pub t: usize,
    pub xi: usize,
}

impl VarSpace {
    pub fn new(v: usize, z: usize, t: usize, xi: usize) -> Self {
        VarSpace { v, z, t, xi }
    }

    pub fn nvars(&self) -> usize {
        2 * self.v + self.z + self.t + self.xi
    }

    pub fn count(&self, kind: VarKind) -> usize {
        match kind {
            VarKind::V | VarKind::VBar => self.v,
            VarKind::Z => self.z,
            VarKind::T => self.t,
            VarKind::Xi => self.xi,
        }
    }

    pub fn offset(&self, kind: VarKind) -> usize {
        match kind {
            VarKind::V => 0,
            VarKind::VBar => self.v,
            VarKind::Z => 2 * self.v,
            VarKind::T => 2 * self.v + self.z,
            VarKind::Xi => 2 * self.v + self.z + self.t,
        }
    }

    pub fn index(&self, kind: VarKind, j: usize) -> usize {
        assert!(j < self.count(kind), "variable {:?}{} out of range", kind, j);
        self.offset(kind) + j
    }

    pub fn kind_of(&self, idx: usize) -> (VarKind, usize) {
        for kind in [VarKind::V, VarKind::VBar, VarKind::Z, VarKind::T, VarKind::Xi] {
            let off = self.offset(kind);
            if idx < off + self.count(kind) {
                return (kind, idx - off);
            }
        }
        panic!("variable index {} out of range", idx)
    }

    pub fn range(&self, kind: VarKind) -> core::ops::Range<usize> {
        let off = self.offset(kind);
        off..off + self.count(kind)
    }
}

/// Degrees of a monomial in each variable group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multidegree {
    pub v: u32,
    pub vbar: u32,
    pub z: u32,
    pub t: u32,
    pub xi: u32,
}

impl Multidegree {
    pub fn new(v: u32, vbar: u32, z: u32, t: u32) -> Self {
        Multidegree { v, vbar, z, t, xi: 0 }
    }

    pub fn total(&self) -> u32 {
        self.v + self.vbar + self.z + self.t + self.xi
    }

    pub fn of(vars: &VarSpace, e: &[u8]) -> Self {
        let sum = |k: VarKind| vars.range(k).map(|i| e[i] as u32).sum();
        Multidegree {
            v: sum(VarKind::V),
            vbar: sum(VarKind::VBar),
            z: sum(VarKind::Z),
            t: sum(VarKind::T),
            xi: sum(VarKind::Xi),
        }
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.vbar, self.z, self.t)?;
        if self.xi > 0 {
            write!(f, "+xi{}", self.xi)?;
        }
        Ok(())
    }
}

const FACT: [u64; 21] = {
    let mut t = [1u64; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as u64;
        i += 1;
    }
    t
};

pub(crate) fn factorial(n: u32) -> Rational {
    if (n as usize) < FACT.len() {
        return Rational::from(FACT[n as usize]);
    }
    let mut acc = Rational::from(FACT[20]);
    for k in 21..=n {
        acc = &acc * &Rational::from(k as u64);
    }
    acc
}

pub(crate) fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::ZERO;
    }
    let mut acc = Rational::ONE;
    for i in 0..k {
        acc = &acc * &Rational::new((n - i) as i64, (i + 1) as i64);
    }
    acc
}

/// `α!` for a multi-index.
pub fn multi_factorial(e: &[u8]) -> Rational {
    let mut acc = Rational::ONE;
    for &x in e {
        if x > 1 {
            acc = &acc * &factorial(x as u32);
        }
    }
    acc
}

/// All exponent vectors of length `n` with total degree `d`, in
/// descending lexicographic order.
pub fn compositions(n: usize, d: u32) -> Vec<Exponents> {
    fn rec(n: usize, d: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if cur.len() + 1 == n {
            cur.push(d as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=d).rev() {
            cur.push(k as u8);
            rec(n, d - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Exponents::new());
        }
        return out;
    }
    rec(n, d, &mut Exponents::new(), &mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: VarSpace,
    terms: BTreeMap<Exponents, Scalar>,
}

impl MultiPoly {
    pub fn zero(vars: VarSpace) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: VarSpace, c: Scalar) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Exponents::from_elem(0, vars.nvars()), c);
        p
    }

    pub fn one(vars: VarSpace) -> Self {
        Self::constant(vars, Scalar::ONE)
    }

    pub fn var(vars: VarSpace, kind: VarKind, j: usize) -> Self {
        let mut e = Exponents::from_elem(0, vars.nvars());
        e[vars.index(kind, j)] = 1;
        Self::monomial(vars, e, Scalar::ONE)
    }

    pub fn monomial(vars: VarSpace, exps: Exponents, c: Scalar) -> Self {
        assert_eq!(exps.len(), vars.nvars(), "exponent length mismatch");
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; duplicates are summed and
    /// zeros purged.
    pub fn from_terms<I: IntoIterator<Item = (Exponents, Scalar)>>(vars: VarSpace, it: I) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (idx, (e, c)) in it.into_iter().enumerate() {
            if e.len() != vars.nvars() {
                return Err(Error::Schema(alloc::format!(
                    "term {}: exponent length {} does not match {} variables",
                    idx,
                    e.len(),
                    vars.nvars()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> VarSpace {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u8]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or(Scalar::ZERO)
    }

    pub fn into_terms(self) -> BTreeMap<Exponents, Scalar> {
        self.terms
    }

    pub fn add_term(&mut self, e: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarMismatch { left: self.vars, right: other.vars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut acc: BTreeMap<Exponents, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                use alloc::collections::btree_map::Entry;
                match acc.entry(e) {
                    Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    Entry::Occupied(mut o) => *o.get_mut() += &c,
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { vars: self.vars, terms: acc })
    }

    /// In-place `self += c·other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        assert_eq!(self.vars, other.vars, "variable space mismatch");
        if c.is_zero() {
            return;
        }
        for (e, d) in &other.terms {
            self.add_term(e.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, d)| (e.clone(), d * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&Scalar::real(r.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The set of multidegrees present.
    pub fn multidegrees(&self) -> Vec<Multidegree> {
        let mut v: Vec<Multidegree> = self.terms.keys().map(|e| Multidegree::of(&self.vars, e)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Sum of the terms of multidegree exactly `d`.
    pub fn grade_component(&self, d: &Multidegree) -> Self {
        MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| Multidegree::of(&self.vars, e) == *d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits into homogeneous components keyed by multidegree.
    pub fn components(&self) -> BTreeMap<Multidegree, MultiPoly> {
        let mut out: BTreeMap<Multidegree, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = Multidegree::of(&self.vars, e);
            out.entry(d)
                .or_insert_with(|| MultiPoly::zero(self.vars))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        self.multidegrees().len() <= 1
    }

    /// Maximum total degree over the given variable kind (0 for the zero polynomial).
    pub fn degree_in(&self, kind: VarKind) -> u32 {
        let r = self.vars.range(kind);
        self.terms
            .keys()
            .map(|e| e[r.clone()].iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    /// Swaps `v ↔ v̄` exponents and conjugates coefficients; `z`, `t`, `ξ` are
    /// real coordinates and stay put.
    pub fn conjugate(&self) -> Self {
        let k = self.vars.v;
        MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    for j in 0..k {
                        f.swap(j, k + j);
                    }
                    (f, c.conj())
                })
                .collect(),
        }
    }

    /// Fischer pairing `⟨x^α, x^β⟩ = α!·δ_{αβ}`, linear in `self`, conjugate
    /// linear in `other`.
    pub fn fischer_inner(&self, other: &Self) -> Result<Scalar> {
        self.check_same(other)?;
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Scalar::ZERO;
        for (e, c) in &small.terms {
            if let Some(d) = large.terms.get(e) {
                let prod = if flip { d * &c.conj() } else { c * &d.conj() };
                acc += &prod.scale(&multi_factorial(e));
            }
        }
        Ok(acc)
    }

    /// `‖p‖² = ⟨p, p⟩`, a nonnegative rational.
    pub fn fischer_norm_sqr(&self) -> Rational {
        let mut acc = Rational::ZERO;
        for (e, c) in &self.terms {
            acc += &(&c.norm_sqr() * &multi_factorial(e));
        }
        acc
    }

    /// `∂p/∂x_idx`
    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f[idx] -= 1;
            out.terms.insert(f, c.scale(&Rational::from(k as u64)));
        }
        out
    }

    /// Applies `∂^α` for a full-length multi-index.
    pub fn derivative_multi(&self, alpha: &[u8]) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            if e.iter().zip(alpha).any(|(a, b)| a < b) {
                continue;
            }
            let mut f = e.clone();
            let mut coef = c.clone();
            for (i, &a) in alpha.iter().enumerate() {
                for step in 0..a {
                    coef = coef.scale(&Rational::from((e[i] - step) as u64));
                }
                f[i] -= a;
            }
            out.terms.insert(f, coef);
        }
        out
    }

    /// Multiplication by the monomial `x^α`.
    pub fn shift(&self, alpha: &[u8]) -> Self {
        MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(alpha).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `x_j ↦ images[j]`; all images must live in `target`.
    pub fn substitute(&self, images: &[MultiPoly], target: VarSpace) -> Self {
        assert_eq!(images.len(), self.vars.nvars());
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| alloc::vec![MultiPoly::one(target), p.clone()]).collect();
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[j].len() <= k as usize {
                    let next = &powers[j][powers[j].len() - 1] * &images[j];
                    powers[j].push(next);
                }
                term = &term * &powers[j][k as usize];
            }
            for (f, d) in term.terms {
                out.add_term(f, d);
            }
        }
        out
    }

    /// Re-indexes into a different variable space. `map[i]` is the target index
    /// of source variable `i`, or `None` if the variable must not occur.
    pub fn embed(&self, target: VarSpace, map: &[Option<usize>]) -> Result<Self> {
        assert_eq!(map.len(), self.vars.nvars());
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut f = Exponents::from_elem(0, target.nvars());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => f[j] += k,
                    None => {
                        return Err(Error::Degree(alloc::format!(
                            "variable {:?} cannot be carried into {:?}",
                            self.vars.kind_of(i),
                            target
                        )))
                    }
                }
            }
            out.add_term(f, c.clone());
        }
        Ok(out)
    }

    /// Evaluates the variable `idx` at the scalar `value`.
    pub fn eval_var(&self, idx: usize, value: &Scalar) -> Self {
        let mut out = MultiPoly::zero(self.vars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[idx];
            f[idx] = 0;
            out.add_term(f, c * &value.pow(k as u32));
        }
        out
    }

    /// Full evaluation at a point given for every variable.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.vars.nvars());
        let mut acc = Scalar::ZERO;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &point[j].pow(k as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// True when every coefficient is real.
    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    /// True when the polynomial is real-valued, i.e. fixed by [`conjugate`](Self::conjugate).
    pub fn is_real_valued(&self) -> bool {
        self.conjugate() == *self
    }

    /// Groups terms by the exponents outside `kinds`, returning for each such
    /// "outer" exponent the polynomial in the `kinds` variables (other
    /// exponents zeroed).
    pub fn split_by(&self, kinds: &[VarKind]) -> BTreeMap<Exponents, MultiPoly> {
        let inner: Vec<usize> = kinds.iter().flat_map(|k| self.vars.range(*k)).collect();
        let mut out: BTreeMap<Exponents, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut outer = e.clone();
            let mut inn = Exponents::from_elem(0, e.len());
            for &i in &inner {
                inn[i] = e[i];
                outer[i] = 0;
            }
            out.entry(outer).or_insert_with(|| MultiPoly::zero(self.vars)).add_term(inn, c.clone());
        }
        out
    }

    pub fn max_abs_exponent(&self) -> u8 {
        self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Writes one term `c*x1^2*x2` of a sum, with the sign folded into the
/// separator when `c` is real or purely imaginary.
pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, first: bool, c: &Scalar, factors: &[(String, u32)]) -> fmt::Result {
    let text = c.compact();
    let simple = c.re.is_zero() || c.im.is_zero();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) if simple => (true, String::from(rest)),
        _ if simple => (false, text),
        _ => (false, format!("({})", text)),
    };
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let show = !(body == "1" && !factors.is_empty());
    if show {
        write!(f, "{}", body)?;
    }
    for (k, (name, e)) in factors.iter().enumerate() {
        if k > 0 || show {
            write!(f, "*")?;
        }
        match e {
            1 => write!(f, "{}", name)?,
            _ => write!(f, "{}^{}", name, e)?,
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    /// Human-readable rendering such as `v1*vb2*z3^2 - 1/2*t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            let factors: Vec<(String, u32)> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let (kind, j) = self.vars.kind_of(i);
                    let name = match kind {
                        VarKind::V => "v",
                        VarKind::VBar => "vb",
                        VarKind::Z => "z",
                        VarKind::T => "t",
                        VarKind::Xi => "xi",
                    };
                    (format!("{}{}", name, j + 1), k as u32)
                })
                .collect();
            write_term(f, n == 0, c, &factors)?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    /// Panics on mismatched variable spaces; use [`MultiPoly::checked_add`] to recover.
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("variable space mismatch")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("variable space mismatch")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("variable space mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Scalar::ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs() -> VarSpace {
        VarSpace::new(2, 3, 0, 0)
    }

    #[test]
    fn add_identity_and_inverse() {
        let v1 = MultiPoly::var(vs(), VarKind::V, 0);
        assert_eq!(&v1 + &MultiPoly::zero(vs()), v1);
        let p = &(&v1 * &MultiPoly::var(vs(), VarKind::Z, 2)) + &v1;
        let z = &p + &p.scale(&Scalar::int(-1));
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn mismatched_spaces_error() {
        let a = MultiPoly::one(vs());
        let b = MultiPoly::one(VarSpace::new(2, 0, 0, 0));
        assert!(matches!(a.checked_add(&b), Err(Error::VarMismatch { .. })));
        assert!(matches!(a.checked_mul(&b), Err(Error::VarMismatch { .. })));
        assert!(a.fischer_inner(&b).is_err());
    }

    #[test]
    fn r1_squared_grading() {
        let s = vs();
        let r1 = &(&MultiPoly::var(s, VarKind::V, 0) * &MultiPoly::var(s, VarKind::VBar, 0))
            + &(&MultiPoly::var(s, VarKind::V, 1) * &MultiPoly::var(s, VarKind::VBar, 1));
        let sq = &r1 * &r1;
        assert_eq!(sq.multidegrees(), alloc::vec![Multidegree::new(2, 2, 0, 0)]);
        // |v|^4 = Σ v_i v_j vb_i vb_j: 3 distinct monomials of type (2,0|2,0), (1,1|1,1)...
        assert_eq!(sq.len(), 3);
    }

    #[test]
    fn grade_component_basics() {
        let s = vs();
        let v1 = MultiPoly::var(s, VarKind::V, 0);
        let vb1 = MultiPoly::var(s, VarKind::VBar, 0);
        let p = &v1 + &(&v1 * &vb1);
        assert_eq!(p.grade_component(&Multidegree::new(1, 0, 0, 0)), v1);
        let r1 = &v1 * &vb1;
        assert!(r1.grade_component(&Multidegree::new(0, 0, 1, 0)).is_zero());
    }

    #[test]
    fn conjugate_examples() {
        let s = vs();
        let v1 = MultiPoly::var(s, VarKind::V, 0);
        assert_eq!(v1.conjugate(), MultiPoly::var(s, VarKind::VBar, 0));
        let p = (&v1 * &MultiPoly::var(s, VarKind::VBar, 1)).scale(&Scalar::I);
        let expect = (&MultiPoly::var(s, VarKind::V, 1) * &MultiPoly::var(s, VarKind::VBar, 0)).scale(&-Scalar::I);
        assert_eq!(p.conjugate(), expect);
    }

    #[test]
    fn fischer_conventions() {
        let s = vs();
        let v1 = MultiPoly::var(s, VarKind::V, 0);
        let v2 = MultiPoly::var(s, VarKind::V, 1);
        assert_eq!(v1.fischer_inner(&v1).unwrap(), Scalar::ONE);
        let sq = &v1 * &v1;
        assert_eq!(sq.fischer_inner(&sq).unwrap(), Scalar::int(2));
        assert_eq!(v1.fischer_inner(&v2).unwrap(), Scalar::ZERO);
        // conjugate-linear in the second slot
        let iv1 = v1.scale(&Scalar::I);
        assert_eq!(v1.fischer_inner(&iv1).unwrap(), -Scalar::I);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 3).len(), 20);
        assert_eq!(compositions(3, 0).len(), 1);
        assert_eq!(compositions(0, 0).len(), 1);
        assert_eq!(compositions(0, 2).len(), 0);
    }

    #[test]
    fn substitution_expands() {
        let s = VarSpace::new(0, 2, 0, 0);
        let x = MultiPoly::var(s, VarKind::Z, 0);
        let y = MultiPoly::var(s, VarKind::Z, 1);
        let p = &x * &x;
        let q = p.substitute(&[&x + &y, y.clone()], s);
        assert_eq!(q, &(&(&x * &x) + &(&x * &y).scale(&Scalar::int(2))) + &(&y * &y));
    }
}
