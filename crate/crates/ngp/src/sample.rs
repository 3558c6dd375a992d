//! Seeded random inputs for the verification suite.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use ngp_core::invariants::{plain_monomials, InvariantCatalogue};
use ngp_core::linalg::Matrix;
use ngp_core::nilgroup::Pbw;
use ngp_core::pairs::PairDescriptor;
use ngp_core::poly::compositions;
use ngp_core::{Exponents, MultiPoly, Multidegree, Rational, Scalar, VarSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generator seeded from the check name and pair, so reports are reproducible.
pub fn rng_for(check: &str, pair: &str) -> ChaCha8Rng {
    let mut h = DefaultHasher::new();
    (check, pair).hash(&mut h);
    ChaCha8Rng::seed_from_u64(h.finish())
}

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn scalar<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::new(rational(rng), rational(rng))
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::new(nonzero_rational(rng), rational(rng))
}

pub fn hermitian<R: Rng>(rng: &mut R, k: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        m[(i, i)] = Scalar::real(rational(rng));
        for j in i + 1..k {
            let c = scalar(rng);
            m[(j, i)] = c.conj();
            m[(i, j)] = c;
        }
    }
    m
}

/// Multidegrees `(m, m, k, 0)` with `2m + k ≤ cap` that carry invariants.
pub fn invariant_degrees(cap: u32) -> Vec<Multidegree> {
    let mut out = Vec::new();
    for m in 0..=cap / 2 {
        for k in 0..=cap - 2 * m {
            out.push(Multidegree::new(m, m, k, 0));
        }
    }
    out
}

/// Random combination of plain monomials `p^α q^β r^γ` across a few
/// multidegrees of total degree ≤ `cap`, optionally with fixed z-degree.
pub fn invariant<R: Rng>(rng: &mut R, pair: &PairDescriptor, cat: &InvariantCatalogue, cap: u32, z_degree: Option<u32>) -> MultiPoly {
    let degrees: Vec<Multidegree> = invariant_degrees(cap).into_iter().filter(|d| z_degree.map_or(true, |k| d.z == k)).collect();
    loop {
        let mut g = MultiPoly::zero(pair.vars());
        for _ in 0..3 {
            let d = degrees.choose(rng).expect("some degree");
            for (_, p) in plain_monomials(pair, cat, d) {
                if rng.gen_bool(0.7) {
                    g = &g + &p.scale(&scalar(rng));
                }
            }
        }
        if !g.is_zero() {
            return g;
        }
    }
}

/// Random polynomial of total degree ≤ `deg` in `vars`.
pub fn poly<R: Rng>(rng: &mut R, vars: VarSpace, deg: u32, density: f64) -> MultiPoly {
    let mut p = MultiPoly::zero(vars);
    for d in 0..=deg {
        for e in compositions(vars.nvars(), d) {
            if rng.gen_bool(density) {
                p.add_term(e, nonzero_scalar(rng));
            }
        }
    }
    p
}

/// Random bihomogeneous polynomial of bidegree `(a, b)` in `v, v̄`.
pub fn bihomogeneous<R: Rng>(rng: &mut R, vv: VarSpace, a: u32, b: u32) -> MultiPoly {
    let k = vv.v;
    let mut p = MultiPoly::zero(vv);
    let left = compositions(k, a);
    let right = compositions(k, b);
    while p.is_zero() {
        for l in &left {
            for r in &right {
                if rng.gen_bool(0.4) {
                    let e: Exponents = l.iter().chain(r.iter()).copied().collect();
                    p.add_term(e, nonzero_scalar(rng));
                }
            }
        }
    }
    p
}

/// Random normal ordered monomial `c·Z^a Z̄^b T^c` of order ≤ `order`.
pub fn pbw_monomial<R: Rng>(rng: &mut R, kappa: usize, order: u32) -> Pbw {
    let total = rng.gen_range(0..=order);
    let keys = compositions(2 * kappa + 1, total);
    let key = keys.choose(rng).expect("nonempty").clone();
    let mut p = Pbw::zero(kappa);
    p.add_term(key, nonzero_scalar(rng));
    p
}
