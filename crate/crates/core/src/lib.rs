//! Exact algebra for nilpotent Gelfand pairs of Heisenberg type.
//!
//! Everything here runs over the Gaussian rationals with no floating point:
//! sparse polynomials, invariant subspaces of compact group actions, Weyl
//! symmetrization into left-invariant operators and their Bargmann–Fock
//! matrices.
#![no_std]

extern crate alloc;

pub mod bargmann;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod nilgroup;
pub mod pairs;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use error::{Error, Result};
pub use poly::{Exponents, MultiPoly, Multidegree, VarKind, VarSpace};
pub use rational::Rational;
pub use scalar::Scalar;
