//! Shared memo tables. Reads take a shared lock; a miss computes outside the
//! lock and inserts under the write lock, so concurrent misses may duplicate
//! work but never block readers on a long computation.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, OnceLock, RwLock};

use ngp_core::bargmann::{dpi_matrix, GradedMatrix};
use ngp_core::nilgroup::Pbw;
use ngp_core::pairs::{make_pair, PairDescriptor, PairId};
use ngp_core::{Rational, Result};

pub struct Memo<K, V> {
    map: RwLock<HashMap<K, Arc<V>>>,
}

impl<K: Eq + Hash + Clone, V> Default for Memo<K, V> {
    fn default() -> Self {
        Memo { map: RwLock::new(HashMap::new()) }
    }
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    pub fn get_or_try<F>(&self, key: &K, f: F) -> Result<Arc<V>>
    where
        F: FnOnce() -> Result<V>,
    {
        if let Some(v) = self.map.read().expect("memo lock").get(key) {
            return Ok(v.clone());
        }
        let v = Arc::new(f()?);
        let mut w = self.map.write().expect("memo lock");
        Ok(w.entry(key.clone()).or_insert(v).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `dπ_λ` matrices keyed by (operator, λ, s).
#[derive(Default)]
pub struct DpiCache {
    memo: Memo<(Pbw, Rational, u32), GradedMatrix>,
}

impl DpiCache {
    pub fn get(&self, op: &Pbw, lambda: &Rational, s: u32) -> Result<Arc<GradedMatrix>> {
        self.memo.get_or_try(&(op.clone(), lambda.clone(), s), || dpi_matrix(op, lambda, s))
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }
}

/// Pair descriptors are built once per process.
pub fn pair(id: PairId) -> Arc<PairDescriptor> {
    static PAIRS: OnceLock<Memo<PairId, PairDescriptor>> = OnceLock::new();
    PAIRS
        .get_or_init(Memo::default)
        .get_or_try(&id, || make_pair(id.line, id.n))
        .expect("supported pair ids always build")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ngp_core::nilgroup::Letter;

    #[test]
    fn dpi_cache_hits() {
        let c = DpiCache::default();
        let z = Pbw::letter(2, Letter::Z(0));
        let a = c.get(&z, &Rational::ONE, 2).unwrap();
        let b = c.get(&z, &Rational::ONE, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(c.len(), 1);
        assert!(c.get(&z, &Rational::ZERO, 2).is_err());
    }

    #[test]
    fn pair_is_shared() {
        let id = PairId { line: 6, n: 2 };
        assert!(Arc::ptr_eq(&pair(id), &pair(id)));
    }
}
