//! Process-wide memo tables for results that depend only on exact polynomial data.
//! Conjugate algebraic numbers share minimal polynomials, so the same resultants,
//! factorizations and root isolations recur many times.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Mutex, OnceLock};

const CAPACITY: usize = 4096;

pub(crate) struct Memo<K, V> {
    table: OnceLock<Mutex<HashMap<K, V>>>,
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub(crate) const fn new() -> Self {
        Memo {
            table: OnceLock::new(),
        }
    }

    fn table(&self) -> &Mutex<HashMap<K, V>> {
        self.table.get_or_init(|| Mutex::new(HashMap::new()))
    }

    pub(crate) fn get_or_try<E>(&self, key: &K, compute: impl FnOnce() -> Result<V, E>) -> Result<V, E> {
        if let Some(v) = self.table().lock().unwrap().get(key) {
            return Ok(v.clone());
        }
        // computed outside the lock; concurrent misses may both compute the same value
        let v = compute()?;
        let mut t = self.table().lock().unwrap();
        if t.len() >= CAPACITY {
            t.clear();
        }
        t.insert(key.clone(), v.clone());
        Ok(v)
    }
}
