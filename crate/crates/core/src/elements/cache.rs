//! Insert-once memoisation shared between sweep workers.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Mutex;

/// A map whose entries are computed at most once per key (up to races,
/// where the first stored value wins and every caller sees it).
#[derive(Debug)]
pub struct OnceMap<K, V> {
    inner: Mutex<HashMap<K, V>>,
}

impl<K: Eq + Hash, V: Clone> OnceMap<K, V> {
    pub fn new() -> Self {
        OnceMap { inner: Mutex::new(HashMap::new()) }
    }

    /// Returns the stored value for `key`, computing it with `make` if
    /// absent. The lock is not held while `make` runs, and errors are not
    /// cached.
    pub fn get_or_try_insert<E>(&self, key: K, make: impl FnOnce() -> Result<V, E>) -> Result<V, E> {
        if let Some(v) = self.lock().get(&key) {
            return Ok(v.clone());
        }
        let v = make()?;
        Ok(self.lock().entry(key).or_insert(v).clone())
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<K, V>> {
        // a panic while holding the lock cannot leave a half-written entry
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }
}

impl<K: Eq + Hash, V: Clone> Default for OnceMap<K, V> {
    fn default() -> Self {
        OnceMap::new()
    }
}
