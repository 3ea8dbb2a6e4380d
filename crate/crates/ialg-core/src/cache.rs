//! A small concurrent memo table for graded-component caches.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use spin::Mutex;

/// Memoized map from keys to shared computation results.
///
/// The lock is held only around lookup and insert; the computation itself
/// runs outside it (it may recurse into other memo entries).  Two threads may
/// therefore race to compute the same entry — both arrive at the same value
/// and the first insert wins, so the race only wastes a little work.  Because
/// hold times are a map operation, a spin mutex is adequate with or without
/// threads.
pub(crate) struct Memo<K, V> {
    map: Mutex<BTreeMap<K, Arc<V>>>,
}

impl<K: Ord + Clone, V> Memo<K, V> {
    pub fn new() -> Self {
        Memo { map: Mutex::new(BTreeMap::new()) }
    }

    pub fn get_or_try_insert_with<E>(
        &self,
        key: &K,
        compute: impl FnOnce() -> core::result::Result<V, E>,
    ) -> core::result::Result<Arc<V>, E> {
        if let Some(v) = self.map.lock().get(key) {
            return Ok(v.clone());
        }
        let v = Arc::new(compute()?);
        Ok(self.map.lock().entry(key.clone()).or_insert(v).clone())
    }
}

impl<K, V> core::fmt::Debug for Memo<K, V> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Memo({} entries)", self.map.lock().len())
    }
}
