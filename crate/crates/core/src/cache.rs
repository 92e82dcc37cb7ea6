//! On-disk cache of exact pattern sets.
//!
//! Entries are the pattern-set JSON, stored under a SHA-256 key of the
//! engine version, the result kind, `n`, and the canonical map-spec JSON.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::perm::PatternSet;

pub const CACHE_DIR_ENV: &str = "PATLAB_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The cache named by `PATLAB_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(spec_json: &str, kind: &str, n: usize) -> String {
        let mut h = Sha256::new();
        h.update(crate::ENGINE_VERSION.as_bytes());
        h.update(b"\n");
        h.update(kind.as_bytes());
        h.update(b"\n");
        h.update(n.to_string().as_bytes());
        h.update(b"\n");
        h.update(spec_json.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Raw cached text, if present.
    pub fn get_raw(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    pub fn get(&self, key: &str) -> Option<PatternSet> {
        // an unreadable entry is treated as a miss and recomputed
        self.get_raw(key).and_then(|s| serde_json::from_str(&s).ok())
    }

    pub fn put(&self, key: &str, set: &PatternSet) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        fs::write(&tmp, set.to_json())?;
        fs::rename(tmp, self.path(key))?;
        Ok(())
    }

    /// Returns the cached set for `key`, computing and storing it on a miss.
    pub fn get_or_compute(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<PatternSet>,
    ) -> Result<(PatternSet, bool)> {
        if let Some(hit) = self.get(key) {
            return Ok((hit, true));
        }
        let fresh = compute()?;
        self.put(key, &fresh)?;
        Ok((fresh, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn hit_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = Cache::key(r#"{"type":"tent"}"#, "basic", 3);
        let set = PatternSet::from_iter_checked(3, ["321".parse::<Permutation>().unwrap()]).unwrap();
        let (first, hit) = cache.get_or_compute(&key, || Ok(set.clone())).unwrap();
        assert!(!hit);
        let (second, hit) = cache.get_or_compute(&key, || panic!("must not recompute")).unwrap();
        assert!(hit);
        assert_eq!(first, second);
        assert_eq!(cache.get_raw(&key).unwrap(), set.to_json());
    }

    #[test]
    fn keys_separate_inputs() {
        let a = Cache::key("tent", "allowed", 3);
        assert_ne!(a, Cache::key("tent", "allowed", 4));
        assert_ne!(a, Cache::key("tent", "basic", 3));
        assert_ne!(a, Cache::key("sawtooth", "allowed", 3));
        assert_eq!(a.len(), 64);
    }
}
