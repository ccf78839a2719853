//! On-disk cache for expensive enumerations, guarded by a versioned manifest
//! with a sha256 checksum per entry.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::ErrorKind;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "LINSET_CACHE_DIR";
const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CacheKey {
    pub kind: &'static str,
    pub p: u32,
    pub h: u32,
    pub t: u32,
    pub n: u32,
    pub d: u32,
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-p{}-h{}-t{}-n{}-d{}",
            self.kind, self.p, self.h, self.t, self.n, self.d
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheManifest {
    pub format_version: u32,
    pub entries: BTreeMap<String, Entry>,
}

impl Default for CacheManifest {
    fn default() -> Self {
        CacheManifest {
            format_version: CACHE_FORMAT_VERSION,
            entries: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookup {
    Hit(Vec<u8>),
    Miss,
    /// Treated as a miss; the string says why.
    Rejected(String),
}

pub struct Cache {
    dir: PathBuf,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    fn manifest_path(&self) -> PathBuf {
        self.dir.join(MANIFEST)
    }

    /// `Ok(None)` when there is no manifest yet.
    fn read_manifest(&self) -> Result<Option<Result<CacheManifest, String>>> {
        let path = self.manifest_path();
        match fs::read(&path) {
            Ok(bytes) => Ok(Some(
                serde_json::from_slice(&bytes).map_err(|e| format!("unreadable manifest: {e}")),
            )),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e).with_context(|| format!("reading {}", path.display())),
        }
    }

    pub fn load(&self, key: &CacheKey) -> Result<Lookup> {
        let manifest = match self.read_manifest()? {
            None => return Ok(Lookup::Miss),
            Some(Err(why)) => return Ok(Lookup::Rejected(why)),
            Some(Ok(m)) => m,
        };
        if manifest.format_version != CACHE_FORMAT_VERSION {
            return Ok(Lookup::Rejected(format!(
                "manifest format version {} (expected {CACHE_FORMAT_VERSION})",
                manifest.format_version
            )));
        }
        let Some(entry) = manifest.entries.get(&key.to_string()) else {
            return Ok(Lookup::Miss);
        };
        let path = self.dir.join(&entry.file);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == ErrorKind::NotFound => {
                return Ok(Lookup::Rejected(format!("{} is missing", path.display())))
            }
            Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
        };
        if sha256_hex(&bytes) != entry.sha256 {
            return Ok(Lookup::Rejected(format!(
                "checksum mismatch for {}",
                path.display()
            )));
        }
        Ok(Lookup::Hit(bytes))
    }

    pub fn store(&self, key: &CacheKey, bytes: &[u8]) -> Result<()> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating {}", self.dir.display()))?;
        let mut manifest = match self.read_manifest()? {
            Some(Ok(m)) if m.format_version == CACHE_FORMAT_VERSION => m,
            _ => CacheManifest::default(),
        };
        let file = format!("{key}.txt");
        let path = self.dir.join(&file);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        manifest.entries.insert(
            key.to_string(),
            Entry {
                file,
                sha256: sha256_hex(bytes),
                bytes: bytes.len() as u64,
            },
        );
        let mpath = self.manifest_path();
        let text = serde_json::to_vec_pretty(&manifest)?;
        fs::write(&mpath, text).with_context(|| format!("writing {}", mpath.display()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> CacheKey {
        CacheKey {
            kind: "spread",
            p: 2,
            h: 1,
            t: 3,
            n: 1,
            d: 0,
        }
    }

    #[test]
    fn round_trip_and_gates() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert_eq!(cache.load(&key()).unwrap(), Lookup::Miss);
        cache.store(&key(), b"hello").unwrap();
        assert_eq!(cache.load(&key()).unwrap(), Lookup::Hit(b"hello".to_vec()));

        let file = dir.path().join(format!("{}.txt", key()));
        fs::write(&file, b"hellp").unwrap();
        assert!(matches!(cache.load(&key()).unwrap(), Lookup::Rejected(_)));

        cache.store(&key(), b"hello").unwrap();
        let mpath = dir.path().join(MANIFEST);
        let mut m: CacheManifest = serde_json::from_slice(&fs::read(&mpath).unwrap()).unwrap();
        m.format_version += 1;
        fs::write(&mpath, serde_json::to_vec(&m).unwrap()).unwrap();
        assert!(matches!(cache.load(&key()).unwrap(), Lookup::Rejected(_)));
        // a store after a version change starts a fresh manifest
        cache.store(&key(), b"again").unwrap();
        assert_eq!(cache.load(&key()).unwrap(), Lookup::Hit(b"again".to_vec()));
    }
}
