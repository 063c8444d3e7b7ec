//! Content-addressed memoization of resolutions, in memory and on disk.
//!
//! Keys are sha256 digests of the ring's canonical text and the module's
//! canonical presentation. Disk entries are JSON objects `{key, digest,
//! payload}` where `payload` is the canonical serialization and `digest`
//! its sha256; entries whose digest does not verify are ignored. Writes go
//! through a temporary file and an atomic rename, so readers never observe
//! a partial entry.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::fpmod::FPModule;
use crate::hypersurface::{Mode, RingContext};
use crate::matrix::PolyMatrix;
use crate::resolve::ResolutionData;

const KEY_PREFIX: &str = "hypersurf-resolution-v1";

#[derive(Debug, Default)]
pub struct ResolutionCache {
    enabled: bool,
    dir: Option<PathBuf>,
    memo: Mutex<HashMap<String, ResolutionData>>,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    hits: AtomicU64,
    misses: AtomicU64,
    rejected: AtomicU64,
}

/// Counters since the cache was created.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    /// Disk entries that failed the integrity check.
    pub rejected: u64,
    pub memory_entries: usize,
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    key: String,
    digest: String,
    payload: String,
}

#[derive(Serialize, Deserialize)]
struct Stored {
    mode: Mode,
    complete: bool,
    minimal: bool,
    gen_degrees: Vec<i32>,
    relations: Vec<Vec<String>>,
    degrees: Vec<Vec<i32>>,
    differentials: Vec<Vec<Vec<String>>>,
}

fn sha_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn columns_text(ctx: &RingContext, m: &PolyMatrix) -> Vec<Vec<String>> {
    m.columns()
        .iter()
        .map(|c| c.iter().map(|p| ctx.ring().format(p)).collect())
        .collect()
}

impl ResolutionCache {
    pub fn in_memory() -> Self {
        ResolutionCache {
            enabled: true,
            ..Default::default()
        }
    }

    pub fn on_disk(dir: PathBuf) -> std::io::Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(ResolutionCache {
            enabled: true,
            dir: Some(dir),
            ..Default::default()
        })
    }

    pub fn disabled() -> Self {
        ResolutionCache::default()
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key_for(&self, m: &FPModule) -> String {
        sha_hex(&format!(
            "{KEY_PREFIX}\n{}\n{}",
            m.ctx().canonical_text(),
            m.canonical_text()
        ))
    }

    /// A lock that serializes computations of one key within the process.
    pub fn key_lock(&self, key: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(key.to_string()).or_default().clone()
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            rejected: self.rejected.load(Ordering::Relaxed),
            memory_entries: self.memo.lock().map(|m| m.len()).unwrap_or(0),
        }
    }

    pub fn lookup(&self, key: &str, ctx: &RingContext) -> Option<ResolutionData> {
        if !self.enabled {
            return None;
        }
        if let Some(r) = self.memo.lock().ok().and_then(|m| m.get(key).cloned()) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Some(r);
        }
        let found = self
            .dir
            .as_ref()
            .and_then(|d| self.read_disk(&d.join(format!("{key}.json")), key, ctx));
        match &found {
            Some(r) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                if let Ok(mut m) = self.memo.lock() {
                    m.insert(key.to_string(), r.clone());
                }
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
            }
        }
        found
    }

    pub fn store(&self, key: &str, res: &ResolutionData) {
        if !self.enabled {
            return;
        }
        if let Ok(mut m) = self.memo.lock() {
            let longer = m.get(key).is_none_or(|old| old.len() < res.len() || res.complete);
            if longer {
                m.insert(key.to_string(), res.clone());
            }
        }
        if let Some(dir) = &self.dir {
            // a failed write only costs a recomputation later
            let _ = write_disk(dir, key, res);
        }
    }

    fn read_disk(&self, path: &Path, key: &str, ctx: &RingContext) -> Option<ResolutionData> {
        let text = fs::read_to_string(path).ok()?;
        let parsed = serde_json::from_str::<Envelope>(&text)
            .ok()
            .filter(|env| env.key == key && sha_hex(&env.payload) == env.digest)
            .and_then(|env| decode(&env.payload, ctx));
        if parsed.is_none() {
            self.rejected.fetch_add(1, Ordering::Relaxed);
        }
        parsed
    }
}

/// Result of [`verify_dir`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DirReport {
    pub entries: usize,
    pub bytes: u64,
    /// File names whose envelope is unreadable or whose digest is wrong.
    pub corrupt: Vec<String>,
}

/// Checks the envelope of every `*.json` entry in a cache directory.
pub fn verify_dir(dir: &Path) -> std::io::Result<DirReport> {
    let mut report = DirReport::default();
    let mut names: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    for path in names {
        report.entries += 1;
        let text = fs::read_to_string(&path)?;
        report.bytes += text.len() as u64;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        let sound = serde_json::from_str::<Envelope>(&text)
            .is_ok_and(|env| env.key == stem && sha_hex(&env.payload) == env.digest);
        if !sound {
            report
                .corrupt
                .push(path.file_name().unwrap_or_default().to_string_lossy().into_owned());
        }
    }
    Ok(report)
}

/// Deletes every cache entry in `dir`; returns how many were removed.
pub fn clear_dir(dir: &Path) -> std::io::Result<usize> {
    let mut n = 0;
    for e in fs::read_dir(dir)? {
        let path = e?.path();
        if path.extension().is_some_and(|x| x == "json") {
            fs::remove_file(path)?;
            n += 1;
        }
    }
    Ok(n)
}

fn encode(res: &ResolutionData) -> String {
    let ctx = res.module.ctx();
    let stored = Stored {
        mode: res.mode,
        complete: res.complete,
        minimal: res.minimal,
        gen_degrees: res.module.gen_degrees().to_vec(),
        relations: columns_text(ctx, res.module.presentation()),
        degrees: res.degrees.clone(),
        differentials: res.differentials.iter().map(|d| columns_text(ctx, d)).collect(),
    };
    serde_json::to_string(&stored).expect("plain data serializes")
}

fn decode(payload: &str, ctx: &RingContext) -> Option<ResolutionData> {
    let s: Stored = serde_json::from_str(payload).ok()?;
    if s.mode != ctx.mode() || s.degrees.len() != s.differentials.len() + 1 {
        return None;
    }
    let ring = ctx.ring();
    let parse_cols = |cols: &[Vec<String>]| -> Option<Vec<Vec<crate::poly::Polynomial>>> {
        cols.iter()
            .map(|c| c.iter().map(|t| ring.parse(t).ok()).collect::<Option<Vec<_>>>())
            .collect()
    };
    let module = FPModule::new(ctx, s.gen_degrees.clone(), parse_cols(&s.relations)?).ok()?;
    let mut differentials = Vec::with_capacity(s.differentials.len());
    for (i, cols) in s.differentials.iter().enumerate() {
        let rows = &s.degrees[i];
        let entries = parse_cols(cols)?;
        if entries.iter().any(|c| c.len() != rows.len()) || entries.len() != s.degrees[i + 1].len() {
            return None;
        }
        let m = PolyMatrix::from_columns(rows.len(), entries)
            .with_degrees(rows.clone(), s.degrees[i + 1].clone())
            .ok()?;
        differentials.push(m);
    }
    Some(ResolutionData {
        mode: s.mode,
        module,
        betti: s.degrees.iter().map(|d| d.len()).collect(),
        differentials,
        degrees: s.degrees,
        complete: s.complete,
        minimal: s.minimal,
    })
}

fn write_disk(dir: &Path, key: &str, res: &ResolutionData) -> std::io::Result<()> {
    let path = dir.join(format!("{key}.json"));
    let payload = encode(res);
    let env = Envelope {
        key: key.to_string(),
        digest: sha_hex(&payload),
        payload,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(serde_json::to_string(&env)?.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Engine;
    use crate::groebner::Limits;
    use crate::hypersurface::make_ring;

    #[test]
    fn disk_roundtrip_and_integrity() {
        let dir = tempfile::tempdir().unwrap();
        let r = make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x*y - z*w").unwrap();
        let k = FPModule::residue_field(&r);
        let first = Engine::with_cache_dir(Limits::default(), dir.path()).unwrap();
        let res = first.resolve(&k, 4).unwrap();
        let key = first.cache().key_for(&k);
        let path = dir.path().join(format!("{key}.json"));
        assert!(path.exists());

        let second = Engine::with_cache_dir(Limits::default(), dir.path()).unwrap();
        assert_eq!(second.cache().lookup(&key, r_mode(&k)), Some(res.clone()));

        // tamper with the payload: the entry must be rejected
        let text = fs::read_to_string(&path).unwrap().replace("x", "y");
        fs::write(&path, text).unwrap();
        let third = Engine::with_cache_dir(Limits::default(), dir.path()).unwrap();
        assert!(third.cache().lookup(&key, r_mode(&k)).is_none());
        assert_eq!(third.cache().stats().rejected, 1);
        assert_eq!(third.resolve(&k, 4).unwrap(), res);
        // recomputation rewrote a sound entry
        assert!(verify_dir(dir.path()).unwrap().corrupt.is_empty());
        fs::write(&path, "{").unwrap();
        assert_eq!(verify_dir(dir.path()).unwrap().corrupt.len(), 1);
        assert_eq!(clear_dir(dir.path()).unwrap(), 1);
    }

    fn r_mode(m: &FPModule) -> &RingContext {
        m.ctx()
    }

    #[test]
    fn prefix_extension_matches_fresh_computation() {
        let r = make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x*y - z*w").unwrap();
        let k = FPModule::residue_field(&r);
        let cached = Engine::default();
        cached.resolve(&k, 2).unwrap();
        let extended = cached.resolve(&k, 5).unwrap();
        let fresh = Engine::uncached(Limits::default()).resolve(&k, 5).unwrap();
        assert_eq!(extended, fresh);
        assert_eq!(cached.resolve(&k, 3).unwrap(), fresh.truncated(3));
    }
}
