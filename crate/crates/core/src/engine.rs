use std::path::PathBuf;

use crate::cache::ResolutionCache;
use crate::groebner::Limits;

/// Entry point for every computation that needs Gröbner bases. Holds the
/// resource ceilings and the resolution cache; cheap to share by reference
/// across threads.
#[derive(Debug, Default)]
pub struct Engine {
    limits: Limits,
    cache: ResolutionCache,
}

impl Engine {
    pub fn new(limits: Limits) -> Self {
        Engine {
            limits,
            cache: ResolutionCache::in_memory(),
        }
    }

    /// An engine that also persists resolutions under `dir`.
    pub fn with_cache_dir(limits: Limits, dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        Ok(Engine {
            limits,
            cache: ResolutionCache::on_disk(dir.into())?,
        })
    }

    /// An engine that never memoizes; used to check cache transparency.
    pub fn uncached(limits: Limits) -> Self {
        Engine {
            limits,
            cache: ResolutionCache::disabled(),
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn cache(&self) -> &ResolutionCache {
        &self.cache
    }
}
