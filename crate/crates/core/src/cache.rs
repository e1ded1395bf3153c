//! Content-addressed result cache.
//!
//! Entries are JSON files named by the SHA-256 of `(input fingerprint, command, version)`.
//! Writes go to a temporary file in the same directory and are renamed into place,
//! so concurrent processes never observe partial entries.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

pub const CACHE_DIR_VAR: &str = "EKEDAHL_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

/// `$EKEDAHL_CACHE_DIR`, else `$XDG_CACHE_HOME/ekedahl`, else `$HOME/.cache/ekedahl`.
pub fn default_cache_dir() -> Option<PathBuf> {
    let var = |name| {
        std::env::var_os(name)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    };
    var(CACHE_DIR_VAR)
        .or_else(|| var("XDG_CACHE_HOME").map(|d| d.join("ekedahl")))
        .or_else(|| var("HOME").map(|d| d.join(".cache").join("ekedahl")))
}

/// Hex key for an input fingerprint, a command description and a version string.
pub fn cache_key(fingerprint: &str, command: &str, version: &str) -> String {
    let mut h = Sha256::new();
    for part in [fingerprint, command, version] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored entry; unreadable or corrupt entries count as misses.
    pub fn get(&self, key: &str) -> Option<serde_json::Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, key: &str, value: &serde_json::Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let nanos = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0);
        let tmp = self
            .dir
            .join(format!(".{key}.{}.{nanos}.tmp", std::process::id()));
        let mut file = fs::File::create(&tmp)?;
        file.write_all(
            serde_json::to_string(value)
                .expect("serializable")
                .as_bytes(),
        )?;
        file.sync_all()?;
        drop(file);
        fs::rename(&tmp, self.path(key)).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}
