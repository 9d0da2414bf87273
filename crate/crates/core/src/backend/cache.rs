//! Digest-addressed reply cache: one file per prompt, holding the raw reply.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::BackendError;

/// SHA-256 over the model name and full prompt text, hex encoded.
pub fn cache_key(model: &str, prompt: &str) -> String {
    let mut h = Sha256::new();
    h.update(model.as_bytes());
    h.update([0u8]);
    h.update(prompt.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

impl ResponseCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, BackendError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| BackendError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(ResponseCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.txt"))
    }

    pub fn get(&self, key: &str) -> Result<Option<String>, BackendError> {
        match fs::read_to_string(self.path(key)) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(BackendError::Cache(e.to_string())),
        }
    }

    /// Writes through a temp file and rename, so concurrent writers of one
    /// key leave exactly one complete file.
    pub fn put(&self, key: &str, reply: &str) -> Result<(), BackendError> {
        let err = |e: std::io::Error| BackendError::Cache(format!("{}: {e}", self.dir.display()));
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(err)?;
        tmp.write_all(reply.as_bytes()).map_err(err)?;
        tmp.persist(self.path(key)).map_err(|e| err(e.error))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        fs::read_dir(&self.dir)
            .map(|it| {
                it.filter_map(Result::ok)
                    .filter(|e| e.path().extension().is_some_and(|x| x == "txt"))
                    .count()
            })
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_depends_on_every_byte() {
        let a = cache_key("m", "hello world");
        assert_eq!(a, cache_key("m", "hello world"));
        assert_ne!(a, cache_key("m", "hello  world"));
        assert_ne!(a, cache_key("m2", "hello world"));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn put_get_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = ResponseCache::open(dir.path()).unwrap();
        assert_eq!(c.get("k").unwrap(), None);
        c.put("k", "| 1 | 2 |\n").unwrap();
        c.put("k", "| 1 | 2 |\n").unwrap();
        assert_eq!(c.get("k").unwrap().as_deref(), Some("| 1 | 2 |\n"));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn unwritable_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain-file");
        std::fs::write(&file, "x").unwrap();
        assert!(matches!(ResponseCache::open(file.join("sub")), Err(BackendError::Cache(_))));
    }
}
