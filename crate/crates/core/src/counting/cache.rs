//! On-disk count cache. One file per (variety hash, kind, base) holding
//! `n<TAB>value<TAB>meta` lines; writes go through a single lock and replace
//! the file atomically.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::varieties::VarietyPresentation;

use super::{CountError, CountKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub variety_hash: String,
    pub kind: CountKind,
    /// Base parameters, e.g. `p3m1` or `p5`.
    pub base: String,
}

impl CacheKey {
    pub fn new(v: &VarietyPresentation, kind: CountKind, base: String) -> Self {
        CacheKey {
            variety_hash: v.content_hash(),
            kind,
            base,
        }
    }

    fn file_name(&self) -> String {
        format!("{}-{}-{}.tsv", self.variety_hash, self.kind, self.base)
    }
}

#[derive(Debug)]
pub struct CountCache {
    dir: PathBuf,
    writer: Mutex<()>,
}

fn io_err(e: std::io::Error) -> CountError {
    CountError::Cache(e.to_string())
}

impl CountCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CountError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err)?;
        Ok(CountCache {
            dir,
            writer: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn read(&self, key: &CacheKey) -> Result<BTreeMap<usize, (u64, String)>, CountError> {
        let path = self.dir.join(key.file_name());
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
            Err(e) => return Err(io_err(e)),
        };
        let mut out = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let bad = || CountError::Cache(format!("{}:{}: malformed record", path.display(), lineno + 1));
            let mut fields = line.split('\t');
            let n = fields.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let value = fields.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let meta = fields.next().ok_or_else(bad)?.to_string();
            if fields.next().is_some() {
                return Err(bad());
            }
            out.insert(n, (value, meta));
        }
        Ok(out)
    }

    pub fn get(&self, key: &CacheKey, n: usize) -> Result<Option<(u64, String)>, CountError> {
        Ok(self.read(key)?.remove(&n))
    }

    pub fn put(&self, key: &CacheKey, n: usize, value: u64, meta: &str) -> Result<(), CountError> {
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let mut records = self.read(key)?;
        records.insert(n, (value, meta.to_string()));
        let path = self.dir.join(key.file_name());
        let tmp = path.with_extension("tsv.tmp");
        let mut f = fs::File::create(&tmp).map_err(io_err)?;
        for (n, (value, meta)) in &records {
            writeln!(f, "{n}\t{value}\t{meta}").map_err(io_err)?;
        }
        f.sync_all().map_err(io_err)?;
        fs::rename(&tmp, &path).map_err(io_err)
    }
}
