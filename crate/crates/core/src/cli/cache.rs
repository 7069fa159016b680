//! On-disk memo of command reports, keyed by a hash of everything that
//! determines the output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::report::Report;
use crate::error::Result;

/// Bumped whenever any report changes shape or content.
pub const SCHEMA_VERSION: u32 = 1;

pub const CACHE_ENV: &str = "QGK_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// The flag wins over the environment; no cache when neither is set.
    pub fn resolve(flag: Option<&Path>) -> Option<Cache> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(|dir| Cache { dir })
    }

    pub fn key(quiver_json: &str, request: &str) -> String {
        let mut h = Sha256::new();
        h.update(format!("qgk-cache v{SCHEMA_VERSION}\n").as_bytes());
        h.update(Sha256::digest(quiver_json.as_bytes()));
        h.update(request.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, or `None` when missing or unreadable.
    pub fn load(&self, key: &str) -> Option<Report> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        Report::from_json(&text).ok()
    }

    /// Writes to a temporary file in the cache directory, then renames.
    pub fn store(&self, key: &str, report: &Report) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(report.to_json().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }
}
