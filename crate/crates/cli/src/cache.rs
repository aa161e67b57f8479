//! On-disk resolution cache: one JSON file per content hash, under a
//! directory named after the tool version.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use relhom::homology::{ResolutionStore, StoredResolution};

pub const ENV_VAR: &str = "RELHOM_CACHE_DIR";

pub struct DiskStore {
    dir: PathBuf,
}

impl DiskStore {
    /// Creates `<root>/v<version>`.
    pub fn open(root: &Path) -> std::io::Result<Self> {
        let dir = root.join(format!("v{}", env!("CARGO_PKG_VERSION")));
        fs::create_dir_all(&dir)?;
        Ok(DiskStore { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }
}

impl ResolutionStore for DiskStore {
    fn load(&self, key: &str) -> Option<StoredResolution> {
        let bytes = fs::read(self.path(key)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    fn save(&self, key: &str, value: &StoredResolution) {
        // write then rename so concurrent readers never see a partial file
        let Ok(bytes) = serde_json::to_vec(value) else { return };
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        let written = fs::File::create(&tmp).and_then(|mut f| f.write_all(&bytes));
        if written.is_ok() {
            let _ = fs::rename(&tmp, self.path(key));
        } else {
            let _ = fs::remove_file(&tmp);
        }
    }
}

/// `--cache-dir`, then the environment variable, then `$XDG_CACHE_HOME/relhom`
/// or `~/.cache/relhom`.
pub fn default_root(flag: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.to_path_buf());
    }
    if let Some(p) = std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(p));
    }
    if let Some(p) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(p).join("relhom"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("relhom"))
}
