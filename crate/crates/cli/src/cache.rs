//! Content-addressed module cache: serialized modules keyed by the canonical
//! system/weight strings plus the artifact version, so stale builds are
//! ignored automatically.

use anyhow::Result;
use rpoisson_core::lie_algebra::ChevalleyAlgebra;
use rpoisson_core::repr::{highest_weight_module, HWModule};
use rpoisson_core::root_data::Weight;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::sync::Arc;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub struct ModuleCache {
    dir: Option<PathBuf>,
}

impl ModuleCache {
    /// Resolution order: explicit flag, `RPOISSON_CACHE_DIR`, then the
    /// default `.rpoisson-cache` under the working directory. `disabled`
    /// wins over everything.
    pub fn resolve(flag: Option<PathBuf>, disabled: bool) -> ModuleCache {
        if disabled {
            return ModuleCache { dir: None };
        }
        let dir = flag
            .or_else(|| std::env::var_os("RPOISSON_CACHE_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".rpoisson-cache"));
        ModuleCache { dir: Some(dir) }
    }

    pub fn disabled() -> ModuleCache {
        ModuleCache { dir: None }
    }

    fn path_for(&self, system: &str, weight: &str) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let mut h = Sha256::new();
        h.update(format!("{VERSION}|module|{system}|{weight}"));
        let digest = hex_string(&h.finalize());
        Some(dir.join(format!("{digest}.json")))
    }

    pub fn module(
        &self,
        g: &Arc<ChevalleyAlgebra>,
        lambda: &Weight,
        ceiling: u64,
    ) -> Result<HWModule> {
        let rs = g.root_system();
        let path = self.path_for(&rs.system_string(), &rs.weight_string(lambda));
        if let Some(path) = &path {
            if let Ok(text) = std::fs::read_to_string(path) {
                if let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) {
                    if let Ok(m) = HWModule::from_json(g, &value) {
                        return Ok(m);
                    }
                }
                // unreadable or stale content: fall through and rebuild
            }
        }
        let m = highest_weight_module(g, lambda, ceiling)?;
        if let Some(path) = &path {
            if let Some(parent) = path.parent() {
                let _ = std::fs::create_dir_all(parent);
            }
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, serde_json::to_string(&m.to_json())?).is_ok() {
                let _ = std::fs::rename(&tmp, path);
            }
        }
        Ok(m)
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
