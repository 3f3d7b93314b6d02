//! Completed-system cache, enabled by the `OPERAD_FORGE_CACHE` environment
//! variable (a directory path).  Entries are keyed by a hash over the
//! presentation content, the order convention, the truncation arity and the
//! step budget; a stale or unreadable entry falls back to recomputation.

use operad_forge_core::{OrderSpec, Presentation, RewriteSystem};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::PathBuf;

pub fn cache_key(
    p: &Presentation,
    order: &OrderSpec,
    max_arity: usize,
    step_limit: u64,
) -> String {
    let order_json =
        serde_json::to_string(order).expect("order spec serializes");
    let mut hasher = Sha256::new();
    hasher.update(p.fingerprint());
    hasher.update("\n");
    hasher.update(&order_json);
    hasher.update("\n");
    hasher.update(max_arity.to_string());
    hasher.update("\n");
    hasher.update(step_limit.to_string());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn entry_path(key: &str) -> Option<PathBuf> {
    std::env::var_os("OPERAD_FORGE_CACHE")
        .map(|dir| PathBuf::from(dir).join(format!("{key}.json")))
}

/// A cached completed system, if the cache is enabled and holds a readable
/// entry for this key.
pub fn load(key: &str) -> Option<RewriteSystem> {
    let path = entry_path(key)?;
    let text = fs::read_to_string(path).ok()?;
    let value = serde_json::from_str(&text).ok()?;
    RewriteSystem::from_json(&value).ok()
}

/// Best-effort store; a cache write failure only warns.
pub fn store(key: &str, system: &RewriteSystem) {
    let Some(path) = entry_path(key) else {
        return;
    };
    let dump = serde_json::to_string_pretty(&system.to_json())
        .expect("system dump serializes");
    let write = path
        .parent()
        .map(fs::create_dir_all)
        .unwrap_or(Ok(()))
        .and_then(|()| fs::write(&path, dump + "\n"));
    if let Err(e) = write {
        eprintln!("warning: cache write to {} failed: {e}", path.display());
    }
}
