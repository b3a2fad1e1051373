//! Precompiled registry bundle.
//!
//! ```json
//! {"version":1,"content_hash":"…","any_star_default":12,
//!  "patterns":[{"pattern":{…},"step_budget":10000,"automaton":{…}}]}
//! ```
//!
//! `content_hash` is the hash of the pattern sources the registry was
//! compiled from; a cache is stale when it differs from the current sources.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::registry::{CompiledPattern, GrammarPattern, Registry};
use crate::automata::{HookRegistry, SerialError, SerializedAutomaton};

pub const REGISTRY_CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CacheError {
    #[error("cache format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("cache built from different pattern sources (cached {cached}, current {current})")]
    StaleCache { cached: String, current: String },
    #[error("malformed cache: {0}")]
    Malformed(String),
    #[error("pattern `{id}`: {source}")]
    Automaton { id: String, source: SerialError },
    #[error("{0}")]
    Io(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheFile {
    version: u32,
    content_hash: String,
    any_star_default: Option<usize>,
    patterns: Vec<CacheEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheEntry {
    pattern: GrammarPattern,
    step_budget: usize,
    automaton: SerializedAutomaton,
}

pub fn save_cache(r: &Registry) -> Vec<u8> {
    let file = CacheFile {
        version: REGISTRY_CACHE_VERSION,
        content_hash: r.content_hash().to_string(),
        any_star_default: r.any_star_default(),
        patterns: r
            .iter()
            .map(|p| CacheEntry {
                pattern: p.pattern.clone(),
                step_budget: p.automaton.budget(),
                automaton: p.automaton.to_serialized(),
            })
            .collect(),
    };
    serde_json::to_vec(&file).expect("cache serializes")
}

pub fn write_cache(r: &Registry, path: &Path) -> Result<(), CacheError> {
    std::fs::write(path, save_cache(r)).map_err(|e| CacheError::Io(format!("{}: {e}", path.display())))
}

/// Rebuilds a registry from cache bytes without recompiling any pattern.
///
/// With `current_hash` set, a cache built from other sources is rejected.
pub fn load_cache(bytes: &[u8], current_hash: Option<&str>) -> Result<Registry, CacheError> {
    #[derive(Deserialize)]
    struct Header {
        version: u32,
    }
    let header: Header = serde_json::from_slice(bytes).map_err(|e| CacheError::Malformed(e.to_string()))?;
    if header.version != REGISTRY_CACHE_VERSION {
        return Err(CacheError::VersionMismatch { found: header.version, expected: REGISTRY_CACHE_VERSION });
    }
    let file: CacheFile = serde_json::from_slice(bytes).map_err(|e| CacheError::Malformed(e.to_string()))?;
    if let Some(current) = current_hash {
        if current != file.content_hash {
            return Err(CacheError::StaleCache { cached: file.content_hash, current: current.to_string() });
        }
    }
    let hooks = HookRegistry::builtin();
    let patterns = file
        .patterns
        .into_iter()
        .map(|e| {
            let automaton = e
                .automaton
                .build(&hooks)
                .map_err(|source| CacheError::Automaton { id: e.pattern.id.clone(), source })?
                .with_budget(e.step_budget);
            Ok(CompiledPattern { pattern: e.pattern, automaton })
        })
        .collect::<Result<Vec<_>, CacheError>>()?;
    Ok(Registry::assemble(patterns, file.content_hash, file.any_star_default))
}
