//! Lexicon and registry loading, shared by every command and the service.

use std::path::Path;

use sakubun_core::features::DictionaryMode;
use sakubun_core::grammar::{bundled_sources, content_hash, load_cache, read_pattern_dir, write_cache, PatternSource, Registry};
use sakubun_core::tokenize::Lexicon;

use crate::config::{Config, DictionaryChoice};
use crate::error::CliError;

/// Where the registry came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegistryOrigin {
    Compiled,
    Cache,
    /// The cache was unusable; the reason is logged and kept here.
    CompiledAfterCacheMiss(String),
}

#[derive(Debug, Clone)]
pub struct Engine {
    pub lexicon: Lexicon,
    pub registry: Registry,
    pub origin: RegistryOrigin,
    pub dictionary: DictionaryChoice,
}

impl Engine {
    pub fn load(cfg: &Config) -> Result<Engine, CliError> {
        let lexicon = match &cfg.lexicon {
            Some(p) => Lexicon::load(p)?,
            None => Lexicon::bundled(),
        };
        let (registry, origin) = load_registry(cfg)?;
        Ok(Engine { lexicon, registry, origin, dictionary: cfg.dictionary })
    }

    pub fn dictionary_mode(&self) -> DictionaryMode<'_> {
        match self.dictionary {
            DictionaryChoice::CorpusLocal => DictionaryMode::CorpusLocal,
            DictionaryChoice::Global => DictionaryMode::Global(&self.lexicon),
        }
    }
}

fn pattern_sources(cfg: &Config) -> Result<Vec<PatternSource>, CliError> {
    match &cfg.patterns {
        Some(dir) => Ok(read_pattern_dir(dir)?),
        None => Ok(bundled_sources()),
    }
}

/// Loads the cached registry when it is current for these sources and
/// options, compiling otherwise.
pub fn load_registry(cfg: &Config) -> Result<(Registry, RegistryOrigin), CliError> {
    let sources = pattern_sources(cfg)?;
    let mut origin = RegistryOrigin::Compiled;
    if let Some(path) = cfg.cache.as_deref().filter(|p| p.exists()) {
        match load_current_cache(path, &sources, cfg) {
            Ok(r) => return Ok((r, RegistryOrigin::Cache)),
            Err(e) => {
                tracing::warn!("registry cache {}: {e}; compiling patterns instead", path.display());
                origin = RegistryOrigin::CompiledAfterCacheMiss(e.to_string());
            }
        }
    }
    let registry = Registry::from_sources(&sources, &cfg.compile_options())?;
    Ok((registry, origin))
}

fn load_current_cache(path: &Path, sources: &[PatternSource], cfg: &Config) -> Result<Registry, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let r = load_cache(&bytes, Some(&content_hash(sources)))?;
    if r.any_star_default() != Some(cfg.any_star_max) {
        return Err(options_mismatch(path, "any_star_max"));
    }
    if r.iter().any(|p| p.automaton.budget() != cfg.step_budget) {
        return Err(options_mismatch(path, "step_budget"));
    }
    Ok(r)
}

fn options_mismatch(path: &Path, field: &str) -> CliError {
    CliError::Malformed { path: path.display().to_string(), message: format!("cache compiled with a different {field}") }
}

/// Compiles the patterns in `dir` and writes the cache to `out`.
pub fn build_cache(dir: &Path, out: &Path, cfg: &Config) -> Result<Registry, CliError> {
    let registry = Registry::from_sources(&read_pattern_dir(dir)?, &cfg.compile_options())?;
    write_cache(&registry, out)?;
    Ok(registry)
}
