use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::compile::{compile_dsl, CompileOptions};
use super::dsl::CompileError;
use crate::automata::Automaton;

pub const PATTERN_FORMAT_VERSION: u32 = 1;

/// JLPT level. Ordered from easiest (`N5`) to hardest (`N1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    N5,
    N4,
    N3,
    N2,
    N1,
}

impl Level {
    /// Easiest first.
    pub const ALL: [Level; 5] = [Level::N5, Level::N4, Level::N3, Level::N2, Level::N1];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::N5 => "N5",
            Level::N4 => "N4",
            Level::N3 => "N3",
            Level::N2 => "N2",
            Level::N1 => "N1",
        }
    }

    /// 0 for N5 up to 4 for N1.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Level::ALL.into_iter().find(|l| l.as_str() == s).ok_or_else(|| format!("unknown level `{s}`"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixtures {
    #[serde(default)]
    pub positive: Vec<String>,
    #[serde(default)]
    pub negative: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrammarPattern {
    pub id: String,
    pub display_name: String,
    pub level: Level,
    #[serde(default)]
    pub description: String,
    pub dsl: String,
    #[serde(default)]
    pub fixtures: Fixtures,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternFile {
    version: u32,
    #[serde(default)]
    subpatterns: BTreeMap<String, String>,
    patterns: Vec<GrammarPattern>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}: {message}")]
    Parse { file: String, message: String },
    #[error("{file}: duplicate pattern id `{id}`")]
    DuplicatePatternId { file: String, id: String },
    #[error("{file}:{line}: pattern `{id}`: {source}")]
    Compile { file: String, line: usize, id: String, source: CompileError },
}

/// A pattern source: a file name and its JSON text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSource {
    pub name: String,
    pub text: String,
}

const BUNDLED: [(&str, &str); 5] = [
    ("n5.json", include_str!("../../data/patterns/n5.json")),
    ("n4.json", include_str!("../../data/patterns/n4.json")),
    ("n3.json", include_str!("../../data/patterns/n3.json")),
    ("n2.json", include_str!("../../data/patterns/n2.json")),
    ("n1.json", include_str!("../../data/patterns/n1.json")),
];

pub fn bundled_sources() -> Vec<PatternSource> {
    BUNDLED.iter().map(|(n, t)| PatternSource { name: n.to_string(), text: t.to_string() }).collect()
}

/// Reads every `*.json` file in `dir`, sorted by file name.
pub fn read_pattern_dir(dir: &Path) -> Result<Vec<PatternSource>, RegistryError> {
    let io = |p: &Path, e: std::io::Error| RegistryError::Io { path: p.display().to_string(), message: e.to_string() };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(|e| io(&p, e))?;
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            Ok(PatternSource { name, text })
        })
        .collect()
}

/// SHA-256 over the sources in the order given, hex encoded.
pub fn content_hash(sources: &[PatternSource]) -> String {
    let mut h = Sha256::new();
    for s in sources {
        for part in [s.name.as_bytes(), s.text.as_bytes()] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part);
        }
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone)]
pub struct CompiledPattern {
    pub pattern: GrammarPattern,
    pub automaton: Automaton,
}

/// Compiled patterns in (level N5→N1, id) order.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    patterns: Vec<CompiledPattern>,
    index: HashMap<String, usize>,
    content_hash: String,
    any_star_default: Option<usize>,
}

impl Registry {
    pub fn bundled() -> Registry {
        Registry::from_sources(&bundled_sources(), &CompileOptions::default()).expect("bundled patterns compile")
    }

    pub fn load_dir(dir: &Path, opts: &CompileOptions) -> Result<Registry, RegistryError> {
        Registry::from_sources(&read_pattern_dir(dir)?, opts)
    }

    pub fn from_sources(sources: &[PatternSource], opts: &CompileOptions) -> Result<Registry, RegistryError> {
        let mut compiled = Vec::new();
        let mut seen: HashMap<String, String> = HashMap::new();
        for src in sources {
            let file: PatternFile = serde_json::from_str(&src.text)
                .map_err(|e| RegistryError::Parse { file: src.name.clone(), message: e.to_string() })?;
            if file.version != PATTERN_FORMAT_VERSION {
                return Err(RegistryError::Parse {
                    file: src.name.clone(),
                    message: format!("unsupported pattern file version {}", file.version),
                });
            }
            let mut local = opts.clone();
            local.subpatterns.extend(file.subpatterns);
            for p in file.patterns {
                if seen.insert(p.id.clone(), src.name.clone()).is_some() {
                    return Err(RegistryError::DuplicatePatternId { file: src.name.clone(), id: p.id });
                }
                let automaton = compile_dsl(&p.dsl, &local).map_err(|source| RegistryError::Compile {
                    file: src.name.clone(),
                    line: line_of_id(&src.text, &p.id),
                    id: p.id.clone(),
                    source,
                })?;
                compiled.push(CompiledPattern { pattern: p, automaton });
            }
        }
        Ok(Registry::assemble(compiled, content_hash(sources), opts.any_star_default))
    }

    pub(crate) fn assemble(mut patterns: Vec<CompiledPattern>, content_hash: String, any_star_default: Option<usize>) -> Registry {
        patterns.sort_by(|a, b| a.pattern.level.cmp(&b.pattern.level).then_with(|| a.pattern.id.cmp(&b.pattern.id)));
        let index = patterns.iter().enumerate().map(|(i, p)| (p.pattern.id.clone(), i)).collect();
        Registry { patterns, index, content_hash, any_star_default }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CompiledPattern> {
        self.patterns.iter()
    }

    pub fn get(&self, id: &str) -> Option<&CompiledPattern> {
        self.index.get(id).map(|&i| &self.patterns[i])
    }

    /// Hash of the pattern sources this registry was built from.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }

    /// The `any*` bound the patterns were compiled with.
    pub fn any_star_default(&self) -> Option<usize> {
        self.any_star_default
    }
}

fn line_of_id(text: &str, id: &str) -> usize {
    let needle = serde_json::to_string(id).unwrap();
    text.lines()
        .position(|l| l.contains("\"id\"") && l.contains(&needle))
        .or_else(|| text.lines().position(|l| l.contains(&needle)))
        .map_or(0, |i| i + 1)
}
