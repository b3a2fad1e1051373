//! Graded grammar patterns.
//!
//! Patterns are written in a small DSL (see [`dsl`]), compiled to
//! [`Automaton`](crate::automata::Automaton)s and collected in a
//! [`Registry`]. [`match_document`] counts occurrences, [`grammar_feature_report`]
//! groups them by level and [`hints`] lists patterns a partial sentence
//! could still complete.

mod cache;
mod compile;
pub mod dsl;
mod registry;

pub use cache::{load_cache, save_cache, write_cache, CacheError, REGISTRY_CACHE_VERSION};
pub use compile::{compile_dsl, CompileOptions, DEFAULT_ANY_STAR_MAX};
pub use dsl::CompileError;
pub use registry::{
    bundled_sources, content_hash, read_pattern_dir, CompiledPattern, Fixtures, GrammarPattern, Level, PatternSource,
    Registry, RegistryError, PATTERN_FORMAT_VERSION,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::MatchError;
use crate::token::{Document, Token};
use crate::tokenize::{tokenize, Lexicon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("pattern `{pattern}`, sentence {sentence}: {source}")]
    Match { pattern: String, sentence: usize, source: Box<MatchError> },
    #[error("unknown pattern id `{0}`")]
    UnknownPatternId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchResult {
    pub pattern_id: String,
    pub level: Level,
    pub sentence_index: usize,
    /// Half-open token range within the sentence.
    pub token_span: (usize, usize),
}

/// Matches of one pattern in one sentence, left to right without overlap.
pub fn match_sentence(p: &CompiledPattern, sentence: &[Token], sentence_index: usize) -> Result<Vec<MatchResult>, GrammarError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sentence.len() {
        let m = p.automaton.match_at(sentence, i).map_err(|source| GrammarError::Match {
            pattern: p.pattern.id.clone(),
            sentence: sentence_index,
            source: Box::new(source),
        })?;
        match m.length {
            Some(len) => {
                out.push(MatchResult {
                    pattern_id: p.pattern.id.clone(),
                    level: p.pattern.level,
                    sentence_index,
                    token_span: (i, i + len),
                });
                i += len;
            }
            None => i += 1,
        }
    }
    Ok(out)
}

/// All pattern occurrences, sorted by (sentence, start, pattern id).
///
/// Occurrences of one pattern never overlap; different patterns may.
pub fn match_document(r: &Registry, d: &Document) -> Result<Vec<MatchResult>, GrammarError> {
    let mut out = Vec::new();
    for (si, sentence) in d.sentences.iter().enumerate() {
        for p in r.iter() {
            out.extend(match_sentence(p, sentence, si)?);
        }
    }
    out.sort_by(|a, b| {
        (a.sentence_index, a.token_span.0, &a.pattern_id).cmp(&(b.sentence_index, b.token_span.0, &b.pattern_id))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub id: String,
    pub grammar: String,
    pub level: Level,
    pub count: usize,
    pub unique: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTotals {
    pub level: Level,
    pub total_count: usize,
    pub unique_patterns: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportTotals {
    /// N5 first.
    pub levels: Vec<LevelTotals>,
    pub total_count: usize,
    pub unique_patterns: usize,
}

/// Per-level grammar counts, serialized as
/// `{"N1":[…],"N2":[…],…,"N5":[…],"totals":{…}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarReport {
    #[serde(rename = "N1")]
    pub n1: Vec<ReportEntry>,
    #[serde(rename = "N2")]
    pub n2: Vec<ReportEntry>,
    #[serde(rename = "N3")]
    pub n3: Vec<ReportEntry>,
    #[serde(rename = "N4")]
    pub n4: Vec<ReportEntry>,
    #[serde(rename = "N5")]
    pub n5: Vec<ReportEntry>,
    pub totals: ReportTotals,
}

impl GrammarReport {
    pub fn level(&self, level: Level) -> &[ReportEntry] {
        match level {
            Level::N1 => &self.n1,
            Level::N2 => &self.n2,
            Level::N3 => &self.n3,
            Level::N4 => &self.n4,
            Level::N5 => &self.n5,
        }
    }

    fn level_mut(&mut self, level: Level) -> &mut Vec<ReportEntry> {
        match level {
            Level::N1 => &mut self.n1,
            Level::N2 => &mut self.n2,
            Level::N3 => &mut self.n3,
            Level::N4 => &mut self.n4,
            Level::N5 => &mut self.n5,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &ReportEntry> {
        Level::ALL.into_iter().rev().flat_map(|l| self.level(l).iter())
    }

    pub fn totals_for(&self, level: Level) -> LevelTotals {
        self.totals.levels[level.index()]
    }
}

/// Groups matches by level; one entry per pattern that occurs, in registry order.
pub fn grammar_feature_report(matches: &[MatchResult], r: &Registry) -> Result<GrammarReport, GrammarError> {
    let mut counts = vec![0usize; r.len()];
    let order: std::collections::HashMap<&str, usize> =
        r.iter().enumerate().map(|(i, p)| (p.pattern.id.as_str(), i)).collect();
    for m in matches {
        let i = *order.get(m.pattern_id.as_str()).ok_or_else(|| GrammarError::UnknownPatternId(m.pattern_id.clone()))?;
        counts[i] += 1;
    }
    let mut report = GrammarReport {
        n1: Vec::new(),
        n2: Vec::new(),
        n3: Vec::new(),
        n4: Vec::new(),
        n5: Vec::new(),
        totals: ReportTotals {
            levels: Level::ALL.iter().map(|&level| LevelTotals { level, total_count: 0, unique_patterns: 0 }).collect(),
            total_count: 0,
            unique_patterns: 0,
        },
    };
    for (p, &count) in r.iter().zip(&counts) {
        if count == 0 {
            continue;
        }
        let level = p.pattern.level;
        report.level_mut(level).push(ReportEntry {
            id: p.pattern.id.clone(),
            grammar: p.pattern.display_name.clone(),
            level,
            count,
            unique: 1,
        });
        let t = &mut report.totals.levels[level.index()];
        t.total_count += count;
        t.unique_patterns += 1;
        report.totals.total_count += count;
        report.totals.unique_patterns += 1;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hint {
    pub pattern_id: String,
    pub display_name: String,
    pub level: Level,
    pub consumed: usize,
    /// Descriptions of the tokens on the shortest way to completion.
    pub expected: Vec<String>,
}

/// Patterns that a suffix of `partial` has started but not completed.
///
/// One hint per pattern, for its longest pending prefix. Patterns completed
/// by a suffix of the input produce no hint. Sorted by consumed tokens
/// (most first), then level (hardest first), then id.
pub fn hints(r: &Registry, partial: &[Token]) -> Result<Vec<Hint>, GrammarError> {
    let mut out = Vec::new();
    for p in r.iter() {
        let report = p
            .automaton
            .feed_partial(partial)
            .map_err(|source| GrammarError::Match { pattern: p.pattern.id.clone(), sentence: 0, source: Box::new(source) })?;
        if report.completed {
            continue;
        }
        if let Some(best) = report.pending.first() {
            out.push(Hint {
                pattern_id: p.pattern.id.clone(),
                display_name: p.pattern.display_name.clone(),
                level: p.pattern.level,
                consumed: best.consumed,
                expected: best.continuation.iter().map(|pred| pred.describe()).collect(),
            });
        }
    }
    out.sort_by(|a, b| b.consumed.cmp(&a.consumed).then(b.level.cmp(&a.level)).then_with(|| a.pattern_id.cmp(&b.pattern_id)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureFailure {
    pub pattern_id: String,
    pub sentence: String,
    pub positive: bool,
    pub matches: usize,
}

/// Runs every pattern's fixtures through the reference tokenizer.
///
/// A positive fixture must match at least once, a negative one never.
pub fn check_fixtures(r: &Registry, lex: &Lexicon) -> Result<Vec<FixtureFailure>, GrammarError> {
    let mut failures = Vec::new();
    for p in r.iter() {
        let cases = p.pattern.fixtures.positive.iter().map(|s| (s, true)).chain(p.pattern.fixtures.negative.iter().map(|s| (s, false)));
        for (sentence, positive) in cases {
            let mut matches = 0;
            for (si, s) in crate::tokenize::split_sentences(sentence).iter().enumerate() {
                matches += match_sentence(p, &tokenize(s, lex), si)?.len();
            }
            if (matches > 0) != positive {
                failures.push(FixtureFailure { pattern_id: p.pattern.id.clone(), sentence: sentence.clone(), positive, matches });
            }
        }
    }
    Ok(failures)
}
