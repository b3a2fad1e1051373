//! Single-document analysis, shared by `analyze` and `/api/analyze`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sakubun_core::features::{sentence_features, word_features, SentenceFeatures, WordFeatures};
use sakubun_core::grammar::{grammar_feature_report, hints, match_document, GrammarReport, Hint, MatchResult};
use sakubun_core::tokenize::{ingest_external, split_sentences, tokenize, tokenize_document};
use sakubun_core::Document;

use crate::engine::Engine;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzePayload {
    pub word_features: WordFeatures,
    pub sentence_features: SentenceFeatures,
    pub grammar_report: GrammarReport,
    pub matches: Vec<MatchResult>,
    /// Token surfaces per sentence; match spans index into these.
    pub sentences: Vec<Vec<String>>,
}

pub fn analyze_document(engine: &Engine, d: &Document) -> Result<AnalyzePayload, CliError> {
    let sentence_features = sentence_features(d)?;
    let matches = match_document(&engine.registry, d)?;
    let grammar_report = grammar_feature_report(&matches, &engine.registry)?;
    Ok(AnalyzePayload {
        word_features: word_features(d, &engine.lexicon),
        sentence_features,
        grammar_report,
        matches,
        sentences: d.sentences.iter().map(|s| s.iter().map(|t| t.surface.clone()).collect()).collect(),
    })
}

pub fn analyze_text(engine: &Engine, text: &str) -> Result<AnalyzePayload, CliError> {
    analyze_document(engine, &tokenize_document("input", text, &engine.lexicon))
}

/// Hints for the last sentence of `text`, which may be unterminated.
pub fn hints_for_text(engine: &Engine, text: &str) -> Result<Vec<Hint>, CliError> {
    let Some(last) = split_sentences(text).pop() else { return Ok(Vec::new()) };
    Ok(hints(&engine.registry, &tokenize(&last, &engine.lexicon))?)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Reads raw text, or token TSV when the extension is `.tsv`. A TSV file
/// must hold exactly one document.
pub fn read_document(path: &Path, engine: &Engine) -> Result<Document, CliError> {
    let id = stem(path);
    if path.extension().is_some_and(|e| e == "tsv") {
        let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
        let ingest = |source| CliError::Ingest { path: path.display().to_string(), source };
        let mut docs = ingest_external(std::io::BufReader::new(file), &id).map_err(ingest)?;
        return match docs.len() {
            0 => Ok(Document { id, sentences: Vec::new(), raw_text: String::new() }),
            1 => {
                let mut d = docs.remove(0);
                d.id = id;
                Ok(d)
            }
            n => Err(CliError::Malformed {
                path: path.display().to_string(),
                message: format!("expected one document, found {n}"),
            }),
        };
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(tokenize_document(id, &text, &engine.lexicon))
}

pub fn cmd_analyze(engine: &Engine, path: &Path) -> Result<String, CliError> {
    let d = read_document(path, engine)?;
    let payload = analyze_document(engine, &d)?;
    let mut s = serde_json::to_string_pretty(&payload).expect("payload serializes");
    s.push('\n');
    Ok(s)
}
