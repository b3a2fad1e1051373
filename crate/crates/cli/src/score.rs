//! Corpus scoring: `score <dir>`.

use std::path::{Path, PathBuf};

use sakubun_core::features::assemble_matrix;
use sakubun_core::scoring::{score_corpus, ScoreError};
use sakubun_core::{Document, FeatureMatrix64, ScoreReport64};

use crate::analyze::read_document;
use crate::config::Config;
use crate::engine::Engine;
use crate::error::CliError;

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_CSV: &str = "report.csv";
pub const FEATURES_CSV: &str = "features.csv";
pub const FEATURES_BOW: &str = "features.bow.json";

/// `*.txt` and `*.tsv` files of `dir`, sorted by file name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt" || x == "tsv"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Reads every document; any failure aborts with one line per bad file.
pub fn load_corpus(dir: &Path, engine: &Engine) -> Result<Vec<Document>, CliError> {
    let mut docs = Vec::new();
    let mut errors = Vec::new();
    for path in corpus_files(dir)? {
        match read_document(&path, engine) {
            Ok(d) if d.sentences.is_empty() => errors.push(format!("{}: EmptyDocument", path.display())),
            Ok(d) => docs.push(d),
            Err(e) => errors.push(format!("{}: {e}", path.display())),
        }
    }
    for (i, d) in docs.iter().enumerate() {
        if docs[..i].iter().any(|o| o.id == d.id) {
            errors.push(format!("{}: duplicate document id `{}`", dir.display(), d.id));
        }
    }
    if !errors.is_empty() {
        return Err(CliError::Corpus(errors));
    }
    Ok(docs)
}

pub struct ScoreOutput {
    pub matrix: FeatureMatrix64,
    pub report: ScoreReport64,
}

pub fn score_documents(engine: &Engine, cfg: &Config, docs: &[Document]) -> Result<ScoreOutput, CliError> {
    if docs.len() < 2 {
        return Err(ScoreError::TooFewRows(docs.len()).into());
    }
    let matrix: FeatureMatrix64 = assemble_matrix(docs, &engine.lexicon, &engine.registry, engine.dictionary_mode())?;
    let report = score_corpus(&matrix, &cfg.score_params())?;
    Ok(ScoreOutput { matrix, report })
}

pub fn score_dir(engine: &Engine, cfg: &Config, dir: &Path) -> Result<ScoreOutput, CliError> {
    score_documents(engine, cfg, &load_corpus(dir, engine)?)
}

/// Writes the report and feature exports into `out`, returning the paths.
pub fn write_outputs(out: &Path, o: &ScoreOutput) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut bow = serde_json::to_string_pretty(&o.matrix.sidecar()).expect("sidecar serializes");
    bow.push('\n');
    let files = [
        (REPORT_JSON, o.report.to_json()),
        (REPORT_CSV, o.report.to_csv()),
        (FEATURES_CSV, o.matrix.to_csv()),
        (FEATURES_BOW, bow),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let p = out.join(name);
        std::fs::write(&p, body).map_err(|e| CliError::io(&p, e))?;
        written.push(p);
    }
    Ok(written)
}
