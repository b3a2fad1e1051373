//! Corpus statistics over a finished score run: `stats <report> <matrix>`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sakubun_core::features::{BowDictionary, BowSidecar, DictionarySource, SCALAR_COLUMNS};
use sakubun_core::grammar::Level;
use sakubun_core::scoring::{round6, ScoreMode, ScoreRecord, REPORT_VERSION};
use sakubun_core::FeatureMatrix64;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStat {
    pub name: String,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single document.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelUsage {
    pub level: Level,
    /// Pattern occurrences across the corpus.
    pub total: u64,
    /// Documents with at least one occurrence.
    pub documents: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeCount {
    pub label: String,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub mode: ScoreMode,
    pub documents: usize,
    pub digressions: usize,
    /// In scalar column order.
    pub features: Vec<FeatureStat>,
    /// N5 first.
    pub grammar_levels: Vec<LevelUsage>,
    /// Best grade first; empty in sum mode.
    pub grades: Vec<GradeCount>,
    pub scores: ScoreSummary,
}

/// Linear interpolation between closest ranks.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn corpus_stats(report: &ScoreRecord, matrix: &FeatureMatrix64) -> Result<CorpusStats, CliError> {
    let ids: Vec<&str> = report.documents.iter().map(|d| d.doc_id.as_str()).collect();
    if ids != matrix.doc_ids.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(CliError::Malformed {
            path: "feature matrix".into(),
            message: "documents differ from the report's".into(),
        });
    }
    let n = ids.len();
    if n == 0 {
        return Err(CliError::Malformed { path: "report".into(), message: "no documents".into() });
    }
    let features = SCALAR_COLUMNS
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let col = matrix.scalar.column(j);
            let mean = col.sum() / n as f64;
            let var = if n > 1 { col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
            FeatureStat { name: name.to_string(), mean: round6(mean), std: round6(var.sqrt()) }
        })
        .collect();
    let grammar_levels = Level::ALL
        .iter()
        .map(|&level| {
            let col = matrix.scalar.column(15 + level.index());
            LevelUsage { level, total: col.sum() as u64, documents: col.iter().filter(|&&v| v > 0.0).count() }
        })
        .collect();
    let mut labels: Vec<(&String, f64)> = report.corpus.grade_ranges.iter().map(|(l, r)| (l, r.lo)).collect();
    labels.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let grades = labels
        .into_iter()
        .map(|(label, _)| GradeCount {
            label: label.clone(),
            count: report.documents.iter().filter(|d| d.grade.as_ref() == Some(label)).count(),
        })
        .collect();
    let mut scores: Vec<f64> = report.documents.iter().map(|d| d.score).collect();
    scores.sort_by(f64::total_cmp);
    let summary = ScoreSummary {
        min: scores[0],
        q1: round6(quantile(&scores, 0.25)),
        median: round6(quantile(&scores, 0.5)),
        q3: round6(quantile(&scores, 0.75)),
        max: scores[n - 1],
    };
    Ok(CorpusStats {
        mode: report.corpus.mode,
        documents: n,
        digressions: report.documents.iter().filter(|d| d.digression).count(),
        features,
        grammar_levels,
        grades,
        scores: summary,
    })
}

/// Parses a report, checking the schema version before the body.
pub fn parse_report(text: &str, path: &str) -> Result<ScoreRecord, CliError> {
    let malformed = |e: serde_json::Error| CliError::Malformed { path: path.to_string(), message: e.to_string() };
    let v: serde_json::Value = serde_json::from_str(text).map_err(malformed)?;
    let found = v.get("version").and_then(|x| x.as_u64()).unwrap_or(0);
    if found != REPORT_VERSION as u64 {
        return Err(CliError::SchemaMismatch { found, expected: REPORT_VERSION });
    }
    serde_json::from_value(v).map_err(malformed)
}

pub fn cmd_stats(report: &Path, matrix: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(report).map_err(|e| CliError::io(report, e))?;
    let record = parse_report(&text, &report.display().to_string())?;
    let csv = std::fs::read_to_string(matrix).map_err(|e| CliError::io(matrix, e))?;
    let empty = BowSidecar { dictionary: BowDictionary::new(DictionarySource::CorpusLocal, []), bow: Default::default() };
    let m = FeatureMatrix64::from_exports(&csv, &empty)
        .map_err(|message| CliError::Malformed { path: matrix.display().to_string(), message })?;
    let stats = corpus_stats(&record, &m)?;
    let mut s = serde_json::to_string_pretty(&stats).expect("stats serialize");
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&[7.0], 0.75), 7.0);
    }

    #[test]
    fn version_checked_first() {
        let e = parse_report(r#"{"version": 2, "whatever": true}"#, "r").unwrap_err();
        assert!(matches!(e, CliError::SchemaMismatch { found: 2, expected: 1 }));
    }
}
