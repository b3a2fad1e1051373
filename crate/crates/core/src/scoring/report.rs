//! Serialized form of a [`ScoreReport`].
//!
//! Every number is rounded to 6 decimal places so that reports are stable
//! across platforms and independent implementations.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{GaussianModel, PenaltyMode, ScoreMode, ScoreRange, ScoreReport};
use crate::features::format_number;
use crate::Scalar;

pub const REPORT_VERSION: u32 = 1;

/// Rounds half away from zero to 6 decimals; `-0` becomes `0`.
pub fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 { 0.0 } else { r }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianRecord {
    pub mu: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeRecord {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub mode: ScoreMode,
    pub gaussian: GaussianRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<RangeRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub grade_ranges: BTreeMap<String, RangeRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub grade_gaussians: BTreeMap<String, Option<GaussianRecord>>,
    pub outlier_threshold: f64,
    pub dropped_columns: Vec<String>,
    pub penalty_factor: f64,
    pub penalty_mode: PenaltyMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentRecord {
    pub doc_id: String,
    pub feature_sum: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<String>,
    pub score: f64,
    pub raw_score: f64,
    pub digression: bool,
    pub theme_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRecord {
    pub version: u32,
    pub corpus: CorpusRecord,
    pub documents: Vec<DocumentRecord>,
}

fn gauss<T: Scalar>(g: &GaussianModel<T>) -> GaussianRecord {
    GaussianRecord { mu: round6(g.mu.as_f64()), sigma: round6(g.sigma.as_f64()) }
}

fn range<T: Scalar>(r: &ScoreRange<T>) -> RangeRecord {
    RangeRecord { lo: round6(r.lo.as_f64()), hi: round6(r.hi.as_f64()) }
}

impl<T: Scalar> ScoreReport<T> {
    pub fn to_record(&self) -> ScoreRecord {
        let corpus = CorpusRecord {
            mode: self.mode,
            gaussian: gauss(&self.gaussian),
            range: (self.mode == ScoreMode::Sum).then(|| range(&self.range)),
            grade_ranges: self.grade_ranges.iter().map(|(l, r)| (l.clone(), range(r))).collect(),
            grade_gaussians: self.grade_gaussians.iter().map(|(l, g)| (l.clone(), g.as_ref().map(gauss))).collect(),
            outlier_threshold: round6(self.outlier_threshold.as_f64()),
            dropped_columns: self.dropped_columns.clone(),
            penalty_factor: round6(self.penalty_factor.as_f64()),
            penalty_mode: self.penalty_mode,
            k: self.k,
            seed: self.seed,
        };
        let documents = self
            .documents
            .iter()
            .map(|d| DocumentRecord {
                doc_id: d.doc_id.clone(),
                feature_sum: round6(d.feature_sum.as_f64()),
                grade: d.grade.clone(),
                score: round6(d.score.as_f64()),
                raw_score: round6(d.raw_score.as_f64()),
                digression: d.digression,
                theme_distance: round6(d.theme_distance.as_f64()),
            })
            .collect();
        ScoreRecord { version: REPORT_VERSION, corpus, documents }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        self.to_record().to_json()
    }

    pub fn to_csv(&self) -> String {
        self.to_record().to_csv()
    }
}

impl ScoreRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    /// The documents table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("doc_id,feature_sum,grade,score,raw_score,digression,theme_distance\n");
        for d in &self.documents {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                d.doc_id,
                format_number(d.feature_sum),
                d.grade.as_deref().unwrap_or(""),
                format_number(d.score),
                format_number(d.raw_score),
                d.digression,
                format_number(d.theme_distance)
            )
            .unwrap();
        }
        out
    }
}
