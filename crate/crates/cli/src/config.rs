//! Run configuration: a JSON file, overridden field by field by CLI flags.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sakubun_core::automata::DEFAULT_STEP_BUDGET;
use sakubun_core::grammar::{CompileOptions, DEFAULT_ANY_STAR_MAX};
use sakubun_core::scoring::{default_grade_ranges, default_labels, PenaltyMode, ScoreMode, ScoreParams, ScoreRange};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

fn bad(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DictionaryChoice {
    #[default]
    #[value(name = "corpus_local", alias = "corpus-local")]
    CorpusLocal,
    Global,
}

/// Every field optional; used both for the config file and for flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    /// Scoring mode: sum or cluster.
    #[arg(long, global = true)]
    pub mode: Option<ScoreMode>,
    /// Sum mode score range.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"])]
    pub range: Option<Vec<f64>>,
    /// Number of grades in cluster mode.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// k-means++ seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory for `score`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Port for `serve`.
    #[arg(long, global = true)]
    pub port: Option<u16>,
    /// Grade labels, best first, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub labels: Option<Vec<String>>,
    /// Grade score ranges aligned with labels, as `lo:hi,lo:hi,…`.
    #[arg(long = "grade_ranges", alias = "grade-ranges", global = true, value_delimiter = ',', value_parser = parse_pair)]
    pub grade_ranges: Option<Vec<(f64, f64)>>,
    /// Outlier threshold in standard deviations above the mean distance.
    #[arg(long = "outlier_sigmas", alias = "outlier-sigmas", global = true)]
    pub outlier_sigmas: Option<f64>,
    /// Score multiplier for digressing documents.
    #[arg(long = "penalty_factor", alias = "penalty-factor", global = true)]
    pub penalty_factor: Option<f64>,
    /// scale or demote.
    #[arg(long = "penalty_mode", alias = "penalty-mode", global = true, value_parser = parse_penalty_mode)]
    pub penalty_mode: Option<PenaltyMode>,
    /// Bound for a bare `any*` in pattern bodies.
    #[arg(long = "any_star_max", alias = "any-star-max", global = true)]
    pub any_star_max: Option<usize>,
    /// Engine steps allowed per match attempt.
    #[arg(long = "step_budget", alias = "step-budget", global = true)]
    pub step_budget: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub dictionary: Option<DictionaryChoice>,
    /// Lexicon JSON file; the bundled lexicon when absent.
    #[arg(long, global = true)]
    pub lexicon: Option<PathBuf>,
    /// Directory of pattern JSON files; the bundled registry when absent.
    #[arg(long, global = true)]
    pub patterns: Option<PathBuf>,
    /// Registry cache file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Include the bag-of-words block in the feature sum.
    #[arg(long = "sum_include_bow", alias = "sum-include-bow", global = true)]
    pub sum_include_bow: Option<bool>,
    /// Allowed CORS origin for `serve`; `*` allows any.
    #[arg(long = "cors_origin", alias = "cors-origin", global = true)]
    pub cors_origin: Option<String>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad number `{v}`"));
    Ok((num(lo)?, num(hi)?))
}

fn parse_penalty_mode(s: &str) -> Result<PenaltyMode, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown penalty mode `{s}` (expected scale or demote)"))
}

impl PartialConfig {
    /// Parses a config object, checking each field on its own so that
    /// errors name the field.
    pub fn from_json(text: &str) -> Result<PartialConfig, ConfigError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| bad("<file>", e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| bad("<file>", "expected a JSON object"))?;
        for (key, value) in obj {
            if !CONFIG_FIELDS.contains(&key.as_str()) {
                return Err(bad(key.as_str(), "unknown field"));
            }
            let single = serde_json::Value::Object([(key.clone(), value.clone())].into_iter().collect());
            serde_json::from_value::<PartialConfig>(single).map_err(|e| bad(key.as_str(), e.to_string()))?;
        }
        serde_json::from_value(v).map_err(|e| bad("<file>", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<PartialConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad("config", format!("{}: {e}", path.display())))?;
        PartialConfig::from_json(&text)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            mode: over.mode.or(self.mode),
            range: over.range.or(self.range),
            k: over.k.or(self.k),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            port: over.port.or(self.port),
            labels: over.labels.or(self.labels),
            grade_ranges: over.grade_ranges.or(self.grade_ranges),
            outlier_sigmas: over.outlier_sigmas.or(self.outlier_sigmas),
            penalty_factor: over.penalty_factor.or(self.penalty_factor),
            penalty_mode: over.penalty_mode.or(self.penalty_mode),
            any_star_max: over.any_star_max.or(self.any_star_max),
            step_budget: over.step_budget.or(self.step_budget),
            dictionary: over.dictionary.or(self.dictionary),
            lexicon: over.lexicon.or(self.lexicon),
            patterns: over.patterns.or(self.patterns),
            cache: over.cache.or(self.cache),
            sum_include_bow: over.sum_include_bow.or(self.sum_include_bow),
            cors_origin: over.cors_origin.or(self.cors_origin),
        }
    }
}

pub const CONFIG_FIELDS: [&str; 19] = [
    "mode",
    "range",
    "k",
    "seed",
    "out",
    "port",
    "labels",
    "grade_ranges",
    "outlier_sigmas",
    "penalty_factor",
    "penalty_mode",
    "any_star_max",
    "step_budget",
    "dictionary",
    "lexicon",
    "patterns",
    "cache",
    "sum_include_bow",
    "cors_origin",
];

pub const DEFAULT_PORT: u16 = 8080;

/// A validated configuration with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub mode: ScoreMode,
    pub range: (f64, f64),
    pub k: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub port: u16,
    pub labels: Vec<String>,
    pub grade_ranges: Vec<(f64, f64)>,
    pub outlier_sigmas: f64,
    pub penalty_factor: f64,
    pub penalty_mode: PenaltyMode,
    pub any_star_max: usize,
    pub step_budget: usize,
    pub dictionary: DictionaryChoice,
    pub lexicon: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub sum_include_bow: bool,
    pub cors_origin: String,
}

impl Default for Config {
    fn default() -> Self {
        Config::resolve(PartialConfig::default()).expect("defaults are valid")
    }
}

fn check_range(field: &'static str, (lo, hi): (f64, f64)) -> Result<(), ConfigError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(bad(field, format!("range [{lo}, {hi}] must be finite with lo < hi")));
    }
    Ok(())
}

impl Config {
    /// Fills defaults and validates; errors name the offending field.
    pub fn resolve(p: PartialConfig) -> Result<Config, ConfigError> {
        let defaults = ScoreParams::<f64>::default();
        let range = match p.range.as_deref() {
            None => (defaults.range.lo, defaults.range.hi),
            Some(&[lo, hi]) => (lo, hi),
            Some(v) => return Err(bad("range", format!("expected [lo, hi], got {} values", v.len()))),
        };
        check_range("range", range)?;
        let k = p.k.unwrap_or(defaults.k);
        if k == 0 {
            return Err(bad("k", "must be at least 1"));
        }
        let labels = p.labels.unwrap_or_else(|| default_labels(k));
        if labels.len() != k {
            return Err(bad("labels", format!("{} labels for k = {k}", labels.len())));
        }
        if let Some(l) = labels.iter().find(|l| l.is_empty()) {
            return Err(bad("labels", format!("empty label `{l}`")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(bad("labels", format!("duplicate label `{l}`")));
            }
        }
        let grade_ranges =
            p.grade_ranges.unwrap_or_else(|| default_grade_ranges::<f64>(k).into_iter().map(|r| (r.lo, r.hi)).collect());
        if grade_ranges.len() != labels.len() {
            return Err(bad("grade_ranges", format!("{} ranges for {} labels", grade_ranges.len(), labels.len())));
        }
        for &r in &grade_ranges {
            check_range("grade_ranges", r)?;
        }
        let outlier_sigmas = p.outlier_sigmas.unwrap_or(defaults.outlier_sigmas);
        if !(outlier_sigmas.is_finite() && outlier_sigmas >= 0.0) {
            return Err(bad("outlier_sigmas", format!("{outlier_sigmas} must be a finite number ≥ 0")));
        }
        let penalty_factor = p.penalty_factor.unwrap_or(defaults.penalty_factor);
        if !(0.0..=1.0).contains(&penalty_factor) {
            return Err(bad("penalty_factor", format!("{penalty_factor} is outside [0, 1]")));
        }
        let mode = p.mode.unwrap_or(defaults.mode);
        let penalty_mode = p.penalty_mode.unwrap_or(defaults.penalty_mode);
        if penalty_mode == PenaltyMode::Demote && mode != ScoreMode::Cluster {
            return Err(bad("penalty_mode", "demote needs cluster mode"));
        }
        let any_star_max = p.any_star_max.unwrap_or(DEFAULT_ANY_STAR_MAX);
        if any_star_max == 0 {
            return Err(bad("any_star_max", "must be at least 1"));
        }
        let step_budget = p.step_budget.unwrap_or(DEFAULT_STEP_BUDGET);
        if step_budget == 0 {
            return Err(bad("step_budget", "must be at least 1"));
        }
        let cors_origin = p.cors_origin.unwrap_or_else(|| "*".to_string());
        if cors_origin != "*" && axum::http::HeaderValue::from_str(&cors_origin).is_err() {
            return Err(bad("cors_origin", format!("`{cors_origin}` is not a valid origin")));
        }
        Ok(Config {
            mode,
            range,
            k,
            seed: p.seed.unwrap_or(defaults.seed),
            out: p.out.unwrap_or_else(|| PathBuf::from(".")),
            port: p.port.unwrap_or(DEFAULT_PORT),
            labels,
            grade_ranges,
            outlier_sigmas,
            penalty_factor,
            penalty_mode,
            any_star_max,
            step_budget,
            dictionary: p.dictionary.unwrap_or_default(),
            lexicon: p.lexicon,
            patterns: p.patterns,
            cache: p.cache,
            sum_include_bow: p.sum_include_bow.unwrap_or(defaults.sum_include_bow),
            cors_origin,
        })
    }

    /// Reads `file` (if any) and applies `flags` on top.
    pub fn load(file: Option<&Path>, flags: PartialConfig) -> Result<Config, ConfigError> {
        let base = match file {
            Some(p) => PartialConfig::load(p)?,
            None => PartialConfig::default(),
        };
        Config::resolve(base.merge(flags))
    }

    pub fn score_params(&self) -> ScoreParams<f64> {
        ScoreParams {
            mode: self.mode,
            range: ScoreRange { lo: self.range.0, hi: self.range.1 },
            k: self.k,
            seed: self.seed,
            labels: self.labels.clone(),
            grade_ranges: self.grade_ranges.iter().map(|&(lo, hi)| ScoreRange { lo, hi }).collect(),
            sum_include_bow: self.sum_include_bow,
            outlier_sigmas: self.outlier_sigmas,
            penalty_factor: self.penalty_factor,
            penalty_mode: self.penalty_mode,
            ..ScoreParams::default()
        }
    }

    pub fn compile_options(&self) -> CompileOptions {
        CompileOptions { any_star_default: Some(self.any_star_max), step_budget: self.step_budget, ..CompileOptions::default() }
    }
}
