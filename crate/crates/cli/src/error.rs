use thiserror::Error;

use sakubun_core::features::FeatureError;
use sakubun_core::grammar::{CacheError, GrammarError, RegistryError};
use sakubun_core::scoring::ScoreError;
use sakubun_core::tokenize::{IngestError, TokenizeError};

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("lexicon: {0}")]
    Lexicon(#[from] TokenizeError),
    #[error("{path}: {source}")]
    Ingest { path: String, source: IngestError },
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("registry cache: {0}")]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("report schema version {found}, expected {expected}")]
    SchemaMismatch { found: u64, expected: u32 },
    #[error("{path}: {message}")]
    Malformed { path: String, message: String },
    #[error("{} file(s) failed:\n{}", .0.len(), .0.join("\n"))]
    Corpus(Vec<String>),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, e: std::io::Error) -> CliError {
        CliError::Io { path: path.as_ref().display().to_string(), message: e.to_string() }
    }

    /// Short name of the failure, shown in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "InvalidConfig",
            CliError::Io { .. } => "Io",
            CliError::Lexicon(_) => "Lexicon",
            CliError::Ingest { .. } => "Ingest",
            CliError::Registry(_) => "Registry",
            CliError::Cache(CacheError::StaleCache { .. }) => "StaleCache",
            CliError::Cache(CacheError::VersionMismatch { .. }) => "VersionMismatch",
            CliError::Cache(_) => "Cache",
            CliError::Grammar(_) => "Grammar",
            CliError::Feature(FeatureError::EmptyDocument(_)) => "EmptyDocument",
            CliError::Feature(FeatureError::TooFewDocuments(_)) | CliError::Score(ScoreError::TooFewRows(_)) => {
                "TooFewRows"
            }
            CliError::Feature(_) => "Feature",
            CliError::Score(_) => "Score",
            CliError::SchemaMismatch { .. } => "SchemaMismatch",
            CliError::Malformed { .. } => "Malformed",
            CliError::Corpus(_) => "Corpus",
        }
    }
}
