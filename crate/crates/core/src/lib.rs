//! Japanese composition analysis and scoring.
//!
//! The crate is organized bottom-up:
//!
//! - [`automata`]: an event-driven automaton with a key-value context store,
//!   before/after-shift hooks and longest-match search with backtracking.
//! - [`tokenize`]: sentence splitting, a bundled-lexicon longest-match
//!   tokenizer and a TSV ingest format for external morphological analyzers.
//! - [`grammar`]: a small pattern language compiled to automata, the graded
//!   (N5..N1) pattern registry, document matching, reports and hints.
//! - [`features`]: word, sentence, grammar and bag-of-words features and the
//!   corpus feature matrix.
//! - [`scoring`]: normalization, Gaussian/CDF score mapping, k-means grading,
//!   principal-component reduction and digression detection.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the CLI uses.

pub mod automata;
pub mod features;
pub mod grammar;
pub mod scalar;
pub mod scoring;
pub mod token;
pub mod tokenize;

pub use scalar::Scalar;
pub use token::{ConjForm, Document, Origin, PosMajor, ScriptClass, Token};

pub type FeatureMatrix64 = features::FeatureMatrix<f64>;
pub type FeatureMatrix32 = features::FeatureMatrix<f32>;
pub type NormalizedMatrix64 = scoring::NormalizedMatrix<f64>;
pub type GaussianModel64 = scoring::GaussianModel<f64>;
pub type ScoreRange64 = scoring::ScoreRange<f64>;
pub type KMeansModel64 = scoring::KMeansModel<f64>;
pub type ScoreParams64 = scoring::ScoreParams<f64>;
pub type ScoreReport64 = scoring::ScoreReport<f64>;
pub type ScoreReport32 = scoring::ScoreReport<f32>;
