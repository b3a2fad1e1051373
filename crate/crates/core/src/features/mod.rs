//! Per-document features and the corpus feature matrix.
//!
//! Symbol tokens are excluded from every count. The scalar block has the
//! fixed column order given by [`SCALAR_COLUMNS`]; the bag-of-words block
//! counts lemmas against a sorted [`BowDictionary`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{grammar_feature_report, match_document, GrammarError, GrammarReport, Level, Registry};
use crate::token::{is_cjk_ideograph, Document, Origin, PosMajor};
use crate::tokenize::Lexicon;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("document `{0}` has no sentences")]
    EmptyDocument(String),
    #[error("cannot build a corpus-local dictionary from an empty corpus")]
    EmptyCorpus,
    #[error("need at least 2 documents, got {0}")]
    TooFewDocuments(usize),
    #[error("document `{doc}`: {source}")]
    Grammar { doc: String, source: GrammarError },
}

/// Scalar block column names, in order.
pub const SCALAR_COLUMNS: [&str; 27] = [
    "verbs",
    "nouns",
    "conjunctions",
    "particles",
    "adjectives",
    "adverbs",
    "auxiliary_verbs",
    "total_words",
    "unique_words",
    "native_words",
    "sino_words",
    "loan_words",
    "kanji_chars",
    "sentence_count",
    "avg_sentence_length",
    "n5_total",
    "n4_total",
    "n3_total",
    "n2_total",
    "n1_total",
    "n5_unique",
    "n4_unique",
    "n3_unique",
    "n2_unique",
    "n1_unique",
    "grammar_total",
    "grammar_unique",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFeatures {
    pub verbs: usize,
    pub nouns: usize,
    pub conjunctions: usize,
    pub particles: usize,
    pub adjectives: usize,
    pub adverbs: usize,
    pub auxiliary_verbs: usize,
    pub total_words: usize,
    /// Distinct lemmas.
    pub unique_words: usize,
    pub native: usize,
    pub sino: usize,
    pub loan: usize,
    pub kanji_chars: usize,
}

pub fn word_features(d: &Document, lex: &Lexicon) -> WordFeatures {
    let mut w = WordFeatures::default();
    let mut lemmas = HashSet::new();
    for t in d.tokens() {
        w.kanji_chars += t.surface.chars().filter(|&c| is_cjk_ideograph(c)).count();
        if t.is_symbol() {
            continue;
        }
        match t.pos_major {
            PosMajor::Verb => w.verbs += 1,
            PosMajor::Noun => w.nouns += 1,
            PosMajor::Conjunction => w.conjunctions += 1,
            PosMajor::Particle => w.particles += 1,
            PosMajor::Adjective => w.adjectives += 1,
            PosMajor::Adverb => w.adverbs += 1,
            PosMajor::AuxiliaryVerb => w.auxiliary_verbs += 1,
            _ => {}
        }
        match lex.origin_of(t) {
            Some(Origin::Native) => w.native += 1,
            Some(Origin::Sino) => w.sino += 1,
            Some(Origin::Loan) => w.loan += 1,
            None => {}
        }
        w.total_words += 1;
        lemmas.insert(t.lemma.as_str());
    }
    w.unique_words = lemmas.len();
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentenceFeatures {
    pub sentence_count: usize,
    /// Non-symbol tokens per sentence.
    pub avg_sentence_length: f64,
}

pub fn sentence_features(d: &Document) -> Result<SentenceFeatures, FeatureError> {
    let n = d.sentences.len();
    if n == 0 {
        return Err(FeatureError::EmptyDocument(d.id.clone()));
    }
    let words = d.tokens().filter(|t| !t.is_symbol()).count();
    Ok(SentenceFeatures { sentence_count: n, avg_sentence_length: words as f64 / n as f64 })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCounts {
    pub total_count: usize,
    pub unique_patterns: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarFeatures {
    /// Indexed by [`Level::index`], N5 first.
    pub levels: [LevelCounts; 5],
    pub grand_total: usize,
    pub grand_unique: usize,
}

impl GrammarFeatures {
    pub fn level(&self, level: Level) -> LevelCounts {
        self.levels[level.index()]
    }
}

pub fn grammar_features(report: &GrammarReport) -> GrammarFeatures {
    let mut g = GrammarFeatures::default();
    for level in Level::ALL {
        let entries = report.level(level);
        let c = LevelCounts {
            total_count: entries.iter().map(|e| e.count).sum(),
            unique_patterns: entries.iter().map(|e| e.unique).sum(),
        };
        g.levels[level.index()] = c;
        g.grand_total += c.total_count;
        g.grand_unique += c.unique_patterns;
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictionarySource {
    CorpusLocal,
    Global,
}

pub enum DictionaryMode<'a> {
    CorpusLocal,
    /// Every non-symbol lemma of the given lexicon.
    Global(&'a Lexicon),
}

/// Sorted, deduplicated lemma list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BowDictionary {
    pub source: DictionarySource,
    pub words: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl BowDictionary {
    pub fn new(source: DictionarySource, words: impl IntoIterator<Item = String>) -> BowDictionary {
        let words: Vec<String> = words.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        BowDictionary { source, words, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, lemma: &str) -> Option<usize> {
        self.index.get(lemma).copied()
    }
}

pub fn build_dictionary(corpus: &[Document], mode: DictionaryMode<'_>) -> Result<BowDictionary, FeatureError> {
    match mode {
        DictionaryMode::CorpusLocal => {
            if corpus.is_empty() {
                return Err(FeatureError::EmptyCorpus);
            }
            let words = corpus.iter().flat_map(|d| d.tokens()).filter(|t| !t.is_symbol()).map(|t| t.lemma.clone());
            Ok(BowDictionary::new(DictionarySource::CorpusLocal, words))
        }
        DictionaryMode::Global(lex) => {
            let words = lex.entries().filter(|e| e.pos_major != PosMajor::Symbol).map(|e| e.lemma.clone());
            Ok(BowDictionary::new(DictionarySource::Global, words))
        }
    }
}

/// Lemma counts aligned to `dict.words`.
pub fn bow(d: &Document, dict: &BowDictionary) -> Vec<usize> {
    let mut counts = vec![0; dict.len()];
    for t in d.tokens().filter(|t| !t.is_symbol()) {
        if let Some(i) = dict.index_of(&t.lemma) {
            counts[i] += 1;
        }
    }
    counts
}

/// All features of one document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentFeatures {
    pub word: WordFeatures,
    pub sentence: SentenceFeatures,
    pub grammar: GrammarFeatures,
    pub report: GrammarReport,
}

impl DocumentFeatures {
    /// Values in [`SCALAR_COLUMNS`] order.
    pub fn scalar_row(&self) -> [f64; 27] {
        let w = &self.word;
        let g = &self.grammar;
        let mut row = [0.0; 27];
        let counts = [
            w.verbs,
            w.nouns,
            w.conjunctions,
            w.particles,
            w.adjectives,
            w.adverbs,
            w.auxiliary_verbs,
            w.total_words,
            w.unique_words,
            w.native,
            w.sino,
            w.loan,
            w.kanji_chars,
            self.sentence.sentence_count,
        ];
        for (dst, c) in row.iter_mut().zip(counts) {
            *dst = c as f64;
        }
        row[14] = self.sentence.avg_sentence_length;
        for level in Level::ALL {
            row[15 + level.index()] = g.level(level).total_count as f64;
            row[20 + level.index()] = g.level(level).unique_patterns as f64;
        }
        row[25] = g.grand_total as f64;
        row[26] = g.grand_unique as f64;
        row
    }
}

pub fn extract(d: &Document, lex: &Lexicon, registry: &Registry) -> Result<DocumentFeatures, FeatureError> {
    let sentence = sentence_features(d)?;
    let grammar_err = |source| FeatureError::Grammar { doc: d.id.clone(), source };
    let matches = match_document(registry, d).map_err(grammar_err)?;
    let report = grammar_feature_report(&matches, registry).map_err(grammar_err)?;
    Ok(DocumentFeatures { word: word_features(d, lex), sentence, grammar: grammar_features(&report), report })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<T> {
    pub doc_ids: Vec<String>,
    /// docs × [`SCALAR_COLUMNS`].
    pub scalar: Array2<T>,
    /// docs × dictionary size.
    pub bow: Array2<T>,
    pub dictionary: BowDictionary,
}

/// Extracts every document's features, in corpus order.
pub fn assemble_matrix<T: Scalar>(
    corpus: &[Document],
    lex: &Lexicon,
    registry: &Registry,
    mode: DictionaryMode<'_>,
) -> Result<FeatureMatrix<T>, FeatureError> {
    if corpus.len() < 2 {
        return Err(FeatureError::TooFewDocuments(corpus.len()));
    }
    let dictionary = build_dictionary(corpus, mode)?;
    let n = corpus.len();
    let mut scalar = Array2::zeros((n, SCALAR_COLUMNS.len()));
    let mut bows = Array2::zeros((n, dictionary.len()));
    for (i, d) in corpus.iter().enumerate() {
        let f = extract(d, lex, registry)?;
        for (j, v) in f.scalar_row().into_iter().enumerate() {
            scalar[[i, j]] = T::lit(v);
        }
        for (j, c) in bow(d, &dictionary).into_iter().enumerate() {
            bows[[i, j]] = T::from_count(c);
        }
    }
    Ok(FeatureMatrix { doc_ids: corpus.iter().map(|d| d.id.clone()).collect(), scalar, bow: bows, dictionary })
}

/// Decimal text for a number: integers without a fraction, other values
/// rounded to 6 places with trailing zeros removed.
pub fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowSidecar {
    pub dictionary: BowDictionary,
    /// doc id → (word index → count), zero counts omitted.
    pub bow: BTreeMap<String, BTreeMap<usize, u64>>,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    /// `doc_id` followed by the scalar columns.
    pub fn csv_header() -> String {
        std::iter::once("doc_id").chain(SCALAR_COLUMNS).collect::<Vec<_>>().join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = Self::csv_header();
        out.push('\n');
        for (i, id) in self.doc_ids.iter().enumerate() {
            out.push_str(&csv_field(id));
            for v in self.scalar.row(i) {
                write!(out, ",{}", format_number(v.as_f64())).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn sidecar(&self) -> BowSidecar {
        let bow = self
            .doc_ids
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let row = self
                    .bow
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != T::zero())
                    .map(|(j, v)| (j, v.as_f64() as u64))
                    .collect();
                (id.clone(), row)
            })
            .collect();
        BowSidecar { dictionary: self.dictionary.clone(), bow }
    }

    /// Rebuilds a matrix from its CSV and sidecar exports.
    pub fn from_exports(csv: &str, sidecar: &BowSidecar) -> Result<FeatureMatrix<T>, String> {
        let mut lines = csv.lines();
        if lines.next() != Some(Self::csv_header().as_str()) {
            return Err("feature CSV header does not match the scalar column contract".into());
        }
        let mut doc_ids = Vec::new();
        let mut values = Vec::new();
        for (n, line) in lines.enumerate().filter(|(_, l)| !l.is_empty()) {
            let (id, rest) = split_csv_id(line).ok_or_else(|| format!("row {}: malformed doc id", n + 2))?;
            let row: Vec<&str> = rest.split(',').collect();
            if row.len() != SCALAR_COLUMNS.len() {
                return Err(format!("row {}: expected {} values, found {}", n + 2, SCALAR_COLUMNS.len(), row.len()));
            }
            for v in row {
                let x: f64 = v.parse().map_err(|_| format!("row {}: bad number `{v}`", n + 2))?;
                values.push(T::lit(x));
            }
            doc_ids.push(id);
        }
        let scalar = Array2::from_shape_vec((doc_ids.len(), SCALAR_COLUMNS.len()), values).map_err(|e| e.to_string())?;
        let dictionary = BowDictionary::new(sidecar.dictionary.source, sidecar.dictionary.words.iter().cloned());
        if dictionary.words != sidecar.dictionary.words {
            return Err("sidecar dictionary is not sorted and unique".into());
        }
        let mut bow = Array2::zeros((doc_ids.len(), dictionary.len()));
        for (i, id) in doc_ids.iter().enumerate() {
            for (&j, &c) in sidecar.bow.get(id).into_iter().flatten() {
                if j >= dictionary.len() {
                    return Err(format!("document `{id}`: word index {j} out of range"));
                }
                bow[[i, j]] = T::from_count(c as usize);
            }
        }
        Ok(FeatureMatrix { doc_ids, scalar, bow, dictionary })
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn split_csv_id(line: &str) -> Option<(String, &str)> {
    if let Some(rest) = line.strip_prefix('"') {
        let mut id = String::new();
        let mut chars = rest.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c == '"' {
                if chars.peek().map(|&(_, c)| c) == Some('"') {
                    chars.next();
                    id.push('"');
                } else {
                    return rest[i + 1..].strip_prefix(',').map(|r| (id, r));
                }
            } else {
                id.push(c);
            }
        }
        None
    } else {
        line.split_once(',').map(|(a, b)| (a.to_string(), b))
    }
}
