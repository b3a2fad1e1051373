use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::TokenizeError;
use crate::token::{ConjForm, Origin, PosMajor, Token};

pub const LEXICON_FORMAT_VERSION: u32 = 1;

const BUNDLED_LEXICON: &str = include_str!("../../data/lexicon.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexEntry {
    pub surface: String,
    pub lemma: String,
    pub pos_major: PosMajor,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub pos_sub: String,
    #[serde(default, skip_serializing_if = "is_none_form")]
    pub conj_form: ConjForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Origin>,
}

fn is_none_form(f: &ConjForm) -> bool {
    *f == ConjForm::None
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    version: u32,
    entries: Vec<LexEntry>,
}

/// Surface-keyed dictionary used by the reference tokenizer.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, LexEntry>,
    max_chars: usize,
}

impl Lexicon {
    /// The lexicon shipped with the crate.
    pub fn bundled() -> Lexicon {
        Lexicon::from_json(BUNDLED_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED_LEXICON
    }

    pub fn load(path: &Path) -> Result<Lexicon, TokenizeError> {
        let text = std::fs::read_to_string(path).map_err(|e| TokenizeError::Io(format!("{}: {e}", path.display())))?;
        Lexicon::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Lexicon, TokenizeError> {
        let file: LexiconFile = serde_json::from_str(text).map_err(|e| TokenizeError::Lexicon(e.to_string()))?;
        if file.version != LEXICON_FORMAT_VERSION {
            return Err(TokenizeError::Lexicon(format!("unsupported lexicon version {}", file.version)));
        }
        Lexicon::from_entries(file.entries)
    }

    pub fn from_entries(entries: impl IntoIterator<Item = LexEntry>) -> Result<Lexicon, TokenizeError> {
        let mut lex = Lexicon::default();
        for mut e in entries {
            if e.surface.is_empty() {
                return Err(TokenizeError::Lexicon("entry with empty surface".into()));
            }
            if e.lemma.is_empty() {
                e.lemma = e.surface.clone();
            }
            lex.max_chars = lex.max_chars.max(e.surface.chars().count());
            if lex.entries.contains_key(&e.surface) {
                return Err(TokenizeError::Lexicon(format!("duplicate surface `{}`", e.surface)));
            }
            lex.entries.insert(e.surface.clone(), e);
        }
        Ok(lex)
    }

    pub fn get(&self, surface: &str) -> Option<&LexEntry> {
        self.entries.get(surface)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Length in chars of the longest surface.
    pub fn max_chars(&self) -> usize {
        self.max_chars
    }

    /// Entries in surface order.
    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    /// Lexicon origin for a surface, falling back to the script heuristic.
    pub fn origin_of(&self, token: &Token) -> Option<Origin> {
        self.entries
            .get(&token.surface)
            .and_then(|e| e.origin)
            .or_else(|| Origin::heuristic(token.script_class))
    }

    pub(crate) fn token_for(&self, surface: &str) -> Option<Token> {
        self.entries
            .get(surface)
            .map(|e| Token::new(e.surface.clone(), e.lemma.clone(), e.pos_major, e.pos_sub.clone(), e.conj_form))
    }
}
