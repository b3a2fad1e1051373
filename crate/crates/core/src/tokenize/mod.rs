//! Sentence splitting and tokenization.
//!
//! The reference tokenizer is greedy longest-match against a [`Lexicon`].
//! Real deployments feed output of an external morphological analyzer
//! through [`ingest_external`] instead.

mod lexicon;
mod tsv;

pub use lexicon::{LexEntry, Lexicon, LEXICON_FORMAT_VERSION};
pub use tsv::{ingest_external, to_tsv, IngestError};

use thiserror::Error;

use crate::token::{ConjForm, Document, PosMajor, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenizeError {
    #[error("lexicon: {0}")]
    Lexicon(String),
    #[error("{0}")]
    Io(String),
}

const TERMINATORS: [char; 3] = ['。', '！', '？'];

/// Splits text after `。！？` and at newlines.
///
/// Terminators stay with their sentence; surrounding whitespace is trimmed
/// and empty fragments are dropped.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut flush = |cur: &mut String| {
        let t = cur.trim();
        if !t.is_empty() {
            out.push(t.to_string());
        }
        cur.clear();
    };
    for c in text.chars() {
        if c == '\n' {
            flush(&mut cur);
            continue;
        }
        cur.push(c);
        if TERMINATORS.contains(&c) {
            flush(&mut cur);
        }
    }
    flush(&mut cur);
    out
}

/// Greedy left-to-right longest match against the lexicon.
///
/// Characters not covered by any entry become single-character tokens:
/// `symbol` for punctuation and whitespace, `other` otherwise.
pub fn tokenize(sentence: &str, lex: &Lexicon) -> Vec<Token> {
    let bounds: Vec<usize> = sentence.char_indices().map(|(i, _)| i).chain([sentence.len()]).collect();
    let n = bounds.len() - 1;
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < n {
        let longest = lex.max_chars().min(n - i);
        let hit = (1..=longest).rev().find_map(|len| lex.token_for(&sentence[bounds[i]..bounds[i + len]]).map(|t| (len, t)));
        match hit {
            Some((len, tok)) => {
                tokens.push(tok);
                i += len;
            }
            None => {
                let s = &sentence[bounds[i]..bounds[i + 1]];
                let c = s.chars().next().unwrap();
                let pos = if c.is_alphanumeric() { PosMajor::Other } else { PosMajor::Symbol };
                tokens.push(Token::new(s, s, pos, "", ConjForm::None));
                i += 1;
            }
        }
    }
    tokens
}

/// Splits and tokenizes raw text into a document.
pub fn tokenize_document(id: impl Into<String>, text: &str, lex: &Lexicon) -> Document {
    let sentences = split_sentences(text)
        .iter()
        .map(|s| tokenize(s, lex))
        .filter(|t| !t.is_empty())
        .collect();
    Document { id: id.into(), sentences, raw_text: text.to_string() }
}
