//! Token TSV: one token per line as
//! `surface<TAB>lemma<TAB>pos_major<TAB>pos_sub<TAB>conj_form<TAB>script_class`.
//! A blank line ends a sentence and `#doc <id>` starts a new document.

use std::io::BufRead;

use thiserror::Error;

use crate::token::{ConjForm, Document, PosMajor, ScriptClass, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("line {line}: expected 6 tab-separated columns, found {found}")]
    BadColumnCount { line: usize, found: usize },
    #[error("line {line}: unknown {field} `{value}`")]
    UnknownEnum { line: usize, field: &'static str, value: String },
    #[error("line {line}: script class {declared} does not match surface `{surface}`")]
    ScriptMismatch { line: usize, surface: String, declared: ScriptClass },
    #[error("line {line}: empty surface")]
    EmptySurface { line: usize },
    #[error("line {line}: {message}")]
    Io { line: usize, message: String },
    #[error("token `{0:?}` cannot be written as TSV")]
    Unencodable(String),
}

/// Parses a token TSV stream.
///
/// Tokens before the first `#doc` line belong to a document named
/// `default_id`.
pub fn ingest_external<R: BufRead>(reader: R, default_id: &str) -> Result<Vec<Document>, IngestError> {
    let mut docs: Vec<Document> = Vec::new();
    let mut sentence: Vec<Token> = Vec::new();

    fn close_sentence(docs: &mut Vec<Document>, sentence: &mut Vec<Token>, default_id: &str) {
        if sentence.is_empty() {
            return;
        }
        if docs.is_empty() {
            docs.push(Document { id: default_id.to_string(), sentences: Vec::new(), raw_text: String::new() });
        }
        let doc = docs.last_mut().unwrap();
        for t in sentence.iter() {
            doc.raw_text.push_str(&t.surface);
        }
        doc.sentences.push(std::mem::take(sentence));
    }

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| IngestError::Io { line: lineno, message: e.to_string() })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            close_sentence(&mut docs, &mut sentence, default_id);
            continue;
        }
        if let Some(id) = line.strip_prefix("#doc") {
            if id.is_empty() || id.starts_with(' ') {
                close_sentence(&mut docs, &mut sentence, default_id);
                docs.push(Document { id: id.trim().to_string(), sentences: Vec::new(), raw_text: String::new() });
                continue;
            }
        }
        sentence.push(parse_line(line, lineno)?);
    }
    close_sentence(&mut docs, &mut sentence, default_id);
    Ok(docs)
}

fn parse_line(line: &str, lineno: usize) -> Result<Token, IngestError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 6 {
        return Err(IngestError::BadColumnCount { line: lineno, found: cols.len() });
    }
    let unknown = |field: &'static str, value: &str| IngestError::UnknownEnum { line: lineno, field, value: value.to_string() };
    let surface = cols[0];
    if surface.is_empty() {
        return Err(IngestError::EmptySurface { line: lineno });
    }
    let pos: PosMajor = cols[2].parse().map_err(|_| unknown("pos_major", cols[2]))?;
    let form: ConjForm = cols[4].parse().map_err(|_| unknown("conj_form", cols[4]))?;
    let script: ScriptClass = cols[5].parse().map_err(|_| unknown("script_class", cols[5]))?;
    let token = Token::new(surface, cols[1], pos, cols[3], form);
    if token.script_class != script {
        return Err(IngestError::ScriptMismatch { line: lineno, surface: surface.to_string(), declared: script });
    }
    Ok(token)
}

/// Writes documents in the token TSV format (LF line endings).
pub fn to_tsv(docs: &[Document]) -> Result<String, IngestError> {
    let mut out = String::new();
    for doc in docs {
        out.push_str("#doc ");
        out.push_str(&doc.id);
        out.push('\n');
        for sentence in &doc.sentences {
            for t in sentence {
                for field in [&t.surface, &t.lemma, &t.pos_sub] {
                    if field.contains(['\t', '\n', '\r']) {
                        return Err(IngestError::Unencodable(t.surface.clone()));
                    }
                }
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    t.surface, t.lemma, t.pos_major, t.pos_sub, t.conj_form, t.script_class
                ));
            }
            out.push('\n');
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenize::{tokenize_document, Lexicon};

    #[test]
    fn two_sentences() {
        let tsv = "彼\t彼\tnoun\t\tnone\tkanji_bearing\nが\tが\tparticle\t\tnone\thiragana\n\n来よう\t来る\tverb\t\tvolitional\tkanji_bearing\n";
        let docs = ingest_external(tsv.as_bytes(), "d").unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].id, "d");
        assert_eq!(docs[0].sentences.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 1]);
        assert_eq!(docs[0].sentences[1][0].conj_form, ConjForm::Volitional);
    }

    #[test]
    fn column_count_and_enum_errors() {
        let bad = "a\tb\tnoun\t\tnone\n";
        assert_eq!(ingest_external(bad.as_bytes(), "d").unwrap_err(), IngestError::BadColumnCount { line: 1, found: 5 });
        let bad = "#doc x\na\ta\tnoun\t\tnone\tlatin_digit_other\nb\tb\tnoun-ish\t\tnone\tlatin_digit_other\n";
        assert_eq!(
            ingest_external(bad.as_bytes(), "d").unwrap_err(),
            IngestError::UnknownEnum { line: 3, field: "pos_major", value: "noun-ish".into() }
        );
        let bad = "a\ta\tnoun\t\tnone\thiragana\n";
        assert!(matches!(ingest_external(bad.as_bytes(), "d"), Err(IngestError::ScriptMismatch { line: 1, .. })));
    }

    #[test]
    fn multiple_documents() {
        let tsv = "#doc one\nx\tx\tother\t\tnone\tlatin_digit_other\n#doc two\ny\ty\tother\t\tnone\tlatin_digit_other\n\n\nz\tz\tother\t\tnone\tlatin_digit_other";
        let docs = ingest_external(tsv.as_bytes(), "d").unwrap();
        assert_eq!(docs.iter().map(|d| d.id.as_str()).collect::<Vec<_>>(), vec!["one", "two"]);
        assert_eq!(docs[1].sentences.len(), 2);
    }

    #[test]
    fn export_round_trip() {
        let lex = Lexicon::bundled();
        let doc = tokenize_document("sample", "彼が来ようが来まいが、パーティーは時間通りにやる。私は学生です。", &lex);
        let tsv = to_tsv(std::slice::from_ref(&doc)).unwrap();
        let back = ingest_external(tsv.as_bytes(), "x").unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].id, "sample");
        assert_eq!(back[0].sentences, doc.sentences);
    }
}
