use std::fmt;

use serde::{Deserialize, Serialize};

use crate::token::{ConjForm, PosMajor, Token};

/// Transition policy of an edge: which single token may be consumed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "arg", rename_all = "snake_case", deny_unknown_fields)]
pub enum Predicate {
    /// Exact surface string.
    #[serde(rename = "surface")]
    LiteralSurface(String),
    Lemma(String),
    #[serde(rename = "pos")]
    PosMajor(PosMajor),
    PosSub(String),
    #[serde(rename = "form")]
    ConjForm(ConjForm),
    Any,
}

impl Predicate {
    pub fn accepts(&self, token: &Token) -> bool {
        match self {
            Predicate::LiteralSurface(s) => token.surface == *s,
            Predicate::Lemma(l) => token.lemma == *l,
            Predicate::PosMajor(p) => token.pos_major == *p,
            Predicate::PosSub(s) => token.pos_sub == *s,
            Predicate::ConjForm(f) => token.conj_form == *f,
            Predicate::Any => true,
        }
    }

    /// Human-readable description used in hints.
    pub fn describe(&self) -> String {
        match self {
            Predicate::LiteralSurface(s) => s.clone(),
            Predicate::Lemma(l) => format!("a form of {l}"),
            Predicate::PosMajor(p) => format!("any {}", p.as_str().replace('_', " ")),
            Predicate::PosSub(s) => format!("any {s}"),
            Predicate::ConjForm(f) => format!("{} form", f.as_str()),
            Predicate::Any => "any token".to_string(),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::LiteralSurface(s) => write!(f, "lit({s:?})"),
            Predicate::Lemma(l) => write!(f, "lemma({l:?})"),
            Predicate::PosMajor(p) => write!(f, "pos({p})"),
            Predicate::PosSub(s) => write!(f, "pos_sub({s:?})"),
            Predicate::ConjForm(c) => write!(f, "form({c})"),
            Predicate::Any => f.write_str("any"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let p = Predicate::LiteralSurface("が".into());
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"kind":"surface","arg":"が"}"#);
        assert_eq!(serde_json::to_string(&Predicate::Any).unwrap(), r#"{"kind":"any"}"#);
        let f: Predicate = serde_json::from_str(r#"{"kind":"form","arg":"volitional"}"#).unwrap();
        assert_eq!(f, Predicate::ConjForm(ConjForm::Volitional));
        assert!(serde_json::from_str::<Predicate>(r#"{"kind":"any","extra":1}"#).is_err());
        assert!(serde_json::from_str::<Predicate>(r#"{"kind":"regex","arg":"x"}"#).is_err());
    }

    #[test]
    fn any_accepts_everything() {
        let t = Token::simple("。", PosMajor::Symbol);
        assert!(Predicate::Any.accepts(&t));
        assert!(Predicate::PosMajor(PosMajor::Symbol).accepts(&t));
        assert!(!Predicate::LiteralSurface("、".into()).accepts(&t));
    }
}
