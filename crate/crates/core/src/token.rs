//! Morphological units shared by the tokenizer, the automata and the
//! feature extractors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Major part-of-speech class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosMajor {
    Verb,
    Noun,
    Adjective,
    Adverb,
    Particle,
    AuxiliaryVerb,
    Conjunction,
    Quantifier,
    Symbol,
    Other,
}

impl PosMajor {
    pub const ALL: [PosMajor; 10] = [
        PosMajor::Verb,
        PosMajor::Noun,
        PosMajor::Adjective,
        PosMajor::Adverb,
        PosMajor::Particle,
        PosMajor::AuxiliaryVerb,
        PosMajor::Conjunction,
        PosMajor::Quantifier,
        PosMajor::Symbol,
        PosMajor::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosMajor::Verb => "verb",
            PosMajor::Noun => "noun",
            PosMajor::Adjective => "adjective",
            PosMajor::Adverb => "adverb",
            PosMajor::Particle => "particle",
            PosMajor::AuxiliaryVerb => "auxiliary_verb",
            PosMajor::Conjunction => "conjunction",
            PosMajor::Quantifier => "quantifier",
            PosMajor::Symbol => "symbol",
            PosMajor::Other => "other",
        }
    }
}

/// Conjugation form of an inflecting word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjForm {
    #[default]
    None,
    Dictionary,
    Volitional,
    NegativeStem,
    Ta,
    Te,
    MasuStem,
    Other,
}

impl ConjForm {
    pub const ALL: [ConjForm; 8] = [
        ConjForm::None,
        ConjForm::Dictionary,
        ConjForm::Volitional,
        ConjForm::NegativeStem,
        ConjForm::Ta,
        ConjForm::Te,
        ConjForm::MasuStem,
        ConjForm::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConjForm::None => "none",
            ConjForm::Dictionary => "dictionary",
            ConjForm::Volitional => "volitional",
            ConjForm::NegativeStem => "negative-stem",
            ConjForm::Ta => "ta",
            ConjForm::Te => "te",
            ConjForm::MasuStem => "masu-stem",
            ConjForm::Other => "other",
        }
    }
}

/// Writing-system class of a surface string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScriptClass {
    KanjiBearing,
    Hiragana,
    Katakana,
    LatinDigitOther,
}

impl ScriptClass {
    pub const ALL: [ScriptClass; 4] = [
        ScriptClass::KanjiBearing,
        ScriptClass::Hiragana,
        ScriptClass::Katakana,
        ScriptClass::LatinDigitOther,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScriptClass::KanjiBearing => "kanji_bearing",
            ScriptClass::Hiragana => "hiragana",
            ScriptClass::Katakana => "katakana",
            ScriptClass::LatinDigitOther => "latin_digit_other",
        }
    }

    /// Classifies a surface string by its code points.
    ///
    /// Any CJK ideograph makes the string kanji-bearing. Otherwise, if it
    /// contains kana, it is katakana when every kana is katakana and
    /// hiragana when at least one is hiragana.
    pub fn of(surface: &str) -> ScriptClass {
        let mut saw_hiragana = false;
        let mut saw_katakana = false;
        for c in surface.chars() {
            if is_cjk_ideograph(c) {
                return ScriptClass::KanjiBearing;
            }
            if is_hiragana(c) {
                saw_hiragana = true;
            } else if is_katakana(c) {
                saw_katakana = true;
            }
        }
        if saw_hiragana {
            ScriptClass::Hiragana
        } else if saw_katakana {
            ScriptClass::Katakana
        } else {
            ScriptClass::LatinDigitOther
        }
    }
}

/// Word origin: native Japanese, Sino-Japanese or loanword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Native,
    Sino,
    Loan,
}

impl Origin {
    /// Fallback when the lexicon has no origin for a word.
    pub fn heuristic(script: ScriptClass) -> Option<Origin> {
        match script {
            ScriptClass::Katakana => Some(Origin::Loan),
            ScriptClass::KanjiBearing => Some(Origin::Sino),
            ScriptClass::Hiragana => Some(Origin::Native),
            ScriptClass::LatinDigitOther => None,
        }
    }
}

pub fn is_cjk_ideograph(c: char) -> bool {
    matches!(c as u32,
        0x3400..=0x4DBF
        | 0x4E00..=0x9FFF
        | 0xF900..=0xFAFF
        | 0x20000..=0x2FA1F)
}

pub fn is_hiragana(c: char) -> bool {
    matches!(c as u32, 0x3041..=0x309F)
}

pub fn is_katakana(c: char) -> bool {
    // includes the prolonged sound mark and half-width katakana
    matches!(c as u32, 0x30A0..=0x30FF | 0x31F0..=0x31FF | 0xFF66..=0xFF9F)
}

/// A morphological unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub pos_major: PosMajor,
    #[serde(default)]
    pub pos_sub: String,
    #[serde(default)]
    pub conj_form: ConjForm,
    pub script_class: ScriptClass,
}

impl Token {
    /// Builds a token, deriving `script_class` from the surface.
    pub fn new(
        surface: impl Into<String>,
        lemma: impl Into<String>,
        pos_major: PosMajor,
        pos_sub: impl Into<String>,
        conj_form: ConjForm,
    ) -> Token {
        let surface = surface.into();
        let mut lemma = lemma.into();
        if lemma.is_empty() {
            lemma = surface.clone();
        }
        let script_class = ScriptClass::of(&surface);
        Token { surface, lemma, pos_major, pos_sub: pos_sub.into(), conj_form, script_class }
    }

    /// A token whose lemma is its surface.
    pub fn simple(surface: impl Into<String>, pos_major: PosMajor) -> Token {
        let surface = surface.into();
        Token::new(surface.clone(), surface, pos_major, "", ConjForm::None)
    }

    pub fn is_symbol(&self) -> bool {
        self.pos_major == PosMajor::Symbol
    }
}

/// A tokenized document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Vec<Token>>,
    pub raw_text: String,
}

impl Document {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownName(pub String);

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown name `{}`", self.0)
    }
}

macro_rules! impl_from_str {
    ($ty:ty) => {
        impl FromStr for $ty {
            type Err = UnknownName;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str() == s)
                    .ok_or_else(|| UnknownName(s.to_string()))
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

impl_from_str!(PosMajor);
impl_from_str!(ConjForm);
impl_from_str!(ScriptClass);
