//! Pattern language.
//!
//! ```text
//! alt   := seq ('|' seq)*
//! seq   := post+
//! post  := atom '?'?
//! atom  := lit("…") | lemma("…") | pos(NAME) | pos_sub("…") | form(NAME)
//!        | any | any* | any*(max=N) | '(' alt ')' | @NAME
//! ```
//!
//! `any` consumes exactly one token; `any*(max=N)` consumes 0..=N tokens.
//! `@NAME` splices a named sub-pattern.

use std::collections::HashMap;

use thiserror::Error;

use crate::automata::Predicate;
use crate::token::{ConjForm, PosMajor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("syntax error at char {position}: {message}")]
    DslSyntax { position: usize, message: String },
    #[error("unknown sub-pattern @{0}")]
    UnknownSubpattern(String),
    #[error("sub-pattern @{0} refers to itself")]
    RecursiveSubpattern(String),
    #[error("any* at char {position} has no bound and no default bound is configured")]
    UnboundedAnyStar { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom(Predicate),
    Seq(Vec<Expr>),
    Alt(Vec<Expr>),
    Opt(Box<Expr>),
    /// 0..=max arbitrary tokens; `None` takes the configured default.
    AnyStar { max: Option<usize>, position: usize },
    Ref { name: String, position: usize },
}

/// Sub-patterns available to every pattern.
pub fn builtin_subpatterns() -> HashMap<String, String> {
    [
        ("verb_dict", "form(dictionary)"),
        ("verb_stem", "form(masu-stem)"),
        ("verb_neg", "form(negative-stem)"),
        ("verb_te", "form(te)"),
        ("verb_ta", "form(ta)"),
        ("verb_vol", "form(volitional)"),
        ("noun", "pos(noun)"),
        ("copula", "lit(\"だ\") | lit(\"です\")"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

pub fn parse(src: &str) -> Result<Expr, CompileError> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty pattern"));
    }
    let e = p.alt()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> CompileError {
        CompileError::DslSyntax { position: self.pos, message: message.into() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CompileError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn alt(&mut self) -> Result<Expr, CompileError> {
        let mut branches = vec![self.seq()?];
        while self.eat('|') {
            branches.push(self.seq()?);
        }
        Ok(if branches.len() == 1 { branches.pop().unwrap() } else { Expr::Alt(branches) })
    }

    fn seq(&mut self) -> Result<Expr, CompileError> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('|') | Some(')') => break,
                _ => items.push(self.postfix()?),
            }
        }
        match items.len() {
            0 => Err(self.error("expected a pattern element")),
            1 => Ok(items.pop().unwrap()),
            _ => Ok(Expr::Seq(items)),
        }
    }

    fn postfix(&mut self) -> Result<Expr, CompileError> {
        let atom = self.atom()?;
        if self.eat('?') {
            Ok(Expr::Opt(Box::new(atom)))
        } else {
            Ok(atom)
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn string(&mut self) -> Result<String, CompileError> {
        self.skip_ws();
        if self.peek() != Some('"') {
            return Err(self.error("expected a quoted string"));
        }
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated string")),
                Some('"') => {
                    self.pos += 1;
                    break;
                }
                Some('\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c @ ('"' | '\\')) => out.push(c),
                        _ => return Err(self.error("bad escape")),
                    }
                    self.pos += 1;
                }
                Some(c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
        if out.is_empty() {
            return Err(self.error("empty string"));
        }
        Ok(out)
    }

    fn number(&mut self) -> Result<usize, CompileError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error("expected a number"))
    }

    fn atom(&mut self) -> Result<Expr, CompileError> {
        self.skip_ws();
        let position = self.pos;
        if self.eat('(') {
            let e = self.alt()?;
            self.expect(')')?;
            return Ok(e);
        }
        if self.eat('@') {
            let name = self.ident();
            if name.is_empty() {
                return Err(self.error("expected a sub-pattern name"));
            }
            return Ok(Expr::Ref { name, position });
        }
        let word = self.ident();
        let pred = match word.as_str() {
            "lit" => Predicate::LiteralSurface(self.arg_string()?),
            "lemma" => Predicate::Lemma(self.arg_string()?),
            "pos_sub" => Predicate::PosSub(self.arg_string()?),
            "pos" => {
                let name = self.arg_ident()?;
                Predicate::PosMajor(name.parse::<PosMajor>().map_err(|_| self.error(format!("unknown part of speech `{name}`")))?)
            }
            "form" => {
                let name = self.arg_ident()?;
                Predicate::ConjForm(name.parse::<ConjForm>().map_err(|_| self.error(format!("unknown conjugation form `{name}`")))?)
            }
            "any" => {
                self.skip_ws();
                if self.peek() == Some('*') {
                    self.pos += 1;
                    let max = if self.eat('(') {
                        if self.ident() != "max" {
                            return Err(self.error("expected `max=`"));
                        }
                        self.expect('=')?;
                        let n = self.number()?;
                        if n == 0 {
                            return Err(self.error("any* bound must be at least 1"));
                        }
                        self.expect(')')?;
                        Some(n)
                    } else {
                        None
                    };
                    return Ok(Expr::AnyStar { max, position });
                }
                Predicate::Any
            }
            "" => return Err(self.error("expected a pattern element")),
            other => {
                self.pos = position;
                return Err(self.error(format!("unknown element `{other}`")));
            }
        };
        Ok(Expr::Atom(pred))
    }

    fn arg_string(&mut self) -> Result<String, CompileError> {
        self.expect('(')?;
        let s = self.string()?;
        self.expect(')')?;
        Ok(s)
    }

    fn arg_ident(&mut self) -> Result<String, CompileError> {
        self.expect('(')?;
        let s = self.ident();
        self.expect(')')?;
        Ok(s)
    }
}
