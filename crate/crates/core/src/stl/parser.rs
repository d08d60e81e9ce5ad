//! Recursive-descent parser for the ASCII STL syntax:
//!
//! ```text
//! formula  := or ( "->" formula )?
//! or       := and ( "or" and )*
//! and      := unary ( "and" unary )*
//! unary    := "not" unary
//!           | "always" "[" NUM "," NUM "]" unary
//!           | "eventually" "[" NUM "," NUM "]" unary
//!           | atom
//! atom     := NAME ( "<" | ">" ) NUM
//!           | "(" formula ")"
//! ```
//!
//! Implication is right-associative.

use std::fmt;

use thiserror::Error;

use super::formula::{Comparison, Formula, Interval};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at byte {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    InvalidNumber(String),
    BadInterval(f64, f64),
    UnknownOperator(String),
    Unsupported(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number `{s}`"),
            ParseErrorKind::BadInterval(a, b) => {
                write!(f, "invalid interval [{a}, {b}] (need 0 <= a <= b)")
            }
            ParseErrorKind::UnknownOperator(s) => write!(f, "unknown operator `{s}`"),
            ParseErrorKind::Unsupported(s) => write!(f, "operator `{s}` is not supported"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Lt,
    Gt,
    Arrow,
    /// Lexically valid but not part of the grammar (`<=`, `>=`, `==`, `!`, ...).
    Other(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Other(s) => f.write_str(s),
            Tok::Num(v) => write!(f, "{v}"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::LBracket => f.write_str("["),
            Tok::RBracket => f.write_str("]"),
            Tok::Comma => f.write_str(","),
            Tok::Lt => f.write_str("<"),
            Tok::Gt => f.write_str(">"),
            Tok::Arrow => f.write_str("->"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'[' => out.push((start, Tok::LBracket)),
            b']' => out.push((start, Tok::RBracket)),
            b',' => out.push((start, Tok::Comma)),
            b'<' | b'>' | b'=' | b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((start, Tok::Other(text[i..i + 2].to_string())));
                    i += 2;
                    continue;
                }
                out.push((
                    start,
                    match c {
                        b'<' => Tok::Lt,
                        b'>' => Tok::Gt,
                        _ => Tok::Other((c as char).to_string()),
                    },
                ));
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((start, Tok::Arrow));
                i += 2;
                continue;
            }
            b'-' | b'+' | b'.' | b'0'..=b'9' => {
                i += 1;
                while i < bytes.len() {
                    let d = bytes[i];
                    let exp_sign = (d == b'-' || d == b'+') && matches!(bytes[i - 1], b'e' | b'E');
                    if d.is_ascii_digit() || d == b'.' || d == b'e' || d == b'E' || exp_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let s = &text[start..i];
                let v: f64 = s.parse().map_err(|_| ParseError {
                    position: start,
                    kind: ParseErrorKind::InvalidNumber(s.to_string()),
                })?;
                if !v.is_finite() {
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::InvalidNumber(s.to_string()),
                    });
                }
                out.push((start, Tok::Num(v)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError {
                    position: start,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        }
        i += 1;
    }
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["not", "and", "or", "always", "eventually"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.offset(),
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd { expected }),
            Some(Tok::Ident(s)) if s == "until" => {
                self.err(ParseErrorKind::Unsupported(s.clone()))
            }
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) && expected == "operator" => {
                self.err(ParseErrorKind::UnknownOperator(s.clone()))
            }
            Some(Tok::Other(s)) => self.err(ParseErrorKind::UnknownOperator(s.clone())),
            Some(t) => self.err(ParseErrorKind::UnexpectedToken {
                found: t.to_string(),
                expected,
            }),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.unexpected("number")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.is_keyword("or") {
            self.pos += 1;
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.is_keyword("and") {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn interval(&mut self) -> Result<Interval, ParseError> {
        let at = self.offset();
        self.expect(Tok::LBracket, "`[`")?;
        let lo = self.number()?;
        self.expect(Tok::Comma, "`,`")?;
        let hi = self.number()?;
        self.expect(Tok::RBracket, "`]`")?;
        Interval::new(lo, hi).map_err(|_| ParseError {
            position: at,
            kind: ParseErrorKind::BadInterval(lo, hi),
        })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => match s.as_str() {
                "not" => {
                    self.pos += 1;
                    Ok(Formula::not(self.unary()?))
                }
                "always" => {
                    self.pos += 1;
                    let i = self.interval()?;
                    Ok(Formula::Globally(i, Box::new(self.unary()?)))
                }
                "eventually" => {
                    self.pos += 1;
                    let i = self.interval()?;
                    Ok(Formula::Eventually(i, Box::new(self.unary()?)))
                }
                "until" => Err(self.err(ParseErrorKind::Unsupported(s.clone()))),
                _ => {
                    // An identifier followed by `[` or `(` is an operator we do not know.
                    if matches!(self.peek_at(1), Some(Tok::LBracket) | Some(Tok::LParen)) {
                        return Err(self.err(ParseErrorKind::UnknownOperator(s.clone())));
                    }
                    self.atom()
                }
            },
            _ => self.atom(),
        }
    }

    fn predicate(&mut self) -> Result<Formula, ParseError> {
        let channel = match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.unexpected("channel name")),
        };
        self.pos += 1;
        let comparison = match self.peek() {
            Some(Tok::Lt) => Comparison::Less,
            Some(Tok::Gt) => Comparison::Greater,
            _ => return Err(self.unexpected("`<` or `>`")),
        };
        self.pos += 1;
        let threshold = self.number()?;
        Ok(Formula::predicate(channel, comparison, threshold))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => self.predicate(),
            _ => Err(self.unexpected("formula")),
        }
    }
}

/// Parses an STL formula from its ASCII text form.
pub fn parse_stl(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.peek().is_some() {
        return Err(p.unexpected("operator"));
    }
    Ok(f)
}
