//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | power
//! power  := atom ("^" factor)?
//! atom   := number | ident | ident "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! parses as `-(x^2)` and `2^3^2` as `2^(3^2)`. A unary minus applied
//! directly to a constant folds into a negative constant, which keeps
//! print/parse round trips structurally exact.

use super::{BinOp, Expr, Func};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source where the problem was detected.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    InvalidNumber(String),
    UnknownIdentifier(String),
    /// Variable name outside `x1..xN` for the declared dimension.
    VariableOutOfRange { name: String, dimension: usize },
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number literal `{s}`"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier `{s}`"),
            ParseErrorKind::VariableOutOfRange { name, dimension } => write!(
                f,
                "variable `{name}` is out of range for dimension {dimension} (valid: x1..x{dimension})"
            ),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("{n}"),
            Tok::Ident(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent part only counts when digits follow it; a bare
                // trailing `e` is left to be lexed as an identifier.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    position: start,
                    kind: ParseErrorKind::InvalidNumber(text.to_string()),
                })?;
                toks.push((start, Tok::Num(value)));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                toks.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    kind: ParseErrorKind::UnexpectedChar(src[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    dimension: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        let position = self.here();
        match self.advance() {
            Some(t) if *t == want => Ok(()),
            Some(t) => Err(ParseError {
                position,
                kind: ParseErrorKind::UnexpectedToken {
                    found: t.describe(),
                    expected,
                },
            }),
            None => Err(ParseError {
                position,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            }),
        }
    }

    fn expr(&mut self) -> Result<Arc<Expr>, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Arc<Expr>, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Arc<Expr>, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.advance();
            let inner = self.factor()?;
            return Ok(match *inner {
                Expr::Constant(c) => Expr::constant(-c),
                _ => Expr::neg(inner),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Arc<Expr>, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.advance();
            let exponent = self.factor()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Arc<Expr>, ParseError> {
        let position = self.here();
        match self.advance() {
            Some(Tok::Num(n)) => Ok(Expr::constant(*n)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::call(func, arg));
                }
                match name.as_str() {
                    "pi" => return Ok(Expr::constant(std::f64::consts::PI)),
                    "e" => return Ok(Expr::constant(std::f64::consts::E)),
                    _ => {}
                }
                self.variable(&name, position)
            }
            Some(t) => Err(ParseError {
                position,
                kind: ParseErrorKind::UnexpectedToken {
                    found: t.describe(),
                    expected: "a number, variable, function call, or `(`",
                },
            }),
            None => Err(ParseError {
                position,
                kind: ParseErrorKind::UnexpectedEnd {
                    expected: "a number, variable, function call, or `(`",
                },
            }),
        }
    }

    fn variable(&mut self, name: &str, position: usize) -> Result<Arc<Expr>, ParseError> {
        if name == "x" {
            if self.dimension == 1 {
                return Ok(Expr::variable(0));
            }
            return Err(ParseError {
                position,
                kind: ParseErrorKind::VariableOutOfRange {
                    name: name.to_string(),
                    dimension: self.dimension,
                },
            });
        }
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let index: usize = rest.parse().map_err(|_| ParseError {
                    position,
                    kind: ParseErrorKind::VariableOutOfRange {
                        name: name.to_string(),
                        dimension: self.dimension,
                    },
                })?;
                if index >= 1 && index <= self.dimension {
                    return Ok(Expr::variable(index - 1));
                }
                return Err(ParseError {
                    position,
                    kind: ParseErrorKind::VariableOutOfRange {
                        name: name.to_string(),
                        dimension: self.dimension,
                    },
                });
            }
        }
        Err(ParseError {
            position,
            kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
        })
    }
}

/// Parse `src` as a function of `dimension` variables.
pub fn parse(src: &str, dimension: usize) -> Result<Arc<Expr>, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: src.len(),
        dimension,
    };
    let ast = p.expr()?;
    if p.pos < toks.len() {
        let (position, t) = &toks[p.pos];
        return Err(ParseError {
            position: *position,
            kind: ParseErrorKind::UnexpectedToken {
                found: t.describe(),
                expected: "end of input or an operator",
            },
        });
    }
    Ok(ast)
}
