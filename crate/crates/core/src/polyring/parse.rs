//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { "*" unary } ;
//! unary   = ("+" | "-") unary | power ;
//! power   = atom [ "^" exponent ] ;
//! exponent= integer [ "^" exponent ] ;        (* right associative *)
//! atom    = literal | ident | "(" expr ")" ;
//! literal = integer [ "/" integer ] ;
//! ident   = ("q" | "p") integer ;              (* index in 1..=n *)
//! ```
//!
//! `^` binds tightest. There is no division outside rational literals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Poly, Rational, Var};

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub value: Option<Poly>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn into_result(self) -> Result<Poly, ParseError> {
        match self.value {
            Some(v) => Ok(v),
            None => Err(ParseError {
                diagnostics: self.diagnostics,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.diagnostics.iter().map(|d| d.to_string()).collect();
        write!(f, "parse error {}", msgs.join("; "))
    }
}

/// Parses `text` as a polynomial in `q1..qn, p1..pn`.
pub fn parse_poly(text: &str, n: usize) -> ParseResult {
    let outcome = Lexer::new(text)
        .tokens()
        .and_then(|toks| Parser { toks, pos: 0, n }.parse_all());
    match outcome {
        Ok(v) => ParseResult {
            value: Some(v),
            diagnostics: Vec::new(),
        },
        Err(d) => ParseResult {
            value: None,
            diagnostics: vec![d],
        },
    }
}

impl Poly {
    /// Parses `text` with `n` variable pairs.
    pub fn parse(text: &str, n: usize) -> Result<Poly, ParseError> {
        parse_poly(text, n).into_result()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Int(BigInt),
    Ident(Var),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(r) => format!("literal {r}"),
        Tok::Int(i) => format!("literal {i}"),
        Tok::Ident(v) => format!("identifier {v}"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    i: usize,
}

fn diag(position: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        position,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            i: 0,
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.i;
        while self.i < self.bytes.len() && self.bytes[self.i].is_ascii_digit() {
            self.i += 1;
        }
        &self.src[start..self.i]
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            while self.i < self.bytes.len() && self.bytes[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
            let at = self.i;
            let Some(&b) = self.bytes.get(self.i) else {
                out.push((at, Tok::End));
                return Ok(out);
            };
            let tok = match b {
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'^' => Tok::Caret,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'0'..=b'9' => {
                    let num: BigInt = self.digits().parse().expect("ascii digits");
                    if self.bytes.get(self.i) == Some(&b'/') {
                        self.i += 1;
                        let den = self.digits();
                        if den.is_empty() {
                            return Err(diag(at, "malformed literal: missing denominator"));
                        }
                        let den: BigInt = den.parse().expect("ascii digits");
                        if den.is_zero() {
                            return Err(diag(at, "malformed literal: zero denominator"));
                        }
                        if self.bytes.get(self.i) == Some(&b'/') {
                            return Err(diag(at, "malformed literal: repeated '/'"));
                        }
                        out.push((at, Tok::Num(Rational::new(num, den))));
                    } else {
                        out.push((at, Tok::Int(num)));
                    }
                    if matches!(self.bytes.get(self.i), Some(c) if c.is_ascii_alphabetic() || *c == b'.')
                    {
                        return Err(diag(at, "malformed literal"));
                    }
                    continue;
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while self.i < self.bytes.len()
                        && (self.bytes[self.i].is_ascii_alphanumeric()
                            || self.bytes[self.i] == b'_')
                    {
                        self.i += 1;
                    }
                    let word = &self.src[at..self.i];
                    out.push((at, Tok::Ident(ident(word, at)?)));
                    continue;
                }
                b'/' => {
                    return Err(diag(
                        at,
                        "division is only allowed inside rational literals",
                    ))
                }
                _ => {
                    let ch = self.src[at..].chars().next().unwrap();
                    return Err(diag(at, format!("unexpected character {ch:?}")));
                }
            };
            self.i += 1;
            out.push((at, tok));
        }
    }
}

fn ident(word: &str, at: usize) -> Result<Var, Diagnostic> {
    let unknown = || diag(at, format!("unknown identifier {word:?}"));
    let (head, idx) = word.split_at(1);
    if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
        return Err(unknown());
    }
    let k: usize = idx
        .parse()
        .map_err(|_| diag(at, format!("index out of range in {word:?}")))?;
    if k == 0 {
        return Err(diag(at, format!("index out of range in {word:?}")));
    }
    match head {
        "q" => Ok(Var::Q(k - 1)),
        "p" => Ok(Var::P(k - 1)),
        _ => Err(unknown()),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn at(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn parse_all(mut self) -> Result<Poly, Diagnostic> {
        if self.n == 0 {
            return Err(diag(0, "number of variable pairs must be positive"));
        }
        let v = self.expr()?;
        match self.peek() {
            Tok::End => Ok(v),
            Tok::RParen => Err(diag(self.at(), "unbalanced parentheses: unexpected ')'")),
            t => Err(diag(self.at(), format!("unexpected {}", describe(t)))),
        }
    }

    fn expr(&mut self) -> Result<Poly, Diagnostic> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, Diagnostic> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, Diagnostic> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, Diagnostic> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        Ok(base.pow(e))
    }

    fn exponent(&mut self) -> Result<u32, Diagnostic> {
        let at = self.at();
        let base = match self.bump() {
            Tok::Int(i) => i,
            t => {
                return Err(diag(
                    at,
                    format!(
                        "exponent must be a nonnegative integer, found {}",
                        describe(&t)
                    ),
                ))
            }
        };
        let too_big = || diag(at, format!("exponent exceeds {MAX_EXPONENT}"));
        let base = base
            .to_u32()
            .filter(|&b| b <= MAX_EXPONENT)
            .ok_or_else(too_big)?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        base.checked_pow(e)
            .filter(|&v| v <= MAX_EXPONENT)
            .ok_or_else(too_big)
    }

    fn atom(&mut self) -> Result<Poly, Diagnostic> {
        let at = self.at();
        match self.bump() {
            Tok::Int(i) => Ok(Poly::constant(self.n, Rational::from_integer(i))),
            Tok::Num(r) => Ok(Poly::constant(self.n, r)),
            Tok::Ident(v) => {
                let (Var::Q(k) | Var::P(k)) = v;
                if k >= self.n {
                    return Err(diag(
                        at,
                        format!("index out of range: {v} with n = {}", self.n),
                    ));
                }
                Ok(Poly::var(self.n, v))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(diag(at, "unbalanced parentheses: '(' is never closed"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::RParen => Err(diag(at, "unbalanced parentheses: unexpected ')'")),
            t => Err(diag(
                at,
                format!("expected an operand, found {}", describe(&t)),
            )),
        }
    }
}
