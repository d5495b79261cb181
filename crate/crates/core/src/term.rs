//! Lattice-group terms over variables `x1..xd`.
//!
//! Grammar (ASCII, `v` is join and `^` is meet):
//!
//! ```text
//! expr := join
//! join := meet { "v" meet }
//! meet := sum { "^" sum }
//! sum  := prod { ("+" | "-") prod }
//! prod := [ int "*" ] atom
//! atom := rational | "x" int | "abs(" expr ")" | "-" atom | "(" expr ")"
//! ```

use std::fmt;

use crate::error::ParseError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term<S> {
    Const(S),
    /// One-based variable index.
    Var(usize),
    Neg(Box<Term<S>>),
    Add(Box<Term<S>>, Box<Term<S>>),
    Sub(Box<Term<S>>, Box<Term<S>>),
    ScalarMul(i64, Box<Term<S>>),
    Join(Box<Term<S>>, Box<Term<S>>),
    Meet(Box<Term<S>>, Box<Term<S>>),
    Abs(Box<Term<S>>),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject non-integer constants.
    pub strict_integer: bool,
}

impl<S: Scalar> Term<S> {
    pub fn constant(c: S) -> Self {
        Term::Const(c)
    }

    pub fn int(n: i64) -> Self {
        Term::Const(S::from_int(n))
    }

    pub fn var(index: usize) -> Self {
        Term::Var(index)
    }

    pub fn zero() -> Self {
        Term::Const(S::zero())
    }

    pub fn one() -> Self {
        Term::Const(S::one())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        Term::Neg(Box::new(self))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        Term::Add(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Self) -> Self {
        Term::Sub(Box::new(self), Box::new(other))
    }

    pub fn scale(self, n: i64) -> Self {
        Term::ScalarMul(n, Box::new(self))
    }

    pub fn join(self, other: Self) -> Self {
        Term::Join(Box::new(self), Box::new(other))
    }

    pub fn meet(self, other: Self) -> Self {
        Term::Meet(Box::new(self), Box::new(other))
    }

    pub fn abs(self) -> Self {
        Term::Abs(Box::new(self))
    }

    /// `t v 0`
    pub fn positive_part(self) -> Self {
        self.join(Term::zero())
    }

    /// `(-t) v 0`
    pub fn negative_part(self) -> Self {
        self.neg().join(Term::zero())
    }

    /// Largest variable index occurring in the term, 0 if none.
    pub fn max_var(&self) -> usize {
        match self {
            Term::Const(_) => 0,
            Term::Var(i) => *i,
            Term::Neg(t) | Term::ScalarMul(_, t) | Term::Abs(t) => t.max_var(),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Join(a, b) | Term::Meet(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) => 0,
            Term::Neg(t) | Term::ScalarMul(_, t) | Term::Abs(t) => 1 + t.depth(),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Join(a, b) | Term::Meet(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Direct pointwise evaluation. `point[i - 1]` is the value of `xi`.
    ///
    /// Panics if a variable index exceeds the point's length.
    pub fn eval(&self, point: &[S]) -> S {
        match self {
            Term::Const(c) => c.clone(),
            Term::Var(i) => point[*i - 1].clone(),
            Term::Neg(t) => -t.eval(point),
            Term::Add(a, b) => a.eval(point) + b.eval(point),
            Term::Sub(a, b) => a.eval(point) - b.eval(point),
            Term::ScalarMul(n, t) => S::from_int(*n) * t.eval(point),
            Term::Join(a, b) => a.eval(point).max(b.eval(point)),
            Term::Meet(a, b) => a.eval(point).min(b.eval(point)),
            Term::Abs(t) => t.eval(point).abs(),
        }
    }

    /// Rewrites `abs(t)` as `(t v 0) + (-t v 0)` everywhere.
    pub fn eliminate_abs(&self) -> Self {
        match self {
            Term::Const(_) | Term::Var(_) => self.clone(),
            Term::Neg(t) => t.eliminate_abs().neg(),
            Term::ScalarMul(n, t) => t.eliminate_abs().scale(*n),
            Term::Abs(t) => {
                let inner = t.eliminate_abs();
                inner.clone().positive_part().add(inner.negative_part())
            }
            Term::Add(a, b) => a.eliminate_abs().add(b.eliminate_abs()),
            Term::Sub(a, b) => a.eliminate_abs().sub(b.eliminate_abs()),
            Term::Join(a, b) => a.eliminate_abs().join(b.eliminate_abs()),
            Term::Meet(a, b) => a.eliminate_abs().meet(b.eliminate_abs()),
        }
    }

    /// Syntactic normal form: the shape the parser produces from printed
    /// output. Negative constants become `Neg(Const)` and negative scalar
    /// multipliers are pulled out as `Neg(ScalarMul)`.
    pub fn normalize(&self) -> Self {
        match self {
            Term::Const(c) if c.is_negative() => Term::Const(-c.clone()).neg(),
            Term::Const(_) | Term::Var(_) => self.clone(),
            Term::Neg(t) => t.normalize().neg(),
            Term::ScalarMul(n, t) if *n < 0 => match n.checked_neg() {
                Some(m) => t.normalize().scale(m).neg(),
                None => t.normalize().scale(*n),
            },
            Term::ScalarMul(n, t) => t.normalize().scale(*n),
            Term::Abs(t) => t.normalize().abs(),
            Term::Add(a, b) => a.normalize().add(b.normalize()),
            Term::Sub(a, b) => a.normalize().sub(b.normalize()),
            Term::Join(a, b) => a.normalize().join(b.normalize()),
            Term::Meet(a, b) => a.normalize().meet(b.normalize()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Join(..) => 1,
            Term::Meet(..) => 2,
            Term::Add(..) | Term::Sub(..) => 3,
            Term::ScalarMul(n, _) if *n < 0 => 5,
            Term::ScalarMul(..) => 4,
            Term::Neg(..) => 5,
            Term::Const(c) if c.is_negative() => 5,
            Term::Const(_) | Term::Var(_) | Term::Abs(_) => 6,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let parens = self.precedence() < min_prec;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Term::Const(c) if c.is_negative() => write!(f, "-{}", -c.clone())?,
            Term::Const(c) => write!(f, "{c}")?,
            Term::Var(i) => write!(f, "x{i}")?,
            Term::Neg(t) => {
                f.write_str("-")?;
                t.write_at(f, 5)?;
            }
            Term::ScalarMul(n, t) if *n < 0 => {
                // not expressible in the grammar; print as a negation
                f.write_str("-(")?;
                write!(f, "{}*", n.unsigned_abs())?;
                t.write_at(f, 5)?;
                f.write_str(")")?;
            }
            Term::ScalarMul(n, t) => {
                write!(f, "{n}*")?;
                t.write_at(f, 5)?;
            }
            Term::Abs(t) => {
                f.write_str("abs(")?;
                t.write_at(f, 0)?;
                f.write_str(")")?;
            }
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(if matches!(self, Term::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 4)?;
            }
            Term::Meet(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" ^ ")?;
                b.write_at(f, 3)?;
            }
            Term::Join(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" v ")?;
                b.write_at(f, 2)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Display for Term<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

pub fn parse_term<S: Scalar>(text: &str) -> Result<Term<S>, ParseError> {
    parse_term_with(text, ParseOptions::default())
}

pub fn parse_term_with<S: Scalar>(text: &str, options: ParseOptions) -> Result<Term<S>, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        options,
        _marker: std::marker::PhantomData,
    };
    let term = parser.join()?;
    match parser.peek() {
        None => Ok(term),
        Some(tok) => Err(ParseError {
            offset: tok.offset,
            message: format!("unexpected {}", tok.kind.describe()),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    /// Digits, optionally `/digits`.
    Number { text: String, integral: bool },
    Var(String),
    Join,
    Meet,
    Plus,
    Minus,
    Star,
    Abs,
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number { text, .. } => format!("number '{text}'"),
            TokenKind::Var(d) => format!("variable 'x{d}'"),
            TokenKind::Join => "'v'".into(),
            TokenKind::Meet => "'^'".into(),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Abs => "'abs'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let digits_from = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let mut j = digits_from(i);
                let mut integral = true;
                if j + 1 < bytes.len() && bytes[j] == b'/' && bytes[j + 1].is_ascii_digit() {
                    j = digits_from(j + 1);
                    integral = false;
                }
                i = j;
                TokenKind::Number {
                    text: text[start..j].to_string(),
                    integral,
                }
            }
            b'x' => {
                let j = digits_from(i + 1);
                if j == i + 1 {
                    return Err(ParseError {
                        offset: start,
                        message: "expected variable index after 'x'".into(),
                    });
                }
                i = j;
                TokenKind::Var(text[start + 1..j].to_string())
            }
            b'a' if text[i..].starts_with("abs") => {
                i += 3;
                TokenKind::Abs
            }
            b'v' => {
                i += 1;
                TokenKind::Join
            }
            b'^' => {
                i += 1;
                TokenKind::Meet
            }
            b'+' => {
                i += 1;
                TokenKind::Plus
            }
            b'-' => {
                i += 1;
                TokenKind::Minus
            }
            b'*' => {
                i += 1;
                TokenKind::Star
            }
            b'(' => {
                i += 1;
                TokenKind::LParen
            }
            b')' => {
                i += 1;
                TokenKind::RParen
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        };
        tokens.push(Token { kind, offset: start });
    }
    Ok(tokens)
}

struct Parser<S> {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    options: ParseOptions,
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar> Parser<S> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        if self.peek_kind() == Some(&kind) {
            self.pos += 1;
            Ok(())
        } else {
            match self.peek() {
                Some(tok) => self.error(format!(
                    "expected {}, found {}",
                    kind.describe(),
                    tok.kind.describe()
                )),
                None => self.error(format!("expected {}, found end of input", kind.describe())),
            }
        }
    }

    fn join(&mut self) -> Result<Term<S>, ParseError> {
        let mut lhs = self.meet()?;
        while self.peek_kind() == Some(&TokenKind::Join) {
            self.pos += 1;
            lhs = lhs.join(self.meet()?);
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<Term<S>, ParseError> {
        let mut lhs = self.sum()?;
        while self.peek_kind() == Some(&TokenKind::Meet) {
            self.pos += 1;
            lhs = lhs.meet(self.sum()?);
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Term<S>, ParseError> {
        let mut lhs = self.prod()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Plus) => {
                    self.pos += 1;
                    lhs = lhs.add(self.prod()?);
                }
                Some(TokenKind::Minus) => {
                    self.pos += 1;
                    lhs = lhs.sub(self.prod()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn prod(&mut self) -> Result<Term<S>, ParseError> {
        if let Some(TokenKind::Number { text, integral: true }) = self.peek_kind() {
            if matches!(
                self.tokens.get(self.pos + 1).map(|t| &t.kind),
                Some(TokenKind::Star)
            ) {
                let n: i64 = match text.parse() {
                    Ok(n) => n,
                    Err(_) => return self.error("scalar multiplier out of range"),
                };
                self.pos += 2;
                return Ok(self.atom()?.scale(n));
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term<S>, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        match tok.kind {
            TokenKind::Number { text, integral } => {
                if self.options.strict_integer && !integral {
                    return self.error("non-integer constant in strict-integer mode");
                }
                let value = match S::parse_decimal(&text) {
                    Some(v) => v,
                    None => return self.error(format!("invalid number '{text}'")),
                };
                self.pos += 1;
                Ok(Term::Const(value))
            }
            TokenKind::Var(digits) => {
                let index: usize = match digits.parse() {
                    Ok(i) => i,
                    Err(_) => return self.error("variable index out of range"),
                };
                if index == 0 {
                    return self.error("variable index must be at least 1");
                }
                self.pos += 1;
                Ok(Term::Var(index))
            }
            TokenKind::Abs => {
                self.pos += 1;
                self.expect(TokenKind::LParen)?;
                let inner = self.join()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner.abs())
            }
            TokenKind::Minus => {
                self.pos += 1;
                Ok(self.atom()?.neg())
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.join()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            other => self.error(format!("unexpected {}", other.describe())),
        }
    }
}
