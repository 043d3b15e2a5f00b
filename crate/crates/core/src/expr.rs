//! Tokenizer and recursive-descent parser shared by field-element and
//! polynomial text forms.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Juxtaposition (`2x`, `x y`) is rejected.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

/// Parsed expression tree. Positions are byte offsets into the source.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u64),
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    let at = self.offset();
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let k: u64 = n
                        .try_into()
                        .map_err(|_| syntax(at, "exponent out of range"))?;
                    if self.peek() == Some(&Tok::Caret) {
                        return Err(syntax(
                            self.offset(),
                            "chained `^` is ambiguous; add parentheses",
                        ));
                    }
                    Ok(Expr::Pow(Box::new(base), k))
                }
                _ => Err(syntax(at, "expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Ident(name, at))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(syntax(at, format!("unexpected token {t:?}"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        let msg = match p.peek() {
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen) => {
                "implicit multiplication is not allowed; use `*`".to_string()
            }
            Some(t) => format!("unexpected token {t:?}"),
            None => unreachable!(),
        };
        return Err(syntax(p.offset(), msg));
    }
    Ok(e)
}

/// Target algebra for evaluating an [`Expr`].
pub trait ExprAlgebra {
    type Val;
    fn int(&self, n: &BigInt) -> Result<Self::Val>;
    fn ident(&self, name: &str, pos: usize) -> Result<Self::Val>;
    fn add(&self, a: Self::Val, b: Self::Val) -> Result<Self::Val>;
    fn sub(&self, a: Self::Val, b: Self::Val) -> Result<Self::Val>;
    fn neg(&self, a: Self::Val) -> Result<Self::Val>;
    fn mul(&self, a: Self::Val, b: Self::Val) -> Result<Self::Val>;
    fn div(&self, a: Self::Val, b: Self::Val, pos: usize) -> Result<Self::Val>;
    fn pow(&self, a: Self::Val, k: u64) -> Result<Self::Val>;
}

impl Expr {
    pub fn eval<A: ExprAlgebra>(&self, alg: &A) -> Result<A::Val> {
        match self {
            Expr::Int(n) => alg.int(n),
            Expr::Ident(name, pos) => alg.ident(name, *pos),
            Expr::Neg(a) => alg.neg(a.eval(alg)?),
            Expr::Add(a, b) => alg.add(a.eval(alg)?, b.eval(alg)?),
            Expr::Sub(a, b) => alg.sub(a.eval(alg)?, b.eval(alg)?),
            Expr::Mul(a, b) => alg.mul(a.eval(alg)?, b.eval(alg)?),
            Expr::Div(a, b, pos) => alg.div(a.eval(alg)?, b.eval(alg)?, *pos),
            Expr::Pow(a, k) => alg.pow(a.eval(alg)?, *k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("1 + 2*x^3").unwrap();
        match e {
            Expr::Add(_, rhs) => assert!(matches!(*rhs, Expr::Mul(_, _))),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("-x^2").unwrap(), Expr::Neg(_)));
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let err = parse("2 x").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                pos: 2,
                msg: "implicit multiplication is not allowed; use `*`".into()
            }
        );
        assert!(parse("(1+z)(x)").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("x1 + "), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse("x1 $ y"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("x^y"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("(x"), Err(Error::Syntax { pos: 2, .. })));
    }
}
