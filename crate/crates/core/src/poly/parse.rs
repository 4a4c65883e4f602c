//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nat)?
//! base     := rational | var | '(' expr ')' | '-' base
//! rational := int ('/' nat)?
//! ```
//!
//! Implicit multiplication is rejected. Positions in errors are byte offsets.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, VarSet};
use crate::error::{Error, Result};
use crate::exact_arith::Rational;

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
    End,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().unwrap()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character {ch:?}") });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    vars: &'a VarSet,
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.nat("exponent")?;
            let e: u32 =
                e.try_into().map_err(|_| Error::Syntax { pos: self.pos(), msg: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn nat(&mut self, what: &str) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.fail(format!("expected non-negative integer {what}")),
        }
    }

    fn base(&mut self) -> Result<Polynomial> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => {
                let mut q = Rational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dpos = self.pos();
                    let d = self.nat("denominator")?;
                    if d.is_zero() {
                        return Err(Error::Syntax { pos: dpos, msg: "zero denominator".into() });
                    }
                    q /= Rational::from_integer(d);
                }
                Ok(Polynomial::constant(self.vars, q))
            }
            Tok::Ident(name) => match self.vars.index_of(&name) {
                Some(_) => Polynomial::var(self.vars, &name),
                None => Err(Error::UnknownVariable { name, pos }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    return Err(Error::Syntax {
                        pos: self.toks[self.at.saturating_sub(1)].1,
                        msg: "expected ')'".into(),
                    });
                }
                Ok(inner)
            }
            Tok::Minus => Ok(-self.base()?),
            Tok::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            t => Err(Error::Syntax { pos, msg: format!("unexpected {t}") }),
        }
    }
}

pub(super) fn parse(vars: &VarSet, text: &str) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut p = Parser { vars, toks, at: 0 };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(out)
}
