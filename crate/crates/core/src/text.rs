//! Polynomial expressions: `3/2*x^-3*y - (2*a + 1)*x^2 + (x + y)^2`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeffs::FieldKind;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Ring};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Lexer> {
    let err = |col: usize, msg: String| Error::Parse {
        line,
        col: col0 + col,
        msg,
    };
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[s..i].iter().collect();
            toks.push((Tok::Num(digits.parse().expect("digits")), s));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[s..i].iter().collect()), s));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(err(i + 1, format!("unexpected character `{c}`")));
        }
    }
    Ok(Lexer { toks })
}

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col0: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        let col = self
            .toks
            .get(self.pos)
            .map_or(self.end_col, |(_, c)| *c + 1);
        Error::Parse {
            line: self.line,
            col: self.col0 + col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = match d.terms().next() {
                    Some((u, c)) if d.len() == 1 && u.is_zero() => c.clone(),
                    _ if d.is_zero() => return Err(self.err("division by zero")),
                    _ => return Err(self.err("only division by a constant is supported")),
                };
                let inv = d.field().inv(&c).map_err(|_| self.err("division by zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPoly> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                u32::try_from(n).map_err(|_| self.err("exponent too large"))?
            }
            _ => return Err(self.err("expected an integer exponent")),
        };
        if !neg {
            return Ok(base.pow(e));
        }
        if base.len() != 1 {
            return Err(self.err("negative powers need a single term"));
        }
        let (u, c) = base.terms().next().expect("one term");
        let field = base.field();
        let inv = field.inv(c).map_err(|_| self.err("division by zero"))?;
        Ok(LaurentPoly::monomial(self.ring, field.pow(&inv, e as u64), (-u).scale(e as i64)))
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let field = self.ring.field().clone();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(LaurentPoly::constant(self.ring, field.from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => {
                if let Some(k) = self.ring.vars().iter().position(|v| *v == name) {
                    self.pos += 1;
                    return Ok(LaurentPoly::var(self.ring, k));
                }
                if name == "a" && matches!(field.kind(), FieldKind::Extension { .. }) {
                    self.pos += 1;
                    let g = field.generator().expect("extension field has a generator");
                    return Ok(LaurentPoly::constant(self.ring, g));
                }
                Err(self.err(format!("unknown identifier `{name}`")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses an expression; `line` and `col0` place diagnostics inside a larger file.
pub fn parse_poly_at(ring: &Arc<Ring>, src: &str, line: usize, col0: usize) -> Result<LaurentPoly> {
    let lexer = lex(src, line, col0)?;
    let mut p = Parser {
        ring,
        toks: lexer.toks,
        pos: 0,
        line,
        col0,
        end_col: src.chars().count() + 1,
    };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

pub fn parse_poly(ring: &Arc<Ring>, src: &str) -> Result<LaurentPoly> {
    parse_poly_at(ring, src, 1, 0)
}
