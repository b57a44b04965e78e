//! Polynomial expression parser: `u^4*x^2 + v^8*y*z`, `3*u*x - (u+v)*y`.
//!
//! Grammar: `expr := ['-'] term (('+'|'-') term)*`, `term := power ('*' power)*`,
//! `power := atom ['^' integer]`, `atom := integer | identifier | '(' expr ')'`.

use crate::error::ParseError;
use crate::field::Field;
use crate::ring::{CoeffPoly, Monomial};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Num(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::End => "<end>".into(),
        }
    }
}

fn err(pos: usize, token: &str, message: impl Into<String>) -> ParseError {
    ParseError { pos, token: token.to_string(), message: message.into() }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
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
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                let n = text.parse().map_err(|_| err(start, text, "integer literal too large"))?;
                out.push((start, Tok::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(err(start, &ch.to_string(), "unexpected character"));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: &'a [String],
    field: &'a F,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> &(usize, Tok) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<CoeffPoly<F::Elem>, ParseError> {
        let negate = if self.peek().1 == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg(self.field);
        }
        loop {
            match self.peek().1 {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t, self.field);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t, self.field);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CoeffPoly<F::Elem>, ParseError> {
        let mut acc = self.power()?;
        while self.peek().1 == Tok::Star {
            self.bump();
            let p = self.power()?;
            acc = acc.mul(&p, self.field);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<CoeffPoly<F::Elem>, ParseError> {
        let base = self.atom()?;
        if self.peek().1 != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (pos, Tok::Num(k)) => {
                let k = u32::try_from(k).map_err(|_| err(pos, &k.to_string(), "exponent too large"))?;
                Ok(base.pow(k, self.vars.len(), self.field))
            }
            (pos, t) => Err(err(pos, &t.text(), "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<CoeffPoly<F::Elem>, ParseError> {
        let nvars = self.vars.len();
        match self.bump() {
            (pos, Tok::Num(n)) => {
                let v = i64::try_from(n).map_err(|_| err(pos, &n.to_string(), "integer literal too large"))?;
                Ok(CoeffPoly::constant(self.field.from_i64(v), nvars, self.field))
            }
            (pos, Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(j) => Ok(CoeffPoly::monomial(Monomial::var(nvars, j), self.field)),
                None => Err(err(pos, &name, "undeclared variable")),
            },
            (_, Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    (_, Tok::RParen) => Ok(inner),
                    (pos, t) => Err(err(pos, &t.text(), "expected `)`")),
                }
            }
            (pos, t) => Err(err(pos, &t.text(), "expected a number, variable or `(`")),
        }
    }
}

/// Parse `src` as a polynomial in `vars` (in the given order) over `field`.
pub fn parse_poly<F: Field>(src: &str, vars: &[String], field: &F) -> Result<CoeffPoly<F::Elem>, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0, vars, field };
    if p.peek().1 == Tok::End {
        return Err(err(0, "<end>", "empty expression"));
    }
    let poly = p.expr()?;
    match p.peek() {
        (_, Tok::End) => Ok(poly),
        (pos, t) => Err(err(*pos, &t.text(), "unexpected token")),
    }
}

/// Parse a single monomial with coefficient one, such as `u^3*v`.
pub fn parse_monomial<F: Field>(src: &str, vars: &[String], field: &F) -> Result<Monomial, ParseError> {
    let poly = parse_poly(src, vars, field)?;
    let mut terms = poly.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if field.is_one(c) => Ok(m.clone()),
        _ => Err(err(0, src, "expected a single monomial with coefficient 1")),
    }
}
