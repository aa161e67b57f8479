//! Text syntax for polynomials: identifiers, integers, `+ - * ^` and parentheses.

use crate::poly::{Poly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyParseError {
    /// 1-based character column inside the parsed text.
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    ring: &'a PolyRing,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, PolyParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<u64>().map_err(|_| PolyParseError {
                column: col,
                message: format!("integer literal {text} out of range"),
            })?;
            out.push((Tok::Int(v), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(PolyParseError { column: col, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyParseError> {
        Err(PolyParseError { column: self.col(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Poly, PolyParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Sym('*')) = self.peek() {
            self.pos += 1;
            let f = self.unary()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, PolyParseError> {
        if let Some(Tok::Sym('-')) = self.peek() {
            self.pos += 1;
            let p = self.unary()?;
            return Ok(self.ring.neg(&p));
        }
        if let Some(Tok::Sym('+')) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, PolyParseError> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) if e <= u16::MAX as u64 => {
                    self.pos += 1;
                    return Ok(self.ring.pow(&base, e as u32));
                }
                _ => return self.err("expected a non-negative integer exponent after '^'"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, PolyParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                let p = self.ring.field().characteristic() as u64;
                Ok(self.ring.constant((v % p) as i64))
            }
            Some(Tok::Ident(name)) => match self.ring.var_by_name(&name) {
                Some(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                None => self.err(format!("unknown variable '{name}'")),
            },
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(t) => self.err(format!("expected variable, integer or '(' but found {t:?}")),
            None => self.err("expected variable, integer or '(' but found end of input"),
        }
    }
}

impl PolyRing {
    pub fn parse(&self, text: &str) -> Result<Poly, PolyParseError> {
        let toks = lex(text)?;
        let end_col = text.chars().count() + 1;
        let mut p = Parser { ring: self, toks, pos: 0, end_col };
        if p.toks.is_empty() {
            return p.err("empty polynomial");
        }
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.err(format!("unexpected token {:?}", p.toks[p.pos].0));
        }
        Ok(e)
    }
}
