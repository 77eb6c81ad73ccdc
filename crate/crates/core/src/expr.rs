//! Polynomial expressions over a ring's variable names: `2*x^2*z - (y+z)^3`.

use alloc::format;
use alloc::string::String;

use crate::poly::Poly;
use crate::ring::Ring;

/// A syntax error at a byte offset into the parsed text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

struct P<'a> {
    s: &'a [u8],
    i: usize,
    ring: &'a Ring,
}

impl<'a> P<'a> {
    fn err<T>(&self, message: String) -> Result<T, ExprError> {
        Err(ExprError { offset: self.i, message })
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && (self.s[self.i] as char).is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn number(&mut self) -> Result<u64, ExprError> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return self.err(String::from("expected a number"));
        }
        let txt = core::str::from_utf8(&self.s[start..self.i]).unwrap();
        txt.parse::<u64>().or_else(|_| {
            self.i = start;
            self.err(format!("number {txt} is too large"))
        })
    }

    fn expr(&mut self) -> Result<Poly, ExprError> {
        let ctx = *self.ring.ctx();
        let mut acc = if self.peek() == Some(b'-') {
            self.i += 1;
            self.term()?.neg(&ctx)
        } else {
            if self.peek() == Some(b'+') {
                self.i += 1;
            }
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = acc.add(&self.term()?, &ctx);
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = acc.sub(&self.term()?, &ctx);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ExprError> {
        let ctx = *self.ring.ctx();
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.i += 1;
            acc = acc.mul(&self.factor()?, &ctx);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            let e = self.number()?;
            if e > 1000 {
                return self.err(format!("exponent {e} is too large"));
            }
            return Ok(base.pow(e as u32, self.ring.ctx()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(String::from("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let f = self.ring.field();
                Ok(Poly::constant((n % f.characteristic() as u64) as u32))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                let name = core::str::from_utf8(&self.s[start..self.i]).unwrap();
                match self.ring.names().iter().position(|v| v == name) {
                    Some(k) => Ok(Poly::var(k)),
                    None => {
                        self.i = start;
                        self.err(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err(String::from("unexpected end of expression")),
        }
    }
}

/// Parses a complete expression; trailing input is an error.
pub fn parse_poly(ring: &Ring, text: &str) -> Result<Poly, ExprError> {
    let mut p = P { s: text.as_bytes(), i: 0, ring };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err(String::from("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a prefix of `text`, returning the polynomial and bytes consumed.
pub fn parse_poly_prefix(ring: &Ring, text: &str) -> Result<(Poly, usize), ExprError> {
    let mut p = P { s: text.as_bytes(), i: 0, ring };
    let e = p.expr()?;
    Ok((e, p.i))
}
