use num_complex::Complex64;

use super::Expr;
use crate::error::{Error, Result};

/// Parses an operator expression.
///
/// ```text
/// sum     := signed (('+' | '-') signed)*
/// signed  := ('+' | '-')* product
/// product := power ('*' power)*
/// power   := atom ('^' uint)*
/// atom    := number | '(' number ',' number ')' | '(' sum ')'
///          | 'ad(' uint ')' | 'a(' uint ')' | 'N(' uint ['..' uint] ')'
/// ```
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut terms = vec![self.signed()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.signed()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.signed()?;
                    terms.push(negate(t));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Sum(terms)
        })
    }

    fn signed(&mut self) -> Result<Expr> {
        let mut negative = false;
        loop {
            match self.peek() {
                Some(b'-') => {
                    negative = !negative;
                    self.pos += 1;
                }
                Some(b'+') => self.pos += 1,
                _ => break,
            }
        }
        let p = self.product()?;
        Ok(if negative { negate(p) } else { p })
    }

    fn product(&mut self) -> Result<Expr> {
        let mut factors = vec![self.power()?];
        while self.eat(b'*') {
            factors.push(self.power()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        })
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            self.skip_ws();
            let k = self.uint()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            base = Expr::Power(Box::new(base), k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                if let Some(z) = self.try_complex() {
                    return Ok(Expr::Scalar(z));
                }
                self.pos = open + 1;
                let inner = self.sum()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let x = self.number()?;
                Ok(Expr::real(x))
            }
            Some(_) if self.keyword("ad") => {
                let m = self.mode_arg()?;
                Ok(Expr::Create(m))
            }
            Some(_) if self.keyword("a") => {
                let m = self.mode_arg()?;
                Ok(Expr::Annihilate(m))
            }
            Some(_) if self.keyword("N") => self.number_sugar(),
            Some(c) => Err(self.error(format!("unexpected character `{}`", c as char))),
        }
    }

    /// Matches an identifier immediately followed by `(`.
    fn keyword(&mut self, word: &str) -> bool {
        let w = word.as_bytes();
        let end = self.pos + w.len();
        if end > self.src.len() || &self.src[self.pos..end] != w {
            return false;
        }
        let mut look = end;
        while look < self.src.len() && self.src[look].is_ascii_whitespace() {
            look += 1;
        }
        if self.src.get(look) == Some(&b'(') {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn mode_arg(&mut self) -> Result<usize> {
        self.expect(b'(')?;
        let m = self.mode()?;
        self.expect(b')')?;
        Ok(m)
    }

    fn mode(&mut self) -> Result<usize> {
        self.skip_ws();
        let at = self.pos;
        if self.src.get(at) == Some(&b'-') {
            return Err(self.error_at(at, "mode index must be positive"));
        }
        let m = self.uint()?;
        if m == 0 {
            return Err(self.error_at(at, "mode index must be positive"));
        }
        Ok(m)
    }

    fn number_sugar(&mut self) -> Result<Expr> {
        self.expect(b'(')?;
        let lo = self.mode()?;
        self.skip_ws();
        let hi = if self.src[self.pos..].starts_with(b"..") {
            self.pos += 2;
            let at = self.pos;
            let hi = self.mode()?;
            if hi < lo {
                return Err(self.error_at(at, "empty mode range"));
            }
            hi
        } else {
            lo
        };
        self.expect(b')')?;
        Ok(Expr::number(lo..=hi))
    }

    fn uint(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error_at(start, "integer too large"))
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') && self.src.get(self.pos + 1) != Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error_at(start, "malformed number"))
    }

    /// `re , im )` after an opening parenthesis; restores nothing on failure.
    fn try_complex(&mut self) -> Option<Complex64> {
        let re = self.number().ok()?;
        if !self.eat(b',') {
            return None;
        }
        let im = self.number().ok()?;
        if !self.eat(b')') {
            return None;
        }
        Some(Complex64::new(re, im))
    }
}

fn negate(e: Expr) -> Expr {
    match e {
        Expr::Scalar(z) => Expr::Scalar(-z),
        Expr::Product(mut xs) => {
            if let Some(Expr::Scalar(z)) = xs.first_mut() {
                *z = -*z;
            } else {
                xs.insert(0, Expr::real(-1.0));
            }
            Expr::Product(xs)
        }
        other => Expr::Product(vec![Expr::real(-1.0), other]),
    }
}
