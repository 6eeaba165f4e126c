//! Text syntax for polynomials: variables of the ring, integer or rational
//! coefficients, `+ - * ^`, parentheses. Whitespace is insignificant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::RingRef;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a RingRef,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: 1, column: self.pos + 1, message: message.into() })
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

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let n = self.integer()?;
            let e: u32 = n.try_into().map_err(|_| Error::Parse {
                line: 1,
                column: start + 1,
                message: "exponent must be a small non-negative integer".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let col = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::Parse { line: 1, column: col + 1, message: "zero denominator".into() });
                    }
                    value /= BigRational::from_integer(den);
                }
                let field = self.ring.field();
                let c = field.from_rational(&value).map_err(|e| Error::Parse {
                    line: 1,
                    column: self.pos + 1,
                    message: e.to_string(),
                })?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.index_of(name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => Err(Error::Parse {
                        line: 1,
                        column: start + 1,
                        message: format!("unknown variable {name}"),
                    }),
                }
            }
            Some(c) => self.err(format!("unexpected character {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_polynomial(ring: &RingRef, text: &str) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::scalar::Field;

    #[test]
    fn parses_factored_form() {
        let r = Ring::indexed("X", 3, Field::Rational);
        let f = parse_polynomial(&r, "X0*X1*(X0-X2)*(X0+X2)*(X0-2*X2)").unwrap();
        assert_eq!(f.degree(), Some(5));
        assert!(f.is_homogeneous());
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn reports_location() {
        let r = Ring::indexed("X", 3, Field::Rational);
        match parse_polynomial(&r, "X0 + Y1") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial(&r, "(X0").is_err());
        assert!(parse_polynomial(&r, "X0 X1").is_err());
    }

    #[test]
    fn reduces_mod_p() {
        let r = Ring::indexed("X", 2, Field::Prime(7));
        let f = parse_polynomial(&r, "9*X0 + 1/2*X1").unwrap();
        assert_eq!(f.to_string(), "2*X0 + 4*X1");
    }
}
