//! Text grammar for polynomials: `eps*x^2 + 1/2*eps^2 - 3*y`.
//!
//! Identifiers are `[A-Za-z_][A-Za-z0-9_]*` followed by any number of `'`
//! (so `eps'` and `x''` are ordinary variable names).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, Poly, Rational};
use crate::error::{Error, Result};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
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

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse()
            .map_err(|_| Error::parse(start, "integer out of range"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.pos += 1,
            _ => return Err(Error::parse(start, "expected a variable name")),
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn exponent(&mut self) -> Result<u32> {
        let pos = self.pos;
        let e = self.integer()?;
        u32::try_from(e).map_err(|_| Error::parse(pos, "exponent out of range"))
    }

    fn factor(&mut self, coeff: &mut Rational, mono: &mut Monomial) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let value = if self.eat(b'/') {
                    let pos = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::parse(pos, "zero denominator"));
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                let value = if self.eat(b'^') {
                    let e = self.exponent()?;
                    num_traits::pow(value, e as usize)
                } else {
                    value
                };
                *coeff *= value;
                Ok(())
            }
            Some(_) => {
                let name = self.ident()?;
                let e = if self.eat(b'^') { self.exponent()? } else { 1 };
                mono.mul_var(&name, e);
                Ok(())
            }
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut coeff = Rational::one();
        let mut mono = Monomial::one();
        self.factor(&mut coeff, &mut mono)?;
        while self.eat(b'*') {
            self.factor(&mut coeff, &mut mono)?;
        }
        Ok((mono, coeff))
    }
}

pub(crate) fn parse_poly(s: &str) -> Result<Poly> {
    let mut lx = Lexer {
        src: s.as_bytes(),
        pos: 0,
    };
    let mut out = Poly::zero();
    let mut sign = if lx.eat(b'-') {
        -Rational::one()
    } else {
        lx.eat(b'+');
        Rational::one()
    };
    loop {
        let (m, c) = lx.term()?;
        out.add_term(m, c * &sign);
        if lx.eat(b'+') {
            sign = Rational::one();
        } else if lx.eat(b'-') {
            sign = -Rational::one();
        } else {
            break;
        }
    }
    if let Some(c) = lx.peek() {
        return Err(Error::parse(
            lx.pos,
            format!("unexpected character `{}`", c as char),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_grammar_example() {
        let p = parse_poly("eps*x^2 + 1/2*eps^2").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(
            p.coeff(&Monomial::power("eps", 2)),
            Rational::new(1.into(), 2.into())
        );
    }

    #[test]
    fn primes_are_part_of_names() {
        let p = parse_poly("x*eps'' - eps'").unwrap();
        assert!(p.vars().contains("eps''"));
        assert!(p.vars().contains("eps'"));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x + * y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly("x )").is_err());
        assert!(parse_poly("1/0").is_err());
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(
            parse_poly(" x ^ 2 *y").unwrap(),
            parse_poly("x^2*y").unwrap()
        );
        assert_eq!(parse_poly("0").unwrap(), Poly::zero());
    }
}
