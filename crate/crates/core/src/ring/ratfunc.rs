use std::fmt;
use std::str::FromStr;

use super::{Monomial, Poly};
use crate::error::{Error, Result};

/// A quotient of polynomials. Only the monomial content and the scalar
/// normalization are removed; no multivariate gcd is attempted, so equality
/// is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroInput);
        }
        let g = if num.is_zero() {
            den.monomial_content()
        } else {
            num.monomial_content().gcd(&den.monomial_content())
        };
        let num = num.div_monomial(&g).expect("content divides");
        let den = den.div_monomial(&g).expect("content divides");
        let lead = den
            .terms()
            .next_back()
            .map(|(_, c)| c.recip())
            .expect("nonzero");
        Ok(RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals, if the denominator is a constant.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.den.is_constant() {
            Some(self.num.scale(&self.den.constant_term().recip()))
        } else {
            None
        }
    }

    /// The denominator as a monomial, if it is one (after normalization).
    pub fn monomial_denominator(&self) -> Option<Monomial> {
        self.den.as_term().map(|(_, m)| m.clone())
    }

    /// `val_t(num) - val_t(den)`.
    pub fn valuation(&self, t: &str) -> Result<i64> {
        let vn = self.num.valuation(t).ok_or(Error::ZeroInput)?;
        let vd = self.den.valuation(t).expect("nonzero denominator");
        Ok(i64::from(vn) - i64::from(vd))
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den)
            .expect("product of nonzero denominators")
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RationalFunction::new(num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn mul_monomial(&self, m: &Monomial) -> RationalFunction {
        RationalFunction::new(self.num.mul_monomial(m), self.den.clone())
            .expect("nonzero denominator")
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

/// Accepts a plain polynomial or `(num)/(den)`.
impl FromStr for RationalFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if !t.starts_with('(') {
            return Ok(RationalFunction::from_poly(t.parse()?));
        }
        let close = matching_paren(t).ok_or_else(|| Error::parse(0, "unbalanced parenthesis"))?;
        let num: Poly = t[1..close].parse()?;
        let rest = t[close + 1..].trim_start();
        if rest.is_empty() {
            return Ok(RationalFunction::from_poly(num));
        }
        let rest = rest
            .strip_prefix('/')
            .ok_or_else(|| Error::parse(close + 1, "expected `/` after numerator"))?
            .trim();
        let den: Poly = match rest.strip_prefix('(') {
            Some(inner) => inner
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(t.len(), "expected `)`"))?
                .parse()?,
            None => rest.parse()?,
        };
        RationalFunction::new(num, den)
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(rf("(1)/(x)").valuation("x").unwrap(), -1);
        assert_eq!(rf("(x^2*y)/(x)").valuation("x").unwrap(), 1);
        assert_eq!(rf("(x + y)/(x^2)").valuation("x").unwrap(), -2);
        assert!(matches!(rf("0").valuation("x"), Err(Error::ZeroInput)));
    }

    #[test]
    fn normalization_and_equality() {
        let a = rf("(2*x^2*y)/(4*x)");
        assert_eq!(a.as_poly(), Some("1/2*x*y".parse().unwrap()));
        assert_eq!(rf("(x + y)/(x*y)"), rf("(2*x + 2*y)/(2*x*y)"));
        assert_eq!(rf("(1)/(x^3)").to_string(), "(1)/(x^3)");
        assert_eq!(rf(&rf("(1)/(x^3)").to_string()), rf("(1)/(x^3)"));
    }
}
