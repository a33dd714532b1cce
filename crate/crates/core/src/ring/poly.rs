use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::{Monomial, Rational};
use crate::error::Error;

/// Sparse polynomial over the rationals. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        Poly::term(Rational::one(), Monomial::var(name))
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly::term(Rational::one(), m)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.vars().map(str::to_string))
            .collect()
    }

    /// The single term of a one-term polynomial.
    pub fn as_term(&self) -> Option<(&Rational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone()))
                .collect(),
        }
    }

    /// Exact termwise quotient by a monomial.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            terms.insert(k.div(m)?, v.clone());
        }
        Some(Poly { terms })
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Greatest common monomial divisor of all terms (`1` for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    pub fn max_degree(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.degree(var)).max().unwrap_or(0)
    }

    /// Largest `e` with `var^e` dividing every term; `None` for zero.
    pub fn valuation(&self, var: &str) -> Option<u32> {
        self.terms.keys().map(|m| m.degree(var)).min()
    }

    /// Keep only the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Set every variable in `vars` to zero.
    pub fn set_zero<S: AsRef<str>>(&self, vars: &[S]) -> Poly {
        self.filter_terms(|m| vars.iter().all(|v| !m.contains(v.as_ref())))
    }

    /// Group terms by the power of `var`: `self = sum_k coeffs[k] * var^k`.
    pub fn coefficients_in(&self, var: &str) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree(var))
                .or_default()
                .add_term(m.without(var), c.clone());
        }
        out
    }

    pub fn rename(&self, from: &str, to: &str) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.rename(from, to), c.clone())),
        )
    }

    /// Substitute polynomials for variables; variables without an image stay fixed.
    pub fn substitute(&self, images: &BTreeMap<String, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            let mut kept = Monomial::one();
            for (v, e) in m.exponents() {
                match images.get(v) {
                    Some(img) => t = &t * &img.pow(*e),
                    None => kept.mul_var(v, *e),
                }
            }
            out = &out + &t.mul_monomial(&kept);
        }
        out
    }

    /// Rescale so that the coefficient of the last term is one.
    pub fn monic(&self) -> Poly {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.recip()),
            None => Poly::zero(),
        }
    }
}

impl From<Monomial> for Poly {
    fn from(m: Monomial) -> Self {
        Poly::monomial(m)
    }
}

impl FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_poly(s)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = p("x + y");
        let b = p("x - y");
        assert_eq!(&a - &a, Poly::zero());
        assert_eq!(&(&a * &b) - &p("x^2 - y^2"), Poly::zero());
    }

    #[test]
    fn substitution_matches_hand_expansion() {
        let f = p("eps + x");
        let mut images = BTreeMap::new();
        images.insert("eps".to_string(), p("x*e1"));
        assert_eq!(f.substitute(&images), p("x*e1 + x"));
    }

    #[test]
    fn display_uses_the_text_grammar() {
        let f = p("eps*x^2 + 1/2*eps^2 - 3");
        assert_eq!(f.to_string().parse::<Poly>().unwrap(), f);
        assert_eq!(p("-x").to_string(), "-x");
    }

    #[test]
    fn coefficients_in_splits_by_power() {
        let f = p("x^2*y + x*eps + eps");
        let c = f.coefficients_in("x");
        assert_eq!(c[&0], p("eps"));
        assert_eq!(c[&1], p("eps"));
        assert_eq!(c[&2], p("y"));
    }
}
