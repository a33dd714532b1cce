use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Monomial, Poly, Rational};
use crate::error::{Error, Result};

/// `k[vars]/(relation)` for a single nonconstant monomial `relation`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientRing {
    vars: Vec<String>,
    relation: Monomial,
}

impl QuotientRing {
    pub fn new<I, S>(vars: I, relation: Monomial) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = vars.into_iter().map(Into::into).collect();
        if relation.is_one() {
            return Err(Error::InvalidRing("relation must be nonconstant".into()));
        }
        if let Some(v) = relation.vars().find(|v| !set.contains(*v)) {
            return Err(Error::InvalidRing(format!(
                "relation uses unknown variable `{v}`"
            )));
        }
        Ok(Arc::new(QuotientRing {
            vars: set.into_iter().collect(),
            relation,
        }))
    }

    /// `k[vars]/(eps^h)`.
    pub fn ptm<I, S>(vars: I, eps: &str, h: u32) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if h == 0 {
            return Err(Error::InvalidRing("thickness must be positive".into()));
        }
        Self::new(vars, Monomial::power(eps, h))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.vars.binary_search_by(|x| x.as_str().cmp(v)).is_ok()
    }

    pub fn relation(&self) -> &Monomial {
        &self.relation
    }

    /// `Some((eps, h))` when the relation is a pure power `eps^h`.
    pub fn ptm_parameter(&self) -> Option<(&str, u32)> {
        self.relation.as_pure_power()
    }

    /// A name not yet used by the ring, built by appending primes to `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = format!("{base}'");
        while self.has_var(&name) {
            name.push('\'');
        }
        name
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        for v in p.vars() {
            if !self.has_var(&v) {
                return Err(Error::UnknownVariable(v));
            }
        }
        Ok(self.reduce(p))
    }

    /// Delete the terms divisible by the relation without checking variables.
    pub(crate) fn reduce(&self, p: &Poly) -> Poly {
        p.filter_terms(|m| !self.relation.divides(m))
    }

    pub fn elem(self: &Arc<Self>, p: &Poly) -> Result<RingElem> {
        Ok(RingElem {
            ring: Arc::clone(self),
            poly: self.normal_form(p)?,
        })
    }

    pub fn parse(self: &Arc<Self>, s: &str) -> Result<RingElem> {
        self.elem(&s.parse()?)
    }

    pub fn zero(self: &Arc<Self>) -> RingElem {
        RingElem {
            ring: Arc::clone(self),
            poly: Poly::zero(),
        }
    }

    pub fn one(self: &Arc<Self>) -> RingElem {
        RingElem {
            ring: Arc::clone(self),
            poly: Poly::one(),
        }
    }

    pub fn var(self: &Arc<Self>, v: &str) -> Result<RingElem> {
        self.elem(&Poly::var(v))
    }
}

impl fmt::Display for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k[{}]/({})", self.vars.join(","), self.relation)
    }
}

/// An element of a [`QuotientRing`], always kept in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: Arc<QuotientRing>,
    poly: Poly,
}

impl RingElem {
    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn same_ring(&self, other: &RingElem) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ))
        }
    }

    fn with(&self, poly: Poly) -> RingElem {
        RingElem {
            poly: self.ring.reduce(&poly),
            ring: Arc::clone(&self.ring),
        }
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem> {
        self.same_ring(other)?;
        Ok(self.with(&self.poly + &other.poly))
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.same_ring(other)?;
        Ok(self.with(&self.poly - &other.poly))
    }

    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem> {
        self.same_ring(other)?;
        Ok(self.with(&self.poly * &other.poly))
    }

    pub fn pow(&self, k: u32) -> RingElem {
        let mut acc = self.ring.one();
        for _ in 0..k {
            acc = self.with(&acc.poly * &self.poly);
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> RingElem {
        self.with(self.poly.scale(c))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> RingElem {
        self.with(self.poly.mul_monomial(m))
    }

    /// Termwise exact division by a monomial. In these rings every ideal
    /// `(m)` is spanned by the surviving monomials divisible by `m`, so this
    /// decides membership in `(m)`.
    pub fn div_monomial(&self, m: &Monomial) -> Option<RingElem> {
        self.poly.div_monomial(m).map(|q| self.with(q))
    }

    /// Product of the variables of the relation: an element is nilpotent iff
    /// every term is divisible by this monomial.
    fn radical(&self) -> Monomial {
        self.ring.relation.radical()
    }

    /// Exact unit test: a nonzero constant plus a nilpotent.
    ///
    /// The nilradical of `k[x]/(m)` is generated by the radical of `m`, so
    /// units are exactly `c + n` with `c != 0` and every term of `n`
    /// divisible by that radical.
    pub fn is_unit(&self) -> bool {
        let rad = self.radical();
        !self.poly.constant_term().is_zero()
            && self.poly.terms().all(|(m, _)| m.is_one() || rad.divides(m))
    }

    /// Inverse of a unit via the terminating geometric series.
    pub fn inverse(&self) -> Result<RingElem> {
        if !self.is_unit() {
            return Err(Error::NotUnit(self.poly.to_string()));
        }
        let c = self.poly.constant_term();
        let c_inv = c.recip();
        // self = c (1 + n) with n nilpotent
        let n = self.with(&self.poly.scale(&c_inv) - &Poly::one());
        let neg_n = n.scale(&-Rational::one());
        let mut sum = self.ring.one();
        let mut power = self.ring.one();
        loop {
            power = self.with(&power.poly * &neg_n.poly);
            if power.is_zero() {
                break;
            }
            sum = self.with(&sum.poly + &power.poly);
        }
        Ok(sum.scale(&c_inv))
    }

    /// Membership in the nilradical `(eps)` of a ptm ring.
    pub fn is_nilpotent(&self) -> Result<bool> {
        let (eps, _) = self
            .ring
            .ptm_parameter()
            .ok_or_else(|| Error::NotPtmRing(self.ring.to_string()))?;
        Ok(self.poly.terms().all(|(m, _)| m.contains(eps)))
    }

    /// The image modulo the nilpotent parameter of a ptm ring.
    pub fn reduction_poly(&self) -> Result<Poly> {
        let (eps, _) = self
            .ring
            .ptm_parameter()
            .ok_or_else(|| Error::NotPtmRing(self.ring.to_string()))?;
        Ok(self.poly.set_zero(&[eps]))
    }

    /// Write `self = u * m` with `u` a unit and `m` an eps-free monomial.
    pub fn unit_monomial_decompose(&self) -> Option<(RingElem, Monomial)> {
        let red = self.reduction_poly().ok()?;
        let (_, m) = red.as_term()?;
        let u = self.div_monomial(m)?;
        debug_assert!(u.is_unit());
        Some((u, m.clone()))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

macro_rules! ring_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr for &RingElem {
            type Output = RingElem;
            /// Panics when the operands live in different rings.
            fn $method(self, rhs: &RingElem) -> RingElem {
                self.$try(rhs).expect("ring elements from different rings")
            }
        }
    };
}

ring_op!(Add, add, try_add);
ring_op!(Sub, sub, try_sub);
ring_op!(Mul, mul, try_mul);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str], rel: &str) -> Arc<QuotientRing> {
        let rel: Poly = rel.parse().unwrap();
        QuotientRing::new(vars.iter().copied(), rel.as_term().unwrap().1.clone()).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["eps", "t"], "eps^3");
        assert_eq!(r.parse("eps^3 + eps*t").unwrap().to_string(), "eps*t");
        let r = ring(&["x", "y"], "x^4");
        assert_eq!(r.parse("x^2*y + x^3*y").unwrap().poly().len(), 2);
        assert!(matches!(r.parse("z"), Err(Error::UnknownVariable(v)) if v == "z"));
    }

    #[test]
    fn unit_examples() {
        let r = ring(&["eps", "t"], "eps^2");
        assert!(r.parse("1 + eps*t").unwrap().is_unit());
        assert!(!r.parse("t").unwrap().is_unit());
        assert!(!r.parse("1 + t").unwrap().is_unit());
        // 1 + eps is not a unit when eps alone is not nilpotent
        let c = ring(&["eps", "t"], "eps^2*t^2");
        assert!(!c.parse("1 + eps").unwrap().is_unit());
        assert!(c.parse("1 + eps*t").unwrap().is_unit());
    }

    #[test]
    fn inverse_of_unit() {
        let r = ring(&["eps", "x"], "eps^4");
        let u = r.parse("3 + eps*x - 2*eps^2").unwrap();
        let v = u.inverse().unwrap();
        assert_eq!(&u * &v, r.one());
    }

    #[test]
    fn nilpotent_examples() {
        let r = ring(&["eps", "t"], "eps^3");
        assert!(r.parse("eps + eps^2*t").unwrap().is_nilpotent().unwrap());
        assert!(!r.parse("t").unwrap().is_nilpotent().unwrap());
        let r2 = ring(&["eps", "t"], "eps^2");
        assert!(r2.parse("eps*t^5").unwrap().is_nilpotent().unwrap());
        let c = ring(&["eps", "t"], "eps*t");
        assert!(matches!(c.one().is_nilpotent(), Err(Error::NotPtmRing(_))));
    }

    #[test]
    fn decompose_examples() {
        let r = ring(&["x", "eps"], "eps^2");
        let (u, m) = r
            .parse("x^2 + eps*x^2")
            .unwrap()
            .unit_monomial_decompose()
            .unwrap();
        assert_eq!(u, r.parse("1 + eps").unwrap());
        assert_eq!(m, Monomial::power("x", 2));
        let r = ring(&["x", "y", "eps"], "eps^2");
        assert!(r
            .parse("y^2 + eps")
            .unwrap()
            .unit_monomial_decompose()
            .is_none());
    }
}
