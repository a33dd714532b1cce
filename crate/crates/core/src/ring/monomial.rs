use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A monomial `x1^e1 * ... * xk^ek` over named variables.
///
/// Zero exponents are never stored, so structural equality is monomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Self::power(name, 1)
    }

    pub fn power(name: &str, exp: u32) -> Self {
        let mut m = BTreeMap::new();
        if exp > 0 {
            m.insert(name.to_string(), exp);
        }
        Monomial(m)
    }

    pub fn from_exponents<I, S>(exps: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut m = Monomial::one();
        for (v, e) in exps {
            m.mul_var(&v.into(), e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponents(&self) -> &BTreeMap<String, u32> {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn var_set(&self) -> BTreeSet<String> {
        self.0.keys().cloned().collect()
    }

    pub fn contains(&self, var: &str) -> bool {
        self.0.contains_key(var)
    }

    pub(crate) fn mul_var(&mut self, var: &str, exp: u32) {
        if exp > 0 {
            *self.0.entry(var.to_string()).or_insert(0) += exp;
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, e) in &other.0 {
            out.mul_var(v, *e);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), e * k)).collect())
    }

    /// True iff `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, e)| other.degree(v) >= *e)
    }

    /// Exact quotient `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out = BTreeMap::new();
        for (v, e) in &self.0 {
            let r = e - other.degree(v);
            if r > 0 {
                out.insert(v.clone(), r);
            }
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let m = (*e).min(other.degree(v));
                    (m > 0).then(|| (v.clone(), m))
                })
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            let slot = out.entry(v.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        Monomial(out)
    }

    /// Product of the distinct variables of `self`.
    pub fn radical(&self) -> Monomial {
        Monomial(self.0.keys().map(|v| (v.clone(), 1)).collect())
    }

    /// Drop the variable `var` entirely.
    pub fn without(&self, var: &str) -> Monomial {
        let mut out = self.0.clone();
        out.remove(var);
        Monomial(out)
    }

    pub fn rename(&self, from: &str, to: &str) -> Monomial {
        let mut out = Monomial::one();
        for (v, e) in &self.0 {
            out.mul_var(if v == from { to } else { v }, *e);
        }
        out
    }

    /// Is this a pure power `v^e` with `e >= 1`?
    pub fn as_pure_power(&self) -> Option<(&str, u32)> {
        if self.0.len() == 1 {
            self.0.iter().next().map(|(v, e)| (v.as_str(), *e))
        } else {
            None
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_exponents_are_not_stored() {
        let m = Monomial::from_exponents([("x", 0), ("y", 2)]);
        assert_eq!(m, Monomial::power("y", 2));
        assert!(!m.contains("x"));
    }

    #[test]
    fn division_and_gcd() {
        let a = Monomial::from_exponents([("x", 2), ("y", 3)]);
        let b = Monomial::from_exponents([("x", 1), ("y", 1)]);
        assert_eq!(
            a.div(&b),
            Some(Monomial::from_exponents([("x", 1), ("y", 2)]))
        );
        assert_eq!(b.div(&a), None);
        assert_eq!(a.gcd(&Monomial::power("x", 5)), Monomial::power("x", 2));
        assert_eq!(a.to_string(), "x^2*y^3");
    }
}
