use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{Poly, QuotientRing, RingElem};
use crate::error::{Error, Result};

/// A homomorphism given by the images of the source generators.
///
/// Generators without an explicit image map to the variable of the same
/// name, which must exist in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap {
    source: Arc<QuotientRing>,
    target: Arc<QuotientRing>,
    images: BTreeMap<String, Poly>,
}

impl RingMap {
    pub fn new(
        source: Arc<QuotientRing>,
        target: Arc<QuotientRing>,
        images: BTreeMap<String, Poly>,
    ) -> Result<Self> {
        let mut full = BTreeMap::new();
        for v in source.vars() {
            let img = match images.get(v) {
                Some(p) => target.normal_form(p)?,
                None if target.has_var(v) => Poly::var(v),
                None => {
                    return Err(Error::IllDefinedMap(format!(
                        "no image for `{v}` and the target has no such variable"
                    )))
                }
            };
            full.insert(v.clone(), img);
        }
        if let Some(v) = images.keys().find(|v| !source.has_var(v)) {
            return Err(Error::UnknownVariable(v.clone()));
        }
        let map = RingMap {
            source,
            target,
            images: full,
        };
        if !map.relation_image().is_zero() {
            return Err(Error::IllDefinedMap(format!(
                "relation {} maps to {}",
                map.source.relation(),
                map.relation_image()
            )));
        }
        Ok(map)
    }

    pub fn identity(ring: Arc<QuotientRing>) -> Self {
        let images = ring
            .vars()
            .iter()
            .map(|v| (v.clone(), Poly::var(v)))
            .collect();
        RingMap {
            source: Arc::clone(&ring),
            target: ring,
            images,
        }
    }

    fn relation_image(&self) -> Poly {
        self.target
            .reduce(&Poly::monomial(self.source.relation().clone()).substitute(&self.images))
    }

    pub fn is_well_defined(&self) -> bool {
        self.relation_image().is_zero()
    }

    pub fn source(&self) -> &Arc<QuotientRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<QuotientRing> {
        &self.target
    }

    pub fn images(&self) -> &BTreeMap<String, Poly> {
        &self.images
    }

    pub fn image_of(&self, var: &str) -> Option<&Poly> {
        self.images.get(var)
    }

    /// Apply to a polynomial written in the source variables.
    pub fn apply_poly(&self, p: &Poly) -> Result<Poly> {
        if let Some(v) = p.vars().into_iter().find(|v| !self.source.has_var(v)) {
            return Err(Error::UnknownVariable(v));
        }
        Ok(self.target.reduce(&p.substitute(&self.images)))
    }

    pub fn apply(&self, f: &RingElem) -> Result<RingElem> {
        if f.ring() != &self.source {
            return Err(Error::RingMismatch(
                f.ring().to_string(),
                self.source.to_string(),
            ));
        }
        self.target.elem(&self.apply_poly(f.poly())?)
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &RingMap) -> Result<RingMap> {
        if self.target != other.source {
            return Err(Error::RingMismatch(
                self.target.to_string(),
                other.source.to_string(),
            ));
        }
        let images = self
            .images
            .iter()
            .map(|(v, p)| Ok((v.clone(), other.apply_poly(p)?)))
            .collect::<Result<_>>()?;
        Ok(RingMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            images,
        })
    }

    /// Same images, read in other presentations (used to pass to reductions).
    pub fn with_rings(
        &self,
        source: Arc<QuotientRing>,
        target: Arc<QuotientRing>,
    ) -> Result<RingMap> {
        RingMap::new(source, target, self.images.clone())
    }
}

impl fmt::Display for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .filter(|(v, p)| **p != Poly::var(v))
            .map(|(v, p)| format!("{v} -> {p}"))
            .collect();
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Monomial;

    fn images(pairs: &[(&str, &str)]) -> BTreeMap<String, Poly> {
        pairs
            .iter()
            .map(|(v, p)| (v.to_string(), p.parse().unwrap()))
            .collect()
    }

    #[test]
    fn chart_map_of_a_regular_blowup() {
        let src = QuotientRing::ptm(["eps", "x"], "eps", 2).unwrap();
        let tgt = QuotientRing::ptm(["eps'", "x"], "eps'", 2).unwrap();
        let phi = RingMap::new(src.clone(), tgt.clone(), images(&[("eps", "x*eps'")])).unwrap();
        let f = src.parse("eps + x").unwrap();
        assert_eq!(phi.apply(&f).unwrap(), tgt.parse("x*eps' + x").unwrap());
        assert!(phi.apply(&src.parse("eps^2").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn ill_defined_maps_are_rejected() {
        let src = QuotientRing::ptm(["eps", "x"], "eps", 2).unwrap();
        let tgt = QuotientRing::ptm(["eps", "x"], "eps", 3).unwrap();
        let r = RingMap::new(src, tgt, BTreeMap::new());
        assert!(matches!(r, Err(Error::IllDefinedMap(_))));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = QuotientRing::ptm(["eps", "x"], "eps", 3).unwrap();
        let b = QuotientRing::ptm(["eps'", "x"], "eps'", 3).unwrap();
        let c = QuotientRing::ptm(["eps''", "x"], "eps''", 3).unwrap();
        let f = RingMap::new(a.clone(), b, images(&[("eps", "x*eps'")])).unwrap();
        let g = RingMap::new(f.target().clone(), c, images(&[("eps'", "x*eps''")])).unwrap();
        let fg = f.then(&g).unwrap();
        assert_eq!(
            fg.image_of("eps").unwrap(),
            &Poly::monomial(Monomial::from_exponents([("x", 2), ("eps''", 1)]))
        );
        let e = a.parse("eps + x*eps^2").unwrap();
        assert_eq!(
            fg.apply(&e).unwrap(),
            g.apply(&f.apply(&e).unwrap()).unwrap()
        );
    }
}
