//! Ptm charts `k[eps, t...]/(eps^h)`, their reductions, and atlases.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::divisors::OrderedBoundary;
use crate::error::{Error, Result};
use crate::ring::{Monomial, Poly, QuotientRing, RingElem, RingMap};

/// One affine chart with a designated nilpotent parameter.
///
/// On a ptm chart the relation is exactly `eps^h`. Charts produced by log
/// blowups have a relation `eps^h * prod t^(h d)` instead; they carry the
/// monomial ideal of their distinguished component in `component`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub id: String,
    ring: Arc<QuotientRing>,
    eps: String,
    h: u32,
    pub boundary: OrderedBoundary,
    pi: Option<RingElem>,
    component: Option<Monomial>,
}

impl Chart {
    /// `k[vars]/(eps^h)`; `eps` is added to `vars` if missing.
    pub fn ptm<I, S>(id: impl Into<String>, vars: I, eps: &str, h: u32) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        if !vars.iter().any(|v| v == eps) {
            vars.push(eps.to_string());
        }
        let ring = QuotientRing::ptm(vars, eps, h)?;
        Ok(Chart {
            id: id.into(),
            ring,
            eps: eps.to_string(),
            h,
            boundary: OrderedBoundary::new(),
            pi: None,
            component: None,
        })
    }

    /// A chart over an arbitrary monomial relation in which `eps` occurs.
    pub fn general(
        id: impl Into<String>,
        ring: Arc<QuotientRing>,
        eps: &str,
        h: u32,
    ) -> Result<Self> {
        if !ring.has_var(eps) || ring.relation().degree(eps) == 0 {
            return Err(Error::InvalidChart(format!(
                "`{eps}` does not occur in the relation of {ring}"
            )));
        }
        Ok(Chart {
            id: id.into(),
            ring,
            eps: eps.to_string(),
            h,
            boundary: OrderedBoundary::new(),
            pi: None,
            component: None,
        })
    }

    pub fn with_boundary(mut self, boundary: OrderedBoundary) -> Result<Self> {
        for (l, v) in boundary.iter() {
            if v == self.eps || !self.ring.has_var(v) {
                return Err(Error::InvalidChart(format!(
                    "boundary label {l} uses `{v}`, which is not a coordinate of {}",
                    self.ring
                )));
            }
        }
        self.boundary = boundary;
        Ok(self)
    }

    pub fn with_pi(mut self, pi: &Poly) -> Result<Self> {
        self.pi = Some(self.ring.elem(pi)?);
        Ok(self)
    }

    pub fn with_component(mut self, component: Option<Monomial>) -> Self {
        self.component = component;
        self
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn eps(&self) -> &str {
        &self.eps
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn pi(&self) -> Option<&RingElem> {
        self.pi.as_ref()
    }

    pub fn component(&self) -> Option<&Monomial> {
        self.component.as_ref()
    }

    /// Relation is exactly `eps^h`.
    pub fn is_ptm(&self) -> bool {
        *self.ring.relation() == Monomial::power(&self.eps, self.h)
    }

    /// Coordinates other than the nilpotent parameter.
    pub fn t_vars(&self) -> impl Iterator<Item = &str> {
        self.ring
            .vars()
            .iter()
            .map(String::as_str)
            .filter(move |v| *v != self.eps)
    }

    /// Minimal `h` with `eps^h = 0`.
    pub fn thickness(&self) -> u32 {
        let eps = Poly::var(&self.eps);
        assert!(
            self.ring.reduce(&eps.pow(self.h)).is_zero(),
            "eps^h must vanish on {}",
            self.id
        );
        assert!(
            self.h == 1 || !self.ring.reduce(&eps.pow(self.h - 1)).is_zero(),
            "eps^(h-1) must not vanish on {}",
            self.id
        );
        self.h
    }

    /// The reduced chart `k[eps, t...]/(eps)`, keeping the id and boundary.
    pub fn reduction(&self) -> Result<Chart> {
        if !self.is_ptm() {
            return Err(Error::NotPtm(self.id.clone()));
        }
        let ring = QuotientRing::ptm(self.ring.vars().iter().cloned(), &self.eps, 1)?;
        let pi = match &self.pi {
            Some(p) => Some(ring.elem(p.poly())?),
            None => None,
        };
        Ok(Chart {
            id: self.id.clone(),
            ring,
            eps: self.eps.clone(),
            h: 1,
            boundary: self.boundary.clone(),
            pi,
            component: None,
        })
    }

    pub fn elem(&self, p: &Poly) -> Result<RingElem> {
        self.ring.elem(p)
    }

    pub fn parse(&self, s: &str) -> Result<RingElem> {
        self.ring.parse(s)
    }

    /// Same chart under another id.
    pub fn renamed(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Pull `pi` back along `map` into this chart's ring.
    pub(crate) fn set_pi_from(&mut self, pi: Option<&RingElem>, map: &RingMap) -> Result<()> {
        self.pi = match pi {
            Some(p) => Some(map.apply(p)?),
            None => None,
        };
        Ok(())
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.ring)?;
        if !self.boundary.is_empty() {
            write!(f, " E={}", self.boundary)?;
        }
        if let Some(pi) = &self.pi {
            write!(f, " pi={pi}")?;
        }
        if let Some(c) = &self.component {
            write!(f, " component=({c})")?;
        }
        Ok(())
    }
}

/// A hypersurface `V(f)` in affine space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfacePresentation {
    pub ambient_vars: Vec<String>,
    pub f: Poly,
    pub declared_nilpotent: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtmVerdict {
    pub ok: bool,
    pub witness: Option<(String, u32)>,
    pub reason: String,
}

impl PtmVerdict {
    fn fail(reason: impl Into<String>) -> Self {
        PtmVerdict {
            ok: false,
            witness: None,
            reason: reason.into(),
        }
    }
}

/// Decide whether `k[vars]/(f)` is a ptm chart, globally on the chart.
///
/// In a polynomial ring the units are the nonzero constants, so `f` must be
/// `c * v^n` for a single variable `v`.
pub fn verify_ptm(p: &HypersurfacePresentation) -> PtmVerdict {
    if p.f.is_zero() {
        return PtmVerdict::fail("f is zero");
    }
    if let Some(v) = p.f.vars().into_iter().find(|v| !p.ambient_vars.contains(v)) {
        return PtmVerdict::fail(format!("`{v}` is not an ambient variable"));
    }
    let Some((_, m)) = p.f.as_term() else {
        return PtmVerdict::fail(format!("{} is not a unit times a monomial", p.f));
    };
    let Some((v, n)) = m.as_pure_power() else {
        return PtmVerdict::fail(format!("{m} is not a power of a single variable"));
    };
    if let Some(d) = &p.declared_nilpotent {
        if d != v {
            return PtmVerdict::fail(format!(
                "declared nilpotent `{d}` but f is a power of `{v}`"
            ));
        }
    }
    PtmVerdict {
        ok: true,
        witness: Some((v.to_string(), n)),
        reason: String::new(),
    }
}

impl HypersurfacePresentation {
    /// The ptm chart `k[vars]/(v^n)` certified by [`verify_ptm`].
    pub fn to_chart(&self, id: &str) -> Result<Chart> {
        let verdict = verify_ptm(self);
        let (v, n) = verdict
            .witness
            .ok_or_else(|| Error::InvalidChart(verdict.reason))?;
        Chart::ptm(id, self.ambient_vars.iter().cloned(), &v, n)
    }
}

/// A transition or structure map between two charts of an atlas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasMap {
    pub source: String,
    pub target: String,
    pub map: RingMap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Atlas {
    pub charts: Vec<Chart>,
    pub maps: Vec<AtlasMap>,
    pub base_exponent: u32,
}

impl Atlas {
    pub fn single(chart: Chart, base_exponent: u32) -> Self {
        Atlas {
            charts: vec![chart],
            maps: Vec::new(),
            base_exponent,
        }
    }

    pub fn chart(&self, id: &str) -> Option<&Chart> {
        self.charts.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtlasDiagnostic {
    DuplicateChart(String),
    UnknownChart(String),
    RingMismatch {
        source: String,
        target: String,
    },
    IllDefinedMap {
        source: String,
        target: String,
    },
    PiMismatch {
        source: String,
        target: String,
    },
    PiNotNilpotent {
        chart: String,
    },
    BoundaryMismatch {
        source: String,
        target: String,
        label: u32,
    },
}

impl fmt::Display for AtlasDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateChart(c) => write!(f, "chart `{c}` appears twice"),
            Self::UnknownChart(c) => write!(f, "map refers to unknown chart `{c}`"),
            Self::RingMismatch { source, target } => {
                write!(
                    f,
                    "map {source} -> {target} is not between the charts' rings"
                )
            }
            Self::IllDefinedMap { source, target } => {
                write!(f, "map {source} -> {target} does not kill the relation")
            }
            Self::PiMismatch { source, target } => {
                write!(f, "map {source} -> {target} does not send pi to pi")
            }
            Self::PiNotNilpotent { chart } => write!(f, "pi^n is nonzero on `{chart}`"),
            Self::BoundaryMismatch {
                source,
                target,
                label,
            } => write!(
                f,
                "map {source} -> {target} does not respect boundary label {label}"
            ),
        }
    }
}

/// Consistency checks; an empty list means the atlas is consistent.
pub fn check_atlas(a: &Atlas) -> Vec<AtlasDiagnostic> {
    let mut out = Vec::new();
    let mut seen = BTreeMap::new();
    for c in &a.charts {
        if seen.insert(c.id.clone(), c).is_some() {
            out.push(AtlasDiagnostic::DuplicateChart(c.id.clone()));
        }
        if let Some(pi) = c.pi() {
            if a.base_exponent > 0 && !pi.pow(a.base_exponent).is_zero() {
                out.push(AtlasDiagnostic::PiNotNilpotent {
                    chart: c.id.clone(),
                });
            }
        }
    }
    for m in &a.maps {
        let (Some(src), Some(tgt)) = (seen.get(&m.source), seen.get(&m.target)) else {
            for id in [&m.source, &m.target] {
                if !seen.contains_key(id) {
                    out.push(AtlasDiagnostic::UnknownChart(id.clone()));
                }
            }
            continue;
        };
        let pair = || (m.source.clone(), m.target.clone());
        if m.map.source() != src.ring() || m.map.target() != tgt.ring() {
            let (source, target) = pair();
            out.push(AtlasDiagnostic::RingMismatch { source, target });
            continue;
        }
        if !m.map.is_well_defined() {
            let (source, target) = pair();
            out.push(AtlasDiagnostic::IllDefinedMap { source, target });
        }
        if let (Some(ps), Some(pt)) = (src.pi(), tgt.pi()) {
            if m.map.apply(ps).ok().as_ref() != Some(pt) {
                let (source, target) = pair();
                out.push(AtlasDiagnostic::PiMismatch { source, target });
            }
        }
        for (label, v) in src.boundary.iter() {
            if let Some(w) = tgt.boundary.var_of(label) {
                let img = m.map.image_of(v).cloned().unwrap_or_default();
                if img.div_monomial(&Monomial::var(w)).is_none() {
                    let (source, target) = pair();
                    out.push(AtlasDiagnostic::BoundaryMismatch {
                        source,
                        target,
                        label,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn thickness_examples() {
        assert_eq!(
            Chart::ptm("a", ["eps", "t"], "eps", 3).unwrap().thickness(),
            3
        );
        assert_eq!(Chart::ptm("b", ["eps"], "eps", 1).unwrap().thickness(), 1);
        assert_eq!(
            Chart::ptm("c", ["eps", "x", "y"], "eps", 5)
                .unwrap()
                .thickness(),
            5
        );
    }

    #[test]
    fn reduction_examples() {
        let c = Chart::ptm("a", ["eps", "x"], "eps", 2)
            .unwrap()
            .with_pi(&"eps*x".parse().unwrap())
            .unwrap();
        let r = c.reduction().unwrap();
        assert_eq!(r.thickness(), 1);
        assert!(r.pi().unwrap().is_zero());
        assert_eq!(r.reduction().unwrap(), r);
    }

    fn hyper(vars: &[&str], f: &str) -> HypersurfacePresentation {
        HypersurfacePresentation {
            ambient_vars: vars.iter().map(|s| s.to_string()).collect(),
            f: f.parse().unwrap(),
            declared_nilpotent: None,
        }
    }

    #[test]
    fn verify_ptm_examples() {
        let v = verify_ptm(&hyper(&["x", "y"], "y^3"));
        assert!(v.ok);
        assert_eq!(v.witness, Some(("y".into(), 3)));
        assert!(!verify_ptm(&hyper(&["x", "y"], "x*y")).ok);
        assert!(!verify_ptm(&hyper(&["x", "y"], "y^2 + x*y^2")).ok);
    }

    #[test]
    fn atlas_pi_mismatch_is_reported() {
        let a = Chart::ptm("a", ["eps", "x"], "eps", 2)
            .unwrap()
            .with_pi(&"eps".parse().unwrap())
            .unwrap();
        let b = a
            .clone()
            .renamed("b")
            .with_pi(&"eps*x".parse().unwrap())
            .unwrap();
        let map = RingMap::new(a.ring().clone(), b.ring().clone(), BTreeMap::new()).unwrap();
        let atlas = Atlas {
            charts: vec![a.clone(), b],
            maps: vec![AtlasMap {
                source: "a".into(),
                target: "b".into(),
                map,
            }],
            base_exponent: 2,
        };
        assert_eq!(check_atlas(&atlas).len(), 1);
        assert!(check_atlas(&Atlas::single(a, 2)).is_empty());
    }
}
