//! Ordered boundaries, monomial divisors and their transforms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::blowup::{BlowupStep, ChildRole};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::ring::{Monomial, Poly, RingElem};

/// Labelled boundary components on one chart.
///
/// `len` counts every label known so far, including labels with no
/// variable on this chart, so labels stay stable across a blowup tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrderedBoundary {
    len: u32,
    labels: BTreeMap<u32, String>,
}

impl OrderedBoundary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, S)>,
        S: Into<String>,
    {
        let mut b = Self::new();
        for (l, v) in pairs {
            b.insert(l, v)?;
        }
        Ok(b)
    }

    /// Number of labels known (the `l` in `E = E_1 + ... + E_l`).
    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn set_len(&mut self, len: u32) {
        self.len = self.len.max(len);
    }

    pub fn insert(&mut self, label: u32, var: impl Into<String>) -> Result<()> {
        let var = var.into();
        if label == 0 {
            return Err(Error::InvalidChart("boundary labels start at 1".into()));
        }
        if self.labels.contains_key(&label) {
            return Err(Error::InvalidChart(format!("label {label} used twice")));
        }
        if self.label_of(&var).is_some() {
            return Err(Error::InvalidChart(format!("`{var}` carries two labels")));
        }
        self.labels.insert(label, var);
        self.len = self.len.max(label);
        Ok(())
    }

    pub fn var_of(&self, label: u32) -> Option<&str> {
        self.labels.get(&label).map(String::as_str)
    }

    pub fn label_of(&self, var: &str) -> Option<u32> {
        self.labels.iter().find(|(_, v)| *v == var).map(|(l, _)| *l)
    }

    pub fn contains_var(&self, var: &str) -> bool {
        self.label_of(var).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.labels.iter().map(|(l, v)| (*l, v.as_str()))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.labels.values().cloned().collect()
    }

    pub(crate) fn remove_var(&mut self, var: &str) {
        self.labels.retain(|_, v| v != var);
    }

    pub(crate) fn rename_var(&mut self, from: &str, to: &str) {
        for v in self.labels.values_mut() {
            if v == from {
                *v = to.to_string();
            }
        }
    }
}

impl fmt::Display for OrderedBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .map(|(l, v)| format!("{l}:{v}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `sum_i n_i D_i` over boundary labels. Zero multiplicities are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialDivisor(BTreeMap<u32, u32>);

impl MonomialDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(m: BTreeMap<u32, u32>) -> Self {
        MonomialDivisor(m.into_iter().filter(|(_, n)| *n > 0).collect())
    }

    pub fn multiplicities(&self) -> &BTreeMap<u32, u32> {
        &self.0
    }

    pub fn get(&self, label: u32) -> u32 {
        self.0.get(&label).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The monomial `prod t_i^{n_i}` on a chart with boundary `e`.
    pub fn to_monomial(&self, e: &OrderedBoundary) -> Result<Monomial> {
        let mut m = Monomial::one();
        for (l, n) in &self.0 {
            let v = e
                .var_of(*l)
                .ok_or_else(|| Error::InvalidChart(format!("label {l} has no variable here")))?;
            m = m.mul(&Monomial::power(v, *n));
        }
        Ok(m)
    }

    /// Multiplicities of a monomial in boundary variables.
    pub fn from_monomial(m: &Monomial, e: &OrderedBoundary) -> Option<Self> {
        let mut out = BTreeMap::new();
        for (v, n) in m.exponents() {
            out.insert(e.label_of(v)?, *n);
        }
        Some(MonomialDivisor(out))
    }
}

impl fmt::Display for MonomialDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(l, n)| format!("{l}:{n}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A Cartier divisor given by one equation per chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierDivisor {
    pub equations: BTreeMap<String, RingElem>,
}

impl CartierDivisor {
    pub fn on_chart(chart: &Chart, f: RingElem) -> Result<Self> {
        if f.ring() != chart.ring() {
            return Err(Error::RingMismatch(
                f.ring().to_string(),
                chart.ring().to_string(),
            ));
        }
        if chart.is_ptm() && f.reduction_poly()?.is_zero() {
            return Err(Error::InvalidInput(format!(
                "{f} is a zero divisor: its reduction vanishes"
            )));
        }
        let mut equations = BTreeMap::new();
        equations.insert(chart.id.clone(), f);
        Ok(CartierDivisor { equations })
    }
}

/// Ideal generators per chart.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subscheme {
    pub gens: BTreeMap<String, Vec<RingElem>>,
}

impl Subscheme {
    pub fn on_chart(chart: &Chart, gens: &[Poly]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| chart.ring().elem(g))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Subscheme::default();
        out.gens.insert(chart.id.clone(), gens);
        Ok(out)
    }

    /// True on a chart when the ideal is the unit ideal there.
    pub fn is_empty_on(&self, chart: &str) -> bool {
        self.gens
            .get(chart)
            .map(|g| ideal_is_unit(g))
            .unwrap_or(true)
    }
}

/// Decides `(gens) = (1)` for ideals whose generators are unit multiples of
/// monomials up to nilpotents, which covers every ideal tracked here: the
/// ideal is the unit ideal iff its reduction is, and a reduction generated by
/// monomials is the unit ideal iff some generator has nonzero constant term
/// and no other term.
pub fn ideal_is_unit(gens: &[RingElem]) -> bool {
    gens.iter().any(|g| match g.ring().ptm_parameter() {
        Some((eps, _)) => {
            let red = g.poly().set_zero(&[eps]);
            !red.is_zero() && red.is_constant()
        }
        None => g.is_unit(),
    })
}

/// `f = unit * prod (t_i + eps a_i)^{m_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncFactorization {
    pub unit: RingElem,
    pub factors: Vec<(RingElem, u32)>,
}

/// Certify `f` as a product of coordinate-plus-nilpotent factors.
///
/// The reduction of `f` must be `c * prod t_i^{m_i}`. A factor `t_i^{m_i}`
/// is stripped termwise when possible; otherwise, for `m_i = 1`, a root
/// `t_i = r` with `r` nilpotent is found by Newton iteration and the linear
/// factor `t_i - r` is divided out.
pub fn is_snc(f: &RingElem, chart: &Chart) -> Option<SncFactorization> {
    if !chart.is_ptm() || f.ring() != chart.ring() {
        return None;
    }
    let red = f.reduction_poly().ok()?;
    let (_, m) = red.as_term()?;
    let mut rest = f.clone();
    let mut factors = Vec::new();
    for (t, mult) in m.exponents() {
        let tm = Monomial::power(t, *mult);
        if let Some(q) = rest.div_monomial(&tm) {
            factors.push((chart.ring().var(t).ok()?, *mult));
            rest = q;
            continue;
        }
        if *mult != 1 {
            return None;
        }
        let (factor, q) = split_linear_factor(&rest, t, chart.eps())?;
        factors.push((factor, 1));
        rest = q;
    }
    rest.is_unit().then_some(SncFactorization {
        unit: rest,
        factors,
    })
}

/// Find nilpotent `r` with `f(t = r) = 0` and return `(t - r, f / (t - r))`.
fn split_linear_factor(f: &RingElem, t: &str, eps: &str) -> Option<(RingElem, RingElem)> {
    let ring = f.ring();
    let eval = |r: &Poly, p: &Poly| -> Poly {
        let mut images = BTreeMap::new();
        images.insert(t.to_string(), r.clone());
        ring.normal_form(&p.substitute(&images)).expect("same ring")
    };
    let deriv = derivative(f.poly(), t);
    let mut r = Poly::zero();
    // quadratic convergence: h steps are far more than enough
    let h = ring.ptm_parameter()?.1;
    for _ in 0..=h + 1 {
        let value = ring.elem(&eval(&r, f.poly())).ok()?;
        if value.is_zero() {
            break;
        }
        let slope = ring.elem(&eval(&r, &deriv)).ok()?;
        let (w, m) = slope.unit_monomial_decompose()?;
        let step = value.div_monomial(&m)?.try_mul(&w.inverse().ok()?).ok()?;
        r = ring.normal_form(&(&r - step.poly())).ok()?;
    }
    if !ring.elem(&eval(&r, f.poly())).ok()?.is_zero() {
        return None;
    }
    if !r.terms().all(|(m, _)| m.contains(eps)) {
        return None;
    }
    let factor = ring.elem(&(&Poly::var(t) - &r)).ok()?;
    let q = divide_monic_linear(f.poly(), t, &r);
    let q = ring.elem(&q).ok()?;
    debug_assert_eq!(&factor * &q, *f);
    Some((factor, q))
}

fn derivative(p: &Poly, t: &str) -> Poly {
    Poly::from_terms(p.terms().filter_map(|(m, c)| {
        let e = m.degree(t);
        (e > 0).then(|| {
            (
                m.without(t).mul(&Monomial::power(t, e - 1)),
                c * crate::ring::Rational::from_integer(e.into()),
            )
        })
    }))
}

/// Synthetic division of `p` by `t - r` as a polynomial in `t`.
fn divide_monic_linear(p: &Poly, t: &str, r: &Poly) -> Poly {
    let coeffs = p.coefficients_in(t);
    let deg = coeffs.keys().next_back().copied().unwrap_or(0);
    let mut q = Poly::zero();
    let mut carry = Poly::zero();
    for k in (1..=deg).rev() {
        let ck = coeffs.get(&k).cloned().unwrap_or_default();
        carry = &ck + &(&carry * r);
        q = &q + &carry.mul_monomial(&Monomial::power(t, k - 1));
    }
    q
}

/// `Some(multiplicities)` when `f = unit * prod t_i^{n_i}` over boundary variables.
pub fn is_monomial(f: &RingElem, e: &OrderedBoundary) -> Option<MonomialDivisor> {
    let (_, m) = f.unit_monomial_decompose()?;
    MonomialDivisor::from_monomial(&m, e)
}

/// `Some(multiplicities)` when the ideal `(gens)` equals `(prod t_i^{n_i})`.
pub fn ideal_monomial(gens: &[RingElem], e: &OrderedBoundary) -> Option<MonomialDivisor> {
    if gens.is_empty() {
        return None;
    }
    for g in gens {
        if let Some((_, m)) = g.unit_monomial_decompose() {
            if gens.iter().all(|o| o.div_monomial(&m).is_some()) {
                return MonomialDivisor::from_monomial(&m, e);
            }
        }
    }
    None
}

/// Pull back and divide by the exceptional equation, once per generator.
pub fn principal_transform(z: &Subscheme, step: &BlowupStep) -> Result<Subscheme> {
    let gens = z
        .gens
        .get(&step.parent)
        .ok_or_else(|| Error::UnknownChart(step.parent.clone()))?;
    let mut out = Subscheme::default();
    for child in &step.children {
        let mut new = Vec::with_capacity(gens.len());
        for g in gens {
            new.push(transform_generator(g, &child.map, &child.exceptional)?);
        }
        out.gens.insert(child.chart.id.clone(), new);
    }
    Ok(out)
}

pub(crate) fn transform_generator(
    g: &RingElem,
    map: &crate::ring::RingMap,
    exceptional: &Monomial,
) -> Result<RingElem> {
    let pulled = map.apply(g)?;
    pulled
        .div_monomial(exceptional)
        .ok_or_else(|| Error::NotAdmissible(format!("{pulled} is not divisible by {exceptional}")))
}

/// Recompute the boundaries a step assigns to its children.
pub fn total_transform_boundary(
    e: &OrderedBoundary,
    step: &BlowupStep,
) -> Vec<(String, OrderedBoundary)> {
    step.children
        .iter()
        .map(|c| {
            let b = match &c.role {
                ChildRole::Regular { var, renamed } => {
                    regular_boundary(e, var, renamed, step.new_label.expect("regular step"))
                }
                ChildRole::TrivialReduction | ChildRole::LogT { .. } => e.clone(),
                ChildRole::LogEps { var, renamed } => {
                    let mut b = e.clone();
                    b.rename_var(var, renamed);
                    b
                }
            };
            (c.chart.id.clone(), b)
        })
        .collect()
}

/// Boundary of the `t`-chart of a regular blowup: `t` leaves its old label
/// and takes the new one; each other center variable keeps its label under
/// its new name.
pub(crate) fn regular_boundary(
    e: &OrderedBoundary,
    t: &str,
    renamed: &BTreeMap<String, String>,
    new_label: u32,
) -> OrderedBoundary {
    let mut b = e.clone();
    b.remove_var(t);
    for (from, to) in renamed {
        b.rename_var(from, to);
    }
    b.insert(new_label, t).expect("fresh label");
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;

    fn chart(vars: &[&str], h: u32, boundary: &[(u32, &str)]) -> Chart {
        Chart::ptm("root", vars.iter().copied(), "eps", h)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs(boundary.iter().cloned()).unwrap())
            .unwrap()
    }

    #[test]
    fn snc_examples() {
        let c = chart(&["x", "y", "eps"], 2, &[(1, "x"), (2, "y")]);
        let f = c.ring().parse("x*y").unwrap();
        let s = is_snc(&f, &c).unwrap();
        assert_eq!(s.factors.len(), 2);
        assert!(is_snc(&c.ring().parse("x*y + eps").unwrap(), &c).is_none());
        let g = c.ring().parse("x*y + eps*y").unwrap();
        let s = is_snc(&g, &c).unwrap();
        assert_eq!(s.factors[0].0, c.ring().parse("x + eps").unwrap());
        assert_eq!(s.factors[1].0, c.ring().parse("y").unwrap());
    }

    #[test]
    fn monomial_examples() {
        let c = chart(&["x", "y", "eps"], 2, &[(1, "x"), (2, "y")]);
        let d = is_monomial(&c.ring().parse("x^2*y^3").unwrap(), &c.boundary).unwrap();
        assert_eq!(d, MonomialDivisor::from_map([(1, 2), (2, 3)].into()));
        let c = chart(&["x", "y", "eps"], 2, &[(1, "y")]);
        assert!(is_monomial(&c.ring().parse("y^2 + eps").unwrap(), &c.boundary).is_none());
    }

    #[test]
    fn boundary_rejects_repeats() {
        let mut b = OrderedBoundary::from_pairs([(1, "x")]).unwrap();
        assert!(b.insert(2, "x").is_err());
        assert!(b.insert(1, "y").is_err());
        assert!(b.insert(3, "y").is_ok());
        assert_eq!(b.len(), 3);
    }
}
