use std::collections::BTreeMap;

use crate::blowup::{BlowupTree, Center};
use crate::chart::{Atlas, Chart};
use crate::error::{Error, Result};
use crate::ring::{Monomial, Poly, RationalFunction};

/// A section of the reduction on one chart, given by
/// `s(t_j) = t_j + sum_e a_{j,e} eps^e` with rational coefficients in the
/// reduced coordinates. Missing coefficients are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retract {
    pub chart: String,
    pub sections: BTreeMap<String, BTreeMap<u32, RationalFunction>>,
}

impl Retract {
    /// `s(t) = t` for every coordinate.
    pub fn trivial(chart: &Chart) -> Self {
        Retract {
            chart: chart.id.clone(),
            sections: chart
                .t_vars()
                .map(|t| (t.to_string(), BTreeMap::new()))
                .collect(),
        }
    }

    pub fn coefficient(&self, var: &str, e: u32) -> RationalFunction {
        self.sections
            .get(var)
            .and_then(|s| s.get(&e))
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }

    fn coefficients(&self) -> impl Iterator<Item = (&str, u32, &RationalFunction)> {
        self.sections.iter().flat_map(|(v, s)| {
            s.iter()
                .filter(|(_, a)| !a.is_zero())
                .map(move |(e, a)| (v.as_str(), *e, a))
        })
    }

    /// All coefficients are polynomials.
    pub fn is_regular(&self) -> bool {
        self.coefficients().all(|(_, _, a)| a.as_poly().is_some())
    }

    /// `s(t)` as a polynomial on `chart`, for a regular retract.
    pub fn image(&self, chart: &Chart, var: &str) -> Result<Poly> {
        let mut p = Poly::var(var);
        if let Some(s) = self.sections.get(var) {
            for (e, a) in s {
                let a = a
                    .as_poly()
                    .ok_or_else(|| Error::RetractNotRegular(self.chart.clone()))?;
                p = &p + &a.mul_monomial(&Monomial::power(chart.eps(), *e));
            }
        }
        Ok(p)
    }

    /// Coefficients live in the reduced coordinates of `chart`, with
    /// `1 <= e < h` and monomial denominators in boundary variables.
    fn validate(&self, chart: &Chart) -> Result<()> {
        for (v, e, a) in self.coefficients() {
            if v == chart.eps() || !chart.ring().has_var(v) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
            if e == 0 || e >= chart.h() {
                return Err(Error::InvalidInput(format!(
                    "coefficient of eps^{e} in s({v}) on a chart of thickness {}",
                    chart.h()
                )));
            }
            for u in a.numerator().vars().iter().chain(&a.denominator().vars()) {
                if u == chart.eps() || !chart.ring().has_var(u) {
                    return Err(Error::UnknownVariable(u.clone()));
                }
            }
            let den_ok = a
                .monomial_denominator()
                .is_some_and(|m| m.vars().all(|u| chart.boundary.contains_var(u)));
            if !den_ok {
                return Err(Error::NonMonomialDenominator(a.to_string()));
            }
        }
        Ok(())
    }

    /// The retract after `eps = t^k eps'`: each `a_{j,e}` is multiplied by
    /// `t^(k e)`.
    fn pulled_back(&self, child: &str, m: &Monomial) -> Retract {
        Retract {
            chart: child.to_string(),
            sections: self
                .sections
                .iter()
                .map(|(v, s)| {
                    let s = s
                        .iter()
                        .map(|(e, a)| (*e, a.mul_monomial(&m.pow(*e))))
                        .collect();
                    (v.clone(), s)
                })
                .collect(),
        }
    }
}

/// The retract `s(t) = t` on every chart.
pub fn trivial_generic_retract(x: &Atlas) -> Vec<Retract> {
    x.charts.iter().map(Retract::trivial).collect()
}

/// `n(nu)` for the boundary component `V(t)`: the least `n` with
/// `a_{j,e} t^(n e)` regular along `t` for all `j, e`.
pub fn retract_invariant(chart: &Chart, r: &Retract, t: &str) -> Result<u32> {
    r.validate(chart)?;
    if !chart.boundary.contains_var(t) {
        return Err(Error::NotBoundaryVariable(t.to_string()));
    }
    invariant_unchecked(r, t)
}

fn invariant_unchecked(r: &Retract, t: &str) -> Result<u32> {
    let mut n = 0u32;
    for (_, e, a) in r.coefficients() {
        let v = a.valuation(t)?;
        if v < 0 {
            let need = (-v as u64).div_ceil(u64::from(e));
            n = n.max(u32::try_from(need).expect("small"));
        }
    }
    Ok(n)
}

/// `n(nu)` for every boundary label of `chart`.
pub fn retract_invariants(chart: &Chart, r: &Retract) -> Result<BTreeMap<u32, u32>> {
    r.validate(chart)?;
    chart
        .boundary
        .iter()
        .map(|(l, t)| Ok((l, invariant_unchecked(r, t)?)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct RetractExtension {
    pub tree: BlowupTree,
    /// The extended retract on every leaf.
    pub retracts: BTreeMap<String, Retract>,
    /// The lexicographic maximum of `(n, label)` before each round.
    pub maxima: Vec<(u32, u32)>,
}

/// Blow up boundary components until the retract becomes regular.
///
/// Each round blows up, on every chart, the components attaining the
/// lexicographic maximum of `(n(nu), label)`; the maximum must drop
/// strictly from one round to the next. Charts without an entry in `r` get
/// the trivial retract.
pub fn extend_retract(x: &Atlas, r: &[Retract]) -> Result<RetractExtension> {
    let mut tree = BlowupTree::from_atlas(x)?;
    let mut current: BTreeMap<String, Retract> = x
        .charts
        .iter()
        .map(|c| (c.id.clone(), Retract::trivial(c)))
        .collect();
    for ret in r {
        let chart = tree.chart(&ret.chart)?;
        ret.validate(chart)?;
        current.insert(ret.chart.clone(), ret.clone());
    }
    let mut maxima: Vec<(u32, u32)> = Vec::new();
    loop {
        let mut invariants = BTreeMap::new();
        for leaf in tree.leaves() {
            invariants.insert(
                leaf.clone(),
                retract_invariants(tree.chart(leaf)?, &current[leaf])?,
            );
        }
        let top = invariants
            .values()
            .flat_map(|m| m.iter().map(|(l, n)| (*n, *l)))
            .filter(|(n, _)| *n > 0)
            .max();
        let Some((n, label)) = top else { break };
        if let Some(prev) = maxima.last() {
            if (n, label) >= *prev {
                return Err(Error::InvariantNotDropping(format!(
                    "maximum ({n}, {label}) after ({}, {})",
                    prev.0, prev.1
                )));
            }
        }
        maxima.push((n, label));
        for (leaf, inv) in invariants {
            if inv.get(&label) != Some(&n) {
                continue;
            }
            let t = tree
                .chart(&leaf)?
                .boundary
                .var_of(label)
                .expect("label with an invariant")
                .to_string();
            let m = Monomial::var(&t);
            let idx = tree.apply(&leaf, &Center::divisor(m.clone()))?;
            let child = tree.steps()[idx].children[0].chart.id.clone();
            let ret = current.remove(&leaf).expect("retract on leaf");
            current.insert(child.clone(), ret.pulled_back(&child, &m));
        }
    }
    for (leaf, ret) in &current {
        if !ret.is_regular() {
            return Err(Error::RetractNotRegular(leaf.clone()));
        }
    }
    Ok(RetractExtension {
        tree,
        retracts: current,
        maxima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::OrderedBoundary;

    fn chart(h: u32) -> Chart {
        Chart::ptm("root", ["x", "eps"], "eps", h)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs([(1, "x")]).unwrap())
            .unwrap()
    }

    fn retract(c: &Chart, e: u32, a: &str) -> Retract {
        let mut r = Retract::trivial(c);
        r.sections
            .get_mut("x")
            .unwrap()
            .insert(e, a.parse().unwrap());
        r
    }

    #[test]
    fn invariant_examples() {
        let c = chart(3);
        assert_eq!(retract_invariant(&c, &retract(&c, 1, "(1)/(x)"), "x").unwrap(), 1);
        assert_eq!(retract_invariant(&c, &Retract::trivial(&c), "x").unwrap(), 0);
        assert_eq!(retract_invariant(&c, &retract(&c, 2, "(1)/(x^3)"), "x").unwrap(), 2);
    }

    #[test]
    fn one_round_extension() {
        let c = chart(2);
        let res = extend_retract(&Atlas::single(c.clone(), 2), &[retract(&c, 1, "(1)/(x)")]).unwrap();
        assert_eq!(res.tree.steps().len(), 1);
        assert_eq!(res.maxima, vec![(1, 1)]);
        let leaf = &res.tree.leaves()[0];
        let ret = &res.retracts[leaf];
        let leaf_chart = res.tree.chart(leaf).unwrap();
        assert_eq!(ret.image(leaf_chart, "x").unwrap().to_string(), "eps' + x");
    }

    #[test]
    fn two_round_extension() {
        let c = chart(3);
        let res = extend_retract(&Atlas::single(c.clone(), 3), &[retract(&c, 2, "(1)/(x^3)")]).unwrap();
        assert_eq!(res.maxima, vec![(2, 1), (1, 1)]);
        assert!(res.retracts.values().all(Retract::is_regular));
    }

    #[test]
    fn trivial_retract_needs_nothing() {
        let c = chart(2);
        let atlas = Atlas::single(c, 2);
        let res = extend_retract(&atlas, &trivial_generic_retract(&atlas)).unwrap();
        assert!(res.tree.is_trivial());
    }

    #[test]
    fn non_monomial_denominators_are_rejected() {
        let c = chart(2);
        let r = retract(&c, 1, "(1)/(x + 1)");
        assert!(matches!(
            retract_invariant(&c, &r, "x"),
            Err(Error::NonMonomialDenominator(_))
        ));
    }
}
