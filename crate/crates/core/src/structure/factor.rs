use std::collections::BTreeMap;
use std::fmt;

use crate::blowup::{blowup_reduced_divisor, BlowupTree};
use crate::chart::Chart;
use crate::divisors::MonomialDivisor;
use crate::error::{Error, Result};
use crate::principalize::monomialize_chain;
use crate::ring::{Monomial, Poly, RingElem, RingMap};

/// One reduced-divisor blowup along the boundary component `label`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub label: u32,
    pub var: String,
}

/// A trivial-reduction modification written as successive blowups of
/// boundary components.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModificationPath {
    pub steps: Vec<PathStep>,
}

impl ModificationPath {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Each component as often as its multiplicity, labels ascending.
    pub fn from_divisor(d: &MonomialDivisor, e: &crate::divisors::OrderedBoundary) -> Result<Self> {
        let mut steps = Vec::new();
        for (&label, &n) in d.multiplicities() {
            let var = e
                .var_of(label)
                .ok_or_else(|| Error::InvalidChart(format!("label {label} has no variable")))?;
            for _ in 0..n {
                steps.push(PathStep {
                    label,
                    var: var.to_string(),
                });
            }
        }
        Ok(ModificationPath { steps })
    }
}

impl fmt::Display for ModificationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("({},{})", s.var, s.label))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `phi(eps_X) / eps_Y`, checked to be a trivial-reduction chart map.
fn nil_ratio(y: &Chart, x: &Chart, map: &RingMap) -> Result<RingElem> {
    if map.source() != x.ring() || map.target() != y.ring() {
        return Err(Error::RingMismatch(
            map.source().to_string(),
            x.ring().to_string(),
        ));
    }
    if !x.is_ptm() || !y.is_ptm() {
        return Err(Error::NotTrivialReduction(
            "both charts must be ptm charts".into(),
        ));
    }
    for t in x.t_vars() {
        let img = map.image_of(t).expect("total map");
        if !y.ring().has_var(t) || img.set_zero(&[y.eps()]) != Poly::var(t) {
            return Err(Error::NotTrivialReduction(format!(
                "`{t}` maps to {img}, which does not reduce to `{t}`"
            )));
        }
    }
    let image = map.image_of(x.eps()).expect("total map");
    let a = image
        .div_monomial(&Monomial::var(y.eps()))
        .ok_or_else(|| Error::NotTrivialReduction(format!("{image} is not in ({})", y.eps())))?;
    let a = y.elem(&a)?;
    if a.poly().set_zero(&[y.eps()]).is_zero() {
        return Err(Error::NotTrivialReduction(format!(
            "the ratio {a} vanishes on the reduction"
        )));
    }
    Ok(a)
}

/// The divisor of the reduction of `phi(eps_X) / eps_Y` over the boundary
/// of `x`.
pub fn nil_ratio_divisor(y: &Chart, x: &Chart, map: &RingMap) -> Result<MonomialDivisor> {
    let a = nil_ratio(y, x, map)?;
    let red = a.poly().set_zero(&[y.eps()]);
    red.as_term()
        .and_then(|(_, m)| MonomialDivisor::from_monomial(m, &x.boundary))
        .ok_or_else(|| Error::NotBoundaryMonomial(red.to_string()))
}

struct Split {
    unit: RingElem,
    monomial: Monomial,
    /// `phi(t) / t` for `t` in the support of the monomial.
    ratios: BTreeMap<String, RingElem>,
}

/// `phi(eps_X) = u * M * eps_Y` with `phi(t) = t * w_t` for `t | M`, all of
/// `u` and `w_t` units.
fn try_split(y: &Chart, x: &Chart, map: &RingMap) -> Result<Option<Split>> {
    let a = nil_ratio(y, x, map)?;
    let Some((unit, monomial)) = a.unit_monomial_decompose() else {
        return Ok(None);
    };
    if MonomialDivisor::from_monomial(&monomial, &x.boundary).is_none() {
        return Err(Error::NotBoundaryMonomial(monomial.to_string()));
    }
    let mut ratios = BTreeMap::new();
    for t in monomial.vars() {
        let img = y.elem(map.image_of(t).expect("total map"))?;
        match img.div_monomial(&Monomial::var(t)) {
            Some(w) if w.is_unit() => {
                ratios.insert(t.to_string(), w);
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(Split {
        unit,
        monomial,
        ratios,
    }))
}

#[derive(Clone, Debug)]
pub struct Factorization {
    /// Blowups performed on `Y` before the map splits (often none).
    pub pre_sequence: BlowupTree,
    /// The chart of `Y'` the splitting is computed on.
    pub y_chart: String,
    pub path: ModificationPath,
    /// The path replayed from `X` by reduced-divisor blowups.
    pub replay: BlowupTree,
    /// The isomorphism from the last replayed chart onto `Y'`.
    pub iso: RingMap,
}

impl Factorization {
    pub fn replay_leaf(&self) -> &Chart {
        let id = &self.replay.leaves()[0];
        self.replay.chart(id).expect("leaf")
    }
}

/// Split a trivial-reduction chart map `map: O_X -> O_Y` into blowups of
/// boundary components of `x`.
///
/// With `phi(eps_X) = a eps_Y`, the ratio `a` is written `u * M`; when that
/// fails, `Y` is first blown up along the components of the reduction of
/// `a` (counted with multiplicity) until it succeeds. The components of `M`
/// are then blown up from `x` and the result is compared with `Y'` through
/// the explicit isomorphism `eps_R -> u prod w_t^(-d_t) eps_Y, t -> phi(t)`.
pub fn factor_trivial_modification(x: &Chart, y: &Chart, map: &RingMap) -> Result<Factorization> {
    let mult = nil_ratio_divisor(y, x, map)?;
    let y_root = if y.boundary.is_empty() {
        y.clone().with_boundary(x.boundary.clone())?
    } else {
        y.clone()
    };
    let mut pre = BlowupTree::from_chart(y_root);
    let phi_at = |tree: &BlowupTree, id: &str| -> Result<RingMap> {
        map.then(&tree.composite_map(id)?)
    };
    let y_id = if try_split(y, x, map)?.is_some() {
        y.id.clone()
    } else if y.h() >= 2 {
        monomialize_chain(&mut pre, &y.id, &mult, |tree, id| {
            Ok(try_split(tree.chart(id)?, x, &phi_at(tree, id)?)?.is_some())
        })?
    } else {
        y.id.clone()
    };
    let y_chart = pre.chart(&y_id)?.clone();
    let phi = phi_at(&pre, &y_id)?;
    let split = try_split(&y_chart, x, &phi)?.ok_or_else(|| {
        Error::SplitMismatch(format!(
            "{phi} does not split after monomializing the nil ratio"
        ))
    })?;

    let d = MonomialDivisor::from_monomial(&split.monomial, &x.boundary).expect("checked");
    let path = ModificationPath::from_divisor(&d, &x.boundary)?;
    let mut replay = BlowupTree::from_chart(x.clone());
    let mut cur = x.id.clone();
    for step in &path.steps {
        let chart = replay.chart(&cur)?;
        let s = blowup_reduced_divisor(chart, &Poly::var(&step.var))?;
        let idx = replay.apply(&cur, &s.center)?;
        cur = replay.steps()[idx].children[0].chart.id.clone();
    }
    let r = replay.chart(&cur)?.clone();
    if r.h() != y_chart.h() || r.t_vars().ne(y_chart.t_vars()) {
        return Err(Error::SplitMismatch(format!(
            "replayed ring {} differs from {}",
            r.ring(),
            y_chart.ring()
        )));
    }

    let mut coeff = split.unit.clone();
    for (t, w) in &split.ratios {
        let winv = w.inverse()?;
        coeff = &coeff * &winv.pow(split.monomial.degree(t));
    }
    let mut images: BTreeMap<String, Poly> = BTreeMap::new();
    images.insert(
        r.eps().to_string(),
        coeff.poly().mul_monomial(&Monomial::var(y_chart.eps())),
    );
    for t in r.t_vars() {
        images.insert(t.to_string(), phi.image_of(t).expect("total map").clone());
    }
    let iso = RingMap::new(r.ring().clone(), y_chart.ring().clone(), images)
        .map_err(|e| Error::SplitMismatch(e.to_string()))?;
    let through = replay.composite_map(&cur)?.then(&iso)?;
    if through.images() != phi.images() {
        return Err(Error::SplitMismatch(format!(
            "replay gives {through}, expected {phi}"
        )));
    }
    Ok(Factorization {
        pre_sequence: pre,
        y_chart: y_id,
        path,
        replay,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{Center, CenterSelector};
    use crate::divisors::OrderedBoundary;

    fn chart(vars: &[&str], h: u32, boundary: &[(u32, &str)]) -> Chart {
        Chart::ptm("X", vars.iter().copied(), "eps", h)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs(boundary.iter().cloned()).unwrap())
            .unwrap()
    }

    fn images(pairs: &[(&str, &str)]) -> BTreeMap<String, Poly> {
        pairs
            .iter()
            .map(|(v, p)| (v.to_string(), p.parse().unwrap()))
            .collect()
    }

    #[test]
    fn nil_ratio_examples() {
        let x = chart(&["x", "y"], 2, &[(1, "x"), (2, "y")]);
        let y = Chart::ptm("Y", ["x", "y", "eps'"], "eps'", 2).unwrap();
        let m = |img: &str| {
            RingMap::new(x.ring().clone(), y.ring().clone(), images(&[("eps", img)])).unwrap()
        };
        assert_eq!(
            nil_ratio_divisor(&y, &x, &m("x^2*eps'")).unwrap().to_string(),
            "{1:2}"
        );
        assert_eq!(
            nil_ratio_divisor(&y, &x, &m("x*y*eps'")).unwrap().to_string(),
            "{1:1, 2:1}"
        );
        assert_eq!(
            nil_ratio_divisor(&y, &x, &m("x*eps' + eps'^2")).unwrap().to_string(),
            "{1:1}"
        );
    }

    #[test]
    fn identity_has_empty_path() {
        let x = chart(&["x"], 3, &[(1, "x")]);
        let f = factor_trivial_modification(&x, &x, &RingMap::identity(x.ring().clone())).unwrap();
        assert!(f.path.is_empty());
        assert!(f.pre_sequence.is_trivial());
    }

    #[test]
    fn double_blowup_is_recovered() {
        let x = chart(&["x"], 3, &[(1, "x")]);
        let mut t = BlowupTree::from_chart(x.clone());
        let c = Center::divisor(Monomial::var("x"));
        t.run_sequence(&[
            CenterSelector::everywhere(c.clone()),
            CenterSelector::everywhere(c),
        ])
        .unwrap();
        let leaf = t.leaves()[0].clone();
        let f = factor_trivial_modification(&x, t.chart(&leaf).unwrap(), &t.composite_map(&leaf).unwrap())
            .unwrap();
        assert_eq!(f.path.to_string(), "[(x,1), (x,1)]");
        assert_eq!(f.replay_leaf().ring(), t.chart(&leaf).unwrap().ring());
        assert_eq!(f.iso.to_string(), "id");
    }

    #[test]
    fn unsplit_ratio_is_monomialized_first() {
        let x = chart(&["x"], 2, &[(1, "x")]);
        let y = Chart::ptm("Y", ["x", "eps'"], "eps'", 2).unwrap();
        let phi = RingMap::new(
            x.ring().clone(),
            y.ring().clone(),
            images(&[("eps", "x*eps' + eps'")]),
        );
        // eps -> (x + 1) eps' has a non-monomial ratio: not a modification
        // with boundary-monomial nil ratio
        assert!(matches!(
            phi.map(|m| nil_ratio_divisor(&y, &x, &m)),
            Ok(Err(Error::NotBoundaryMonomial(_)))
        ));
        let phi = RingMap::new(
            x.ring().clone(),
            y.ring().clone(),
            images(&[("eps", "x*eps'"), ("x", "x + eps'")]),
        )
        .unwrap();
        let f = factor_trivial_modification(&x, &y, &phi).unwrap();
        assert_eq!(f.pre_sequence.steps().len(), 1);
        assert_eq!(f.path.len(), 2);
    }
}
