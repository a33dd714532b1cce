//! Principalization of monomial ideals on the reduction, the pushforward of
//! its centers to ptm charts, and monomialization of divisors.

use std::collections::{BTreeMap, BTreeSet};

use crate::blowup::{BlowupTree, Center, CenterSelector};
use crate::chart::{Atlas, Chart};
use crate::divisors::{
    is_monomial, transform_generator, CartierDivisor, MonomialDivisor, OrderedBoundary, Subscheme,
};
use crate::error::{Error, Result};
use crate::ring::{Monomial, RingElem};

/// Default bound on the number of blowups an oracle may perform.
pub const DEFAULT_FUEL: usize = 200;

/// A principalization method for ideals on reduced charts.
///
/// Given reduced charts (carrying their boundaries) and an ideal on them, it
/// returns regular centers, in order, whose successive principal transforms
/// make the ideal principal and monomial on every resulting chart. Chart ids
/// in the selectors follow the naming of [`BlowupTree`].
pub trait ReductionOracle {
    fn centers(&self, reduced: &Atlas, z: &Subscheme) -> Result<Vec<CenterSelector>>;
}

impl<F> ReductionOracle for F
where
    F: Fn(&Atlas, &Subscheme) -> Result<Vec<CenterSelector>>,
{
    fn centers(&self, reduced: &Atlas, z: &Subscheme) -> Result<Vec<CenterSelector>> {
        self(reduced, z)
    }
}

/// The built-in combinatorial oracle for monomial ideals.
///
/// While some leaf has a non-principal ideal, it takes the first such leaf,
/// removes the monomial gcd, lets `d` be the order of what remains and blows
/// up `V(t_S)` for the first smallest set `S` of variables on which every
/// generator has order at least `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialOracle {
    pub fuel: usize,
}

impl Default for MonomialOracle {
    fn default() -> Self {
        MonomialOracle { fuel: DEFAULT_FUEL }
    }
}

impl ReductionOracle for MonomialOracle {
    fn centers(&self, reduced: &Atlas, z: &Subscheme) -> Result<Vec<CenterSelector>> {
        monomial_oracle_with_fuel(reduced, z, self.fuel)
    }
}

/// [`MonomialOracle`] with the default fuel.
pub fn monomial_oracle(atlas: &Atlas, z: &Subscheme) -> Result<Vec<CenterSelector>> {
    monomial_oracle_with_fuel(atlas, z, DEFAULT_FUEL)
}

pub fn monomial_oracle_with_fuel(
    atlas: &Atlas,
    z: &Subscheme,
    fuel: usize,
) -> Result<Vec<CenterSelector>> {
    let charts = atlas
        .charts
        .iter()
        .map(Chart::reduction)
        .collect::<Result<Vec<_>>>()?;
    let mut tree = BlowupTree::new(charts)?;
    let mut gens = BTreeMap::new();
    for (id, g) in &z.gens {
        let chart = tree.chart(id)?;
        let reduced = g
            .iter()
            .map(|e| chart.elem(&e.poly().set_zero(&[chart.eps()])))
            .collect::<Result<Vec<_>>>()?;
        gens.insert(id.clone(), reduced);
    }
    let mut out = Vec::new();
    loop {
        let mut next = None;
        for leaf in tree.leaves() {
            if let Some(g) = gens.get(leaf) {
                let monos = reduced_monomials(g, tree.chart(leaf)?)?;
                if monos.is_empty() {
                    return Err(Error::NotNowhereDense(leaf.clone()));
                }
                if !residual_is_unit(&monos) {
                    next = Some((leaf.clone(), max_order_center(&monos)));
                    break;
                }
            }
        }
        let Some((leaf, s)) = next else { break };
        if out.len() >= fuel {
            return Err(Error::FuelExhausted {
                steps: out.len(),
                partial: Box::new(tree),
            });
        }
        let center = Center::Regular(s);
        let idx = tree.apply(&leaf, &center)?;
        let g = gens.remove(&leaf).expect("selected leaf has generators");
        for child in &tree.steps()[idx].children {
            let new = g
                .iter()
                .map(|e| transform_generator(e, &child.map, &child.exceptional))
                .collect::<Result<Vec<_>>>()?;
            gens.insert(child.chart.id.clone(), new);
        }
        out.push(CenterSelector::on(leaf, center));
    }
    Ok(out)
}

/// The monomials of the nonzero reductions of `gens`.
fn reduced_monomials(gens: &[RingElem], chart: &Chart) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    for g in gens {
        let red = g.poly().set_zero(&[chart.eps()]);
        if red.is_zero() {
            continue;
        }
        match red.as_term() {
            Some((_, m)) => out.push(m.clone()),
            None => return Err(Error::NonMonomialInput(format!("{red} on `{}`", chart.id))),
        }
    }
    Ok(out)
}

fn monomial_gcd(monos: &[Monomial]) -> Monomial {
    let mut it = monos.iter();
    let first = it.next().cloned().unwrap_or_else(Monomial::one);
    it.fold(first, |acc, m| acc.gcd(m))
}

/// The ideal `(monos)` is principal: its gcd is one of the generators.
fn residual_is_unit(monos: &[Monomial]) -> bool {
    let g = monomial_gcd(monos);
    monos.iter().any(|m| *m == g)
}

fn max_order_center(monos: &[Monomial]) -> BTreeSet<String> {
    let g = monomial_gcd(monos);
    let residual: Vec<Monomial> = monos
        .iter()
        .map(|m| m.div(&g).expect("gcd divides"))
        .collect();
    let d = residual
        .iter()
        .map(Monomial::total_degree)
        .min()
        .expect("nonempty");
    let vars: Vec<String> = residual
        .iter()
        .flat_map(|m| m.vars().map(str::to_string))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for size in 1..=vars.len() {
        let mut found = None;
        for_each_subset(&vars, size, &mut |s: &[&String]| {
            if found.is_none()
                && residual
                    .iter()
                    .all(|m| s.iter().map(|v| m.degree(v)).sum::<u32>() >= d)
            {
                found = Some(s.iter().map(|v| (*v).clone()).collect());
            }
        });
        if let Some(s) = found {
            return s;
        }
    }
    unreachable!("the set of all variables always qualifies")
}

/// Visit the `k`-subsets of `items` in lexicographic order.
fn for_each_subset<'a>(items: &'a [String], k: usize, f: &mut dyn FnMut(&[&'a String])) {
    fn go<'a>(
        items: &'a [String],
        start: usize,
        k: usize,
        cur: &mut Vec<&'a String>,
        f: &mut dyn FnMut(&[&'a String]),
    ) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(&items[i]);
            go(items, i + 1, k, cur, f);
            cur.pop();
        }
    }
    go(items, 0, k, &mut Vec::new(), f);
}

#[derive(Clone, Debug)]
pub struct PrincipalizationResult {
    pub tree: BlowupTree,
    /// Boundary of every leaf.
    pub final_boundary: BTreeMap<String, OrderedBoundary>,
    /// Blowups of a global center that were empty on some leaf.
    pub skipped: usize,
    /// The principal transform of the input on every leaf.
    pub transform: Subscheme,
}

/// Principalize `z` on the reduction with `oracle` and lift every center
/// `V(t_S)` to the regular center `V(eps, t_S)` on the ptm charts.
pub fn pushforward_principalization(
    x: &Atlas,
    z: &Subscheme,
    oracle: &dyn ReductionOracle,
) -> Result<PrincipalizationResult> {
    let mut tree = BlowupTree::from_atlas(x)?;
    let (transform, skipped) = principalize_leaves(&mut tree, z, oracle)?;
    let final_boundary = tree
        .leaf_charts()
        .map(|c| (c.id.clone(), c.boundary.clone()))
        .collect();
    Ok(PrincipalizationResult {
        tree,
        final_boundary,
        skipped,
        transform,
    })
}

/// Run the oracle on the current leaves of `tree` and lift its centers.
/// Leaves without generators in `z` carry the unit ideal. Returns the
/// principal transform on the new leaves and the number of skipped blowups.
pub(crate) fn principalize_leaves(
    tree: &mut BlowupTree,
    z: &Subscheme,
    oracle: &dyn ReductionOracle,
) -> Result<(Subscheme, usize)> {
    let mut gens: BTreeMap<String, Vec<RingElem>> = BTreeMap::new();
    for (id, g) in &z.gens {
        if !tree.is_leaf(id) {
            return Err(Error::UnknownChart(id.clone()));
        }
        let chart = tree.chart(id)?;
        if let Some(e) = g.iter().find(|e| e.ring() != chart.ring()) {
            return Err(Error::RingMismatch(
                e.ring().to_string(),
                chart.ring().to_string(),
            ));
        }
        if reduced_monomials_any(g, chart) {
            gens.insert(id.clone(), g.clone());
        } else {
            return Err(Error::NotNowhereDense(id.clone()));
        }
    }

    let reduced = Atlas {
        charts: tree
            .leaf_charts()
            .map(Chart::reduction)
            .collect::<Result<_>>()?,
        maps: Vec::new(),
        base_exponent: 0,
    };
    let selectors = oracle.centers(&reduced, &Subscheme { gens: gens.clone() })?;

    let mut skipped = 0;
    for sel in &selectors {
        let Center::Regular(s) = &sel.center else {
            return Err(Error::OracleFailure(format!(
                "center {} is not a coordinate center",
                sel.center
            )));
        };
        let targets: Vec<String> = match &sel.chart {
            Some(id) if tree.is_leaf(id) => vec![id.clone()],
            Some(id) => {
                return Err(Error::OracleFailure(format!("`{id}` is not a current chart")))
            }
            None => tree.leaves().to_vec(),
        };
        let label = tree.next_label();
        for leaf in targets {
            let chart = tree.chart(&leaf)?;
            let admissible = s.iter().all(|v| chart.ring().has_var(v))
                && gens
                    .get(&leaf)
                    .is_some_and(|g| !crate::divisors::ideal_is_unit(g) && vanish_on(g, chart, s));
            if !admissible {
                if sel.chart.is_some() {
                    return Err(Error::OracleFailure(format!(
                        "center {} is not contained in the transform on `{leaf}`",
                        sel.center
                    )));
                }
                skipped += 1;
                continue;
            }
            let idx = tree.apply_labeled(&leaf, &sel.center, label)?;
            let g = gens.remove(&leaf).expect("admissible leaf has generators");
            for child in &tree.steps()[idx].children {
                let new = g
                    .iter()
                    .map(|e| transform_generator(e, &child.map, &child.exceptional))
                    .collect::<Result<Vec<_>>>()?;
                gens.insert(child.chart.id.clone(), new);
            }
        }
    }

    for (leaf, g) in &gens {
        let monos = reduced_monomials(g, tree.chart(leaf)?)?;
        if !residual_is_unit(&monos) {
            return Err(Error::OracleFailure(format!(
                "transform on `{leaf}` is not principal"
            )));
        }
    }
    Ok((Subscheme { gens }, skipped))
}

fn reduced_monomials_any(gens: &[RingElem], chart: &Chart) -> bool {
    gens.iter()
        .any(|g| !g.poly().set_zero(&[chart.eps()]).is_zero())
}

/// Every generator vanishes on `V(eps, t_S)`.
fn vanish_on(gens: &[RingElem], chart: &Chart, s: &BTreeSet<String>) -> bool {
    let mut zero: Vec<&str> = s.iter().map(String::as_str).collect();
    zero.push(chart.eps());
    gens.iter().all(|g| g.poly().set_zero(&zero).is_zero())
}

/// The monic monomial generating the reduction of a principal monomial
/// ideal, or `None` when the reduction is not of that form.
pub(crate) fn principal_reduction(gens: &[RingElem], chart: &Chart) -> Option<Monomial> {
    let monos = reduced_monomials(gens, chart).ok()?;
    if monos.is_empty() || !residual_is_unit(&monos) {
        return None;
    }
    Some(monomial_gcd(&monos))
}

/// Give boundary labels to the variables of `monos[leaf]` that are not yet
/// boundary variables on that leaf, one new label per variable name.
pub(crate) fn bootstrap_labels(
    tree: &mut BlowupTree,
    monos: &BTreeMap<String, Monomial>,
) -> Result<()> {
    let mut assigned: BTreeMap<String, u32> = BTreeMap::new();
    for (leaf, m) in monos {
        for v in m.vars() {
            if tree.chart(leaf)?.boundary.contains_var(v) {
                continue;
            }
            let label = match assigned.get(v) {
                Some(l) => *l,
                None => {
                    let l = tree.allocate_label();
                    assigned.insert(v.to_string(), l);
                    l
                }
            };
            tree.label_leaf_var(leaf, v, label)?;
        }
    }
    Ok(())
}

/// Trivial-reduction blowups along the boundary components of `mult`, labels
/// ascending and each component as often as its multiplicity, starting at
/// `leaf`. Before every blowup `done` is consulted on the current chart and
/// the sequence stops once it holds. Returns the final chart id.
pub(crate) fn monomialize_chain(
    tree: &mut BlowupTree,
    leaf: &str,
    mult: &MonomialDivisor,
    mut done: impl FnMut(&BlowupTree, &str) -> Result<bool>,
) -> Result<String> {
    let mut cur = leaf.to_string();
    for (&label, &n) in mult.multiplicities() {
        for _ in 0..n {
            if done(tree, &cur)? {
                return Ok(cur);
            }
            let chart = tree.chart(&cur)?;
            let var = chart
                .boundary
                .var_of(label)
                .ok_or_else(|| {
                    Error::InvalidChart(format!("label {label} has no variable on `{cur}`"))
                })?
                .to_string();
            let idx = tree.apply(&cur, &Center::divisor(Monomial::var(&var)))?;
            cur = tree.steps()[idx].children[0].chart.id.clone();
        }
    }
    Ok(cur)
}

#[derive(Clone, Debug)]
pub struct MonomializationResult {
    pub tree: BlowupTree,
    /// The transformed divisor on every leaf that carries an equation.
    pub divisor: CartierDivisor,
    /// Certified multiplicities on those leaves.
    pub multiplicities: BTreeMap<String, MonomialDivisor>,
}

impl MonomializationResult {
    /// The multiplicity map, when it is the same on every leaf.
    pub fn common_multiplicities(&self) -> Option<&MonomialDivisor> {
        let mut it = self.multiplicities.values();
        let first = it.next()?;
        it.all(|m| m == first).then_some(first)
    }
}

/// Make `d` boundary-monomial by trivial-reduction blowups.
///
/// The reduction of `d` must be `c * prod t_i^{n_i}` over boundary variables.
/// Every boundary component is then blown up `n_i` times (labels ascending),
/// after which `d = prod t_i^{n_i} * (1 + eps' a)` on each leaf. Charts of
/// thickness one are already reduced and are left alone.
pub fn monomialize_divisor(x: &Atlas, d: &CartierDivisor) -> Result<MonomializationResult> {
    let mut tree = BlowupTree::from_atlas(x)?;
    let mut leaves = Vec::new();
    for (id, f) in &d.equations {
        let chart = tree.chart(id)?;
        if f.ring() != chart.ring() {
            return Err(Error::RingMismatch(
                f.ring().to_string(),
                chart.ring().to_string(),
            ));
        }
        let mult = reduction_multiplicities(f, chart)?;
        let end = if chart.h() >= 2 {
            monomialize_chain(&mut tree, id, &mult, |_, _| Ok(false))?
        } else {
            id.clone()
        };
        leaves.push((id.clone(), end, mult));
    }
    let mut divisor = CartierDivisor {
        equations: BTreeMap::new(),
    };
    let mut multiplicities = BTreeMap::new();
    for (root, leaf, mult) in leaves {
        let f = tree.composite_map(&leaf)?.apply(&d.equations[&root])?;
        let chart = tree.chart(&leaf)?;
        match is_monomial(&f, &chart.boundary) {
            Some(m) if m == mult => {}
            _ => return Err(Error::ReductionNotMonomial(leaf)),
        }
        divisor.equations.insert(leaf.clone(), f);
        multiplicities.insert(leaf, mult);
    }
    Ok(MonomializationResult {
        tree,
        divisor,
        multiplicities,
    })
}

/// Multiplicities of the reduction of `f` over the boundary of `chart`.
pub(crate) fn reduction_multiplicities(f: &RingElem, chart: &Chart) -> Result<MonomialDivisor> {
    let red = f.poly().set_zero(&[chart.eps()]);
    red.as_term()
        .and_then(|(_, m)| MonomialDivisor::from_monomial(m, &chart.boundary))
        .ok_or_else(|| Error::ReductionNotMonomial(chart.id.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Poly;

    fn chart(vars: &[&str], h: u32, boundary: &[(u32, &str)]) -> Chart {
        Chart::ptm("root", vars.iter().copied(), "eps", h)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs(boundary.iter().cloned()).unwrap())
            .unwrap()
    }

    fn ideal(c: &Chart, gens: &[&str]) -> Subscheme {
        let gens: Vec<Poly> = gens.iter().map(|g| g.parse().unwrap()).collect();
        Subscheme::on_chart(c, &gens).unwrap()
    }

    #[test]
    fn principal_ideal_needs_no_centers() {
        let c = chart(&["x", "y"], 1, &[]);
        let atlas = Atlas::single(c.clone(), 1);
        assert!(monomial_oracle(&atlas, &ideal(&c, &["x^2*y^3"]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn point_is_blown_up_once() {
        let c = chart(&["x", "y"], 1, &[]);
        let atlas = Atlas::single(c.clone(), 1);
        let centers = monomial_oracle(&atlas, &ideal(&c, &["x", "y"])).unwrap();
        assert_eq!(
            centers,
            vec![CenterSelector::on("root", Center::regular(["x", "y"]))]
        );
    }

    #[test]
    fn pushforward_of_a_point() {
        let c = chart(&["x", "y"], 2, &[]);
        let atlas = Atlas::single(c.clone(), 2);
        let res = pushforward_principalization(
            &atlas,
            &ideal(&c, &["x", "y"]),
            &MonomialOracle::default(),
        )
        .unwrap();
        assert_eq!(res.tree.leaves(), &["root.x", "root.y"]);
        for leaf in res.tree.leaves() {
            assert!(res.transform.is_empty_on(leaf));
            assert_eq!(res.final_boundary[leaf].len(), 1);
        }
    }

    #[test]
    fn dense_subschemes_are_rejected() {
        let c = chart(&["x"], 2, &[]);
        let atlas = Atlas::single(c.clone(), 2);
        let r = pushforward_principalization(&atlas, &ideal(&c, &["eps"]), &MonomialOracle::default());
        assert!(matches!(r, Err(Error::NotNowhereDense(_))));
    }

    #[test]
    fn fuel_is_enforced() {
        let c = chart(&["x", "y"], 1, &[]);
        let atlas = Atlas::single(c.clone(), 1);
        let r = monomial_oracle_with_fuel(&atlas, &ideal(&c, &["x^2", "y^3"]), 1);
        assert!(matches!(r, Err(Error::FuelExhausted { steps: 1, .. })));
    }

    #[test]
    fn monomialization_of_y2_plus_eps() {
        let c = chart(&["x", "y"], 2, &[(1, "y")]);
        let f = c.parse("y^2 + eps").unwrap();
        let d = CartierDivisor::on_chart(&c, f).unwrap();
        let res = monomialize_divisor(&Atlas::single(c, 2), &d).unwrap();
        assert_eq!(res.tree.steps().len(), 2);
        let leaf = &res.tree.leaves()[0];
        assert_eq!(res.divisor.equations[leaf].to_string(), "eps''*y^2 + y^2");
        assert_eq!(res.multiplicities[leaf].to_string(), "{1:2}");
    }

    #[test]
    fn monomialization_of_the_unit_divisor_is_empty() {
        let c = chart(&["x"], 2, &[(1, "x")]);
        let d = CartierDivisor::on_chart(&c, c.parse("1").unwrap()).unwrap();
        let res = monomialize_divisor(&Atlas::single(c, 2), &d).unwrap();
        assert!(res.tree.is_trivial());
        assert!(res.common_multiplicities().unwrap().is_zero());
    }
}
