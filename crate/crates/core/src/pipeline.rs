//! Distinguished B-pairs over `B = Spec k[pi]/(pi^n)`: verification,
//! resolution of ptm charts over `B`, and the chart-level log smooth
//! embedding of a resolved chart.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use crate::blowup::{BlowupTree, Center, ChildRole};
use crate::chart::{Atlas, Chart};
use crate::divisors::{ideal_monomial, is_monomial, MonomialDivisor, OrderedBoundary, Subscheme};
use crate::error::{Error, Result};
use crate::principalize::{
    bootstrap_labels, monomialize_chain, principal_reduction, principalize_leaves,
    reduction_multiplicities, ReductionOracle,
};
use crate::ring::{Monomial, Poly, QuotientRing, RingElem, RingMap};
use crate::structure::{factor_trivial_modification, Factorization, Retract};

/// The thick point `Spec k[pi]/(pi^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSpec {
    pub n: u32,
    pub pi_name: String,
}

impl BaseSpec {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("base exponent must be positive".into()));
        }
        Ok(BaseSpec {
            n,
            pi_name: "pi".into(),
        })
    }
}

/// `pi = unit * eps * prod t_i^{d_i}` on one chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPairWitness {
    pub chart: String,
    pub eps: String,
    pub d: MonomialDivisor,
    pub unit: RingElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotDistinguished {
    /// `pi` is not divisible by `eps`.
    NotInNilradical,
    /// `pi / eps` is not a unit times a monomial.
    QuotientNotMonomial,
    /// The monomial uses a variable outside the boundary.
    NonBoundaryVariable(String),
}

impl NotDistinguished {
    pub fn code(&self) -> &'static str {
        match self {
            Self::NotInNilradical => "NotInNilradical",
            Self::QuotientNotMonomial => "QuotientNotMonomial",
            Self::NonBoundaryVariable(_) => "NonBoundaryVariable",
        }
    }
}

impl fmt::Display for NotDistinguished {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonBoundaryVariable(v) => write!(f, "{}: `{v}`", self.code()),
            _ => f.write_str(self.code()),
        }
    }
}

/// Check `pi = unit * eps * (boundary monomial)` on `chart`.
pub fn verify_distinguished(chart: &Chart) -> Result<Result<BPairWitness, NotDistinguished>> {
    let pi = chart
        .pi()
        .ok_or_else(|| Error::MissingPi(chart.id.clone()))?;
    let Some(q) = pi.div_monomial(&Monomial::var(chart.eps())) else {
        return Ok(Err(NotDistinguished::NotInNilradical));
    };
    let Some((unit, m)) = q.unit_monomial_decompose() else {
        return Ok(Err(NotDistinguished::QuotientNotMonomial));
    };
    if let Some(v) = m.vars().find(|v| !chart.boundary.contains_var(v)) {
        return Ok(Err(NotDistinguished::NonBoundaryVariable(v.to_string())));
    }
    Ok(Ok(BPairWitness {
        chart: chart.id.clone(),
        eps: chart.eps().to_string(),
        d: MonomialDivisor::from_monomial(&m, &chart.boundary).expect("boundary variables"),
        unit,
    }))
}

/// `pi / eps` on a chart whose `pi` lies in `(eps)`.
fn pi_ratio(chart: &Chart) -> Result<RingElem> {
    let pi = chart
        .pi()
        .ok_or_else(|| Error::MissingPi(chart.id.clone()))?;
    pi.div_monomial(&Monomial::var(chart.eps())).ok_or_else(|| {
        Error::NotGenericallySmooth(format!("pi = {pi} is not divisible by {}", chart.eps()))
    })
}

/// Check the inputs of [`resolve_over_b`]: ptm charts of thickness `n`,
/// `pi^n = 0`, and `pi = eps g` with `g` nonzero on the reduction.
pub fn normalize_input(x: &Atlas, base: &BaseSpec) -> Result<Atlas> {
    for c in &x.charts {
        if !c.is_ptm() {
            return Err(Error::NotPtm(c.id.clone()));
        }
        let pi = c.pi().ok_or_else(|| Error::MissingPi(c.id.clone()))?;
        if !pi.pow(base.n).is_zero() {
            return Err(Error::InvalidInput(format!(
                "pi^{} is nonzero on `{}`",
                base.n, c.id
            )));
        }
        if c.h() != base.n {
            return Err(Error::NotGenericallySmooth(format!(
                "`{}` has thickness {} over a base of exponent {}",
                c.id,
                c.h(),
                base.n
            )));
        }
        let g = pi_ratio(c)?;
        if g.poly().set_zero(&[c.eps()]).is_zero() {
            return Err(Error::NotGenericallySmooth(format!(
                "pi = {pi} does not generate the nilradical generically on `{}`",
                c.id
            )));
        }
    }
    let mut out = x.clone();
    out.base_exponent = base.n;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub name: String,
    /// Indices into the tree's steps.
    pub steps: Range<usize>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub base: BaseSpec,
    pub tree: BlowupTree,
    pub stages: Vec<Stage>,
    pub witnesses: BTreeMap<String, BPairWitness>,
    /// Leaves that did not pass [`verify_distinguished`].
    pub failures: BTreeMap<String, NotDistinguished>,
    /// The total transform of `Z` as a boundary divisor, per leaf.
    pub z_divisor: BTreeMap<String, MonomialDivisor>,
}

impl Resolution {
    pub fn boundary(&self, leaf: &str) -> Result<&OrderedBoundary> {
        Ok(&self.tree.chart(leaf)?.boundary)
    }

    pub fn is_distinguished(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Resolve `x` over `B` and make `z` a boundary divisor.
///
/// 1. Check the input charts.
/// 2. Principalize `z` on the reduction and push the centers forward; label
///    the remaining variables of its transform and make the total transform
///    of `z` monomial by trivial-reduction blowups.
/// 3. Write `pi = eps g` and principalize `(g)` the same way.
/// 4. Make `g` boundary-monomial by trivial-reduction blowups.
/// 5. Verify every leaf.
pub fn resolve_over_b(
    x: &Atlas,
    z: &Subscheme,
    base: &BaseSpec,
    oracle: &dyn ReductionOracle,
) -> Result<Resolution> {
    let mut stages = Vec::new();
    let mut tree = resolve_prefix(x, z, base, oracle, &mut stages)?;

    let start = tree.steps().len();
    for leaf in tree.leaves().to_vec() {
        let chart = tree.chart(&leaf)?;
        let g = pi_ratio(chart)?;
        let mult = reduction_multiplicities(&g, chart)?;
        let end = if chart.h() >= 2 {
            monomialize_chain(&mut tree, &leaf, &mult, |t, id| {
                let c = t.chart(id)?;
                Ok(is_monomial(&pi_ratio(c)?, &c.boundary).is_some())
            })?
        } else {
            leaf
        };
        let c = tree.chart(&end)?;
        if is_monomial(&pi_ratio(c)?, &c.boundary).is_none() {
            return Err(Error::ReductionNotMonomial(end));
        }
    }
    stages.push(Stage {
        name: "monomialize-pi".into(),
        steps: start..tree.steps().len(),
    });

    let mut witnesses = BTreeMap::new();
    let mut failures = BTreeMap::new();
    for c in tree.leaf_charts() {
        match verify_distinguished(c)? {
            Ok(w) => {
                witnesses.insert(c.id.clone(), w);
            }
            Err(f) => {
                failures.insert(c.id.clone(), f);
            }
        }
    }
    let z_divisor = z_divisors(&tree, z)?;
    Ok(Resolution {
        base: base.clone(),
        tree,
        stages,
        witnesses,
        failures,
        z_divisor,
    })
}

/// Steps 1 to 3 of [`resolve_over_b`].
fn resolve_prefix(
    x: &Atlas,
    z: &Subscheme,
    base: &BaseSpec,
    oracle: &dyn ReductionOracle,
    stages: &mut Vec<Stage>,
) -> Result<BlowupTree> {
    let x = normalize_input(x, base)?;
    let mut tree = BlowupTree::from_atlas(&x)?;

    let start = tree.steps().len();
    let z_gens: Vec<_> = z.gens.iter().filter(|(_, g)| !g.is_empty()).collect();
    if !z_gens.is_empty() {
        principalize_leaves(&mut tree, z, oracle)?;
        let totals = total_transforms(&tree, z)?;
        let monos = totals
            .iter()
            .map(|(leaf, g)| {
                let m = principal_reduction(g, tree.chart(leaf)?)
                    .ok_or_else(|| Error::ReductionNotMonomial(leaf.clone()))?;
                Ok((leaf.clone(), m))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        bootstrap_labels(&mut tree, &monos)?;
        for (leaf, m) in &monos {
            let mult = MonomialDivisor::from_monomial(m, &tree.chart(leaf)?.boundary)
                .expect("bootstrapped");
            if tree.chart(leaf)?.h() < 2 {
                continue;
            }
            monomialize_chain(&mut tree, leaf, &mult, |t, id| {
                let gens = total_transform_on(t, z, id)?;
                Ok(ideal_monomial(&gens, &t.chart(id)?.boundary).is_some())
            })?;
        }
    }
    stages.push(Stage {
        name: "principalize-z".into(),
        steps: start..tree.steps().len(),
    });

    let start = tree.steps().len();
    let mut g = Subscheme::default();
    for c in tree.leaf_charts() {
        g.gens.insert(c.id.clone(), vec![pi_ratio(c)?]);
    }
    principalize_leaves(&mut tree, &g, oracle)?;
    let monos = tree
        .leaf_charts()
        .map(|c| {
            let m = principal_reduction(&[pi_ratio(c)?], c)
                .ok_or_else(|| Error::ReductionNotMonomial(c.id.clone()))?;
            Ok((c.id.clone(), m))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    bootstrap_labels(&mut tree, &monos)?;
    stages.push(Stage {
        name: "principalize-pi".into(),
        steps: start..tree.steps().len(),
    });
    Ok(tree)
}

/// Pull the generators of `z` on the root of `leaf` back to `leaf`.
fn total_transform_on(tree: &BlowupTree, z: &Subscheme, leaf: &str) -> Result<Vec<RingElem>> {
    let root = tree.root_of(leaf);
    let Some(gens) = z.gens.get(&root) else {
        return Ok(Vec::new());
    };
    let map = tree.composite_map(leaf)?;
    gens.iter().map(|g| map.apply(g)).collect()
}

fn total_transforms(tree: &BlowupTree, z: &Subscheme) -> Result<BTreeMap<String, Vec<RingElem>>> {
    let mut out = BTreeMap::new();
    for leaf in tree.leaves() {
        let gens = total_transform_on(tree, z, leaf)?;
        if !gens.is_empty() {
            out.insert(leaf.clone(), gens);
        }
    }
    Ok(out)
}

fn z_divisors(tree: &BlowupTree, z: &Subscheme) -> Result<BTreeMap<String, MonomialDivisor>> {
    total_transforms(tree, z)?
        .into_iter()
        .map(|(leaf, gens)| {
            let d = ideal_monomial(&gens, &tree.chart(&leaf)?.boundary)
                .ok_or_else(|| Error::ReductionNotMonomial(leaf.clone()))?;
            Ok((leaf, d))
        })
        .collect()
}

/// Where the morphism to `B` fails to be smooth on one leaf: the zero set of
/// the monomial part of `pi / eps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncLocus {
    pub chart: String,
    pub vars: Vec<String>,
    /// Labels of those variables, when they are boundary variables.
    pub labels: Vec<u32>,
    pub in_boundary: bool,
}

#[derive(Clone, Debug)]
pub struct SmoothnessReport {
    pub tree: BlowupTree,
    pub stages: Vec<Stage>,
    pub loci: Vec<SncLocus>,
}

impl SmoothnessReport {
    pub fn all_in_boundary(&self) -> bool {
        self.loci.iter().all(|l| l.in_boundary)
    }
}

/// Steps 1 to 3 of [`resolve_over_b`] with empty `Z`, reporting per leaf the
/// non-smooth locus of the morphism to `B`.
pub fn smooth_away_from_snc(
    x: &Atlas,
    base: &BaseSpec,
    oracle: &dyn ReductionOracle,
) -> Result<SmoothnessReport> {
    let mut stages = Vec::new();
    let tree = resolve_prefix(x, &Subscheme::default(), base, oracle, &mut stages)?;
    let mut loci = Vec::new();
    for c in tree.leaf_charts() {
        let g = pi_ratio(c)?;
        let m = principal_reduction(&[g], c).ok_or_else(|| Error::ReductionNotMonomial(c.id.clone()))?;
        let vars: Vec<String> = m.vars().map(str::to_string).collect();
        let labels: Vec<u32> = vars.iter().filter_map(|v| c.boundary.label_of(v)).collect();
        loci.push(SncLocus {
            chart: c.id.clone(),
            in_boundary: labels.len() == vars.len(),
            vars,
            labels,
        });
    }
    Ok(SmoothnessReport { tree, stages, loci })
}

/// The log smooth chart data around one resolved leaf.
#[derive(Clone, Debug)]
pub struct LogSmoothEmbedding {
    pub leaf: String,
    /// `k[t..., pi]/(pi^n)` with the boundary of the leaf.
    pub y_prime: Chart,
    /// The map `O_{Y'} -> O_leaf`: `t -> s(t)`, `pi -> pi`.
    pub structure_map: RingMap,
    pub factorization: Factorization,
    /// Log blowups of `Y'` along the factorization path.
    pub tree: BlowupTree,
    /// The chart carrying the component isomorphic to the leaf.
    pub component_chart: String,
    /// `pi` as a monomial on every chart of `tree`.
    pub pi_images: BTreeMap<String, Monomial>,
}

impl LogSmoothEmbedding {
    /// The charts of `Y`.
    pub fn charts(&self) -> impl Iterator<Item = &Chart> {
        self.tree.leaf_charts()
    }
}

/// Embed every leaf of a resolution into a log smooth chart over `B`.
///
/// `retracts` maps leaf ids to regular retracts; missing leaves use
/// `s(t) = t`.
pub fn embed_log_smooth(
    res: &Resolution,
    retracts: &BTreeMap<String, Retract>,
) -> Result<Vec<LogSmoothEmbedding>> {
    res.tree
        .leaves()
        .iter()
        .map(|leaf| {
            let chart = res.tree.chart(leaf)?;
            let r = retracts
                .get(leaf)
                .cloned()
                .unwrap_or_else(|| Retract::trivial(chart));
            embed_leaf(chart, &r, &res.base)
        })
        .collect()
}

/// [`embed_log_smooth`] on a single distinguished chart.
pub fn embed_leaf(chart: &Chart, r: &Retract, base: &BaseSpec) -> Result<LogSmoothEmbedding> {
    if let Err(f) = verify_distinguished(chart)? {
        return Err(Error::InvalidInput(format!(
            "`{}` is not distinguished: {f}",
            chart.id
        )));
    }
    if !r.is_regular() {
        return Err(Error::RetractNotRegular(chart.id.clone()));
    }
    let pi_name = if chart.ring().has_var(&base.pi_name) {
        chart.ring().fresh_name(&base.pi_name)
    } else {
        base.pi_name.clone()
    };
    let y_prime = Chart::ptm(
        format!("{}/Y", chart.id),
        chart.t_vars().map(str::to_string),
        &pi_name,
        base.n,
    )?
    .with_boundary(chart.boundary.clone())?
    .with_pi(&Poly::var(&pi_name))?;

    let mut images = BTreeMap::new();
    images.insert(
        pi_name.clone(),
        chart.pi().expect("verified").poly().clone(),
    );
    for t in chart.t_vars() {
        images.insert(t.to_string(), r.image(chart, t)?);
    }
    let structure_map = RingMap::new(y_prime.ring().clone(), chart.ring().clone(), images)?;
    let factorization = factor_trivial_modification(&y_prime, chart, &structure_map)?;

    let mut tree = BlowupTree::from_chart(y_prime.clone());
    let mut cur = y_prime.id.clone();
    for step in &factorization.path.steps {
        let idx = tree.apply(&cur, &Center::LogReducedDivisor(step.var.clone()))?;
        cur = tree.steps()[idx].children[0].chart.id.clone();
    }

    let mut pi_images = BTreeMap::new();
    for c in tree.charts() {
        let pi = c.pi().expect("pulled back");
        let m = pi
            .poly()
            .as_term()
            .filter(|(coef, _)| **coef == num_traits::One::one())
            .map(|(_, m)| m.clone())
            .ok_or_else(|| Error::InvalidChart(format!("pi = {pi} is not a monomial on `{}`", c.id)))?;
        if *c.ring().relation() != m.pow(c.h()) {
            return Err(Error::InvalidChart(format!(
                "relation of {} is not ({m})^{}",
                c.ring(),
                c.h()
            )));
        }
        pi_images.insert(c.id.clone(), m);
    }

    let component_ring = match tree.chart(&cur)?.component() {
        Some(comp) => {
            QuotientRing::new(tree.chart(&cur)?.ring().vars().iter().cloned(), comp.clone())?
        }
        None => tree.chart(&cur)?.ring().clone(),
    };
    if component_ring != *factorization.replay_leaf().ring() {
        return Err(Error::SplitMismatch(format!(
            "component {} differs from the blowup {}",
            component_ring,
            factorization.replay_leaf().ring()
        )));
    }
    for step in tree.steps() {
        for child in &step.children {
            if matches!(child.role, ChildRole::LogEps { .. }) && child.chart.is_ptm() {
                if let Err(f) = verify_distinguished(&child.chart)? {
                    return Err(Error::InvalidChart(format!(
                        "eps-chart `{}` is not distinguished: {f}",
                        child.chart.id
                    )));
                }
            }
        }
    }
    Ok(LogSmoothEmbedding {
        leaf: chart.id.clone(),
        y_prime,
        structure_map,
        factorization,
        tree,
        component_chart: cur,
        pi_images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::principalize::MonomialOracle;

    fn chart(h: u32, pi: &str, boundary: &[(u32, &str)]) -> Chart {
        Chart::ptm("root", ["x", "eps"], "eps", h)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs(boundary.iter().cloned()).unwrap())
            .unwrap()
            .with_pi(&pi.parse().unwrap())
            .unwrap()
    }

    #[test]
    fn distinguished_examples() {
        let w = verify_distinguished(&chart(3, "eps*x", &[(1, "x")]))
            .unwrap()
            .unwrap();
        assert_eq!(w.d.to_string(), "{1:1}");
        assert_eq!(w.unit.to_string(), "1");
        let f = verify_distinguished(&chart(3, "eps*x + eps", &[(1, "x")])).unwrap();
        assert_eq!(f, Err(NotDistinguished::QuotientNotMonomial));
        let w = verify_distinguished(&chart(2, "eps", &[])).unwrap().unwrap();
        assert!(w.d.is_zero());
        let f = verify_distinguished(&chart(2, "x", &[])).unwrap();
        assert_eq!(f, Err(NotDistinguished::NotInNilradical));
    }

    #[test]
    fn resolve_examples() {
        let base = BaseSpec::new(2).unwrap();
        let x = Atlas::single(chart(2, "eps*x", &[]), 2);
        let res = resolve_over_b(&x, &Subscheme::default(), &base, &MonomialOracle::default()).unwrap();
        assert!(res.tree.is_trivial());
        assert_eq!(res.witnesses["root"].d.to_string(), "{1:1}");

        let base = BaseSpec::new(3).unwrap();
        let x = Atlas::single(chart(3, "eps*x^2 + eps^2", &[]), 3);
        let res = resolve_over_b(&x, &Subscheme::default(), &base, &MonomialOracle::default()).unwrap();
        assert_eq!(res.tree.steps().len(), 2);
        let leaf = &res.tree.leaves()[0];
        assert_eq!(res.witnesses[leaf].d.to_string(), "{1:4}");

        let base = BaseSpec::new(2).unwrap();
        let c = chart(2, "eps", &[]);
        let z = Subscheme::on_chart(&c, &["x".parse().unwrap()]).unwrap();
        let res = resolve_over_b(&Atlas::single(c, 2), &z, &base, &MonomialOracle::default()).unwrap();
        assert!(res.witnesses["root"].d.is_zero());
        assert_eq!(res.z_divisor["root"].to_string(), "{1:1}");
    }

    #[test]
    fn embedding_of_pi_eps_x() {
        let base = BaseSpec::new(2).unwrap();
        let x = Atlas::single(chart(2, "eps*x", &[]), 2);
        let res = resolve_over_b(&x, &Subscheme::default(), &base, &MonomialOracle::default()).unwrap();
        let emb = embed_log_smooth(&res, &BTreeMap::new()).unwrap();
        let e = &emb[0];
        assert_eq!(e.factorization.path.len(), 1);
        let comp = e.tree.chart(&e.component_chart).unwrap();
        assert_eq!(comp.ring().to_string(), "k[pi',x]/(pi'^2*x^2)");
        assert_eq!(e.pi_images[&e.component_chart].to_string(), "pi'*x");
    }
}
