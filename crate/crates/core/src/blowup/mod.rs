//! Regular, trivial-reduction and log blowups of charts, and trees of them.

mod dot;
mod tree;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use dot::to_dot;
pub use tree::{BlowupTree, CenterSelector};

use crate::chart::Chart;
use crate::divisors::regular_boundary;
use crate::error::{Error, Result};
use crate::ring::{Monomial, Poly, QuotientRing, RingMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Center {
    /// `V(eps, t_S)`.
    Regular(BTreeSet<String>),
    /// `V(eps, f)` for `f` whose eps-free part is a monomial.
    ReducedDivisor(Poly),
    /// The log blowup of `(t, eps)` for a boundary variable `t`.
    LogReducedDivisor(String),
}

impl Center {
    pub fn regular<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Center::Regular(vars.into_iter().map(Into::into).collect())
    }

    pub fn divisor(m: Monomial) -> Self {
        Center::ReducedDivisor(Poly::monomial(m))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Center::Regular(_) => "regular",
            Center::ReducedDivisor(_) => "divisor",
            Center::LogReducedDivisor(_) => "log",
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Regular(s) => {
                let v: Vec<&str> = s.iter().map(String::as_str).collect();
                write!(f, "V(eps,{})", v.join(","))
            }
            Center::ReducedDivisor(p) => write!(f, "V~({p})"),
            Center::LogReducedDivisor(t) => write!(f, "log({t},eps)"),
        }
    }
}

/// How a child chart sits over its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChildRole {
    /// The chart where `var` generates the exceptional ideal; other center
    /// variables were renamed as recorded.
    Regular {
        var: String,
        renamed: BTreeMap<String, String>,
    },
    TrivialReduction,
    /// `eps = t * eps'`.
    LogT {
        var: String,
    },
    /// `t = t' * eps`.
    LogEps {
        var: String,
        renamed: String,
    },
}

impl ChildRole {
    pub fn tag(&self) -> &'static str {
        match self {
            ChildRole::Regular { .. } => "regular",
            ChildRole::TrivialReduction => "trivial-reduction",
            ChildRole::LogT { .. } => "t-chart",
            ChildRole::LogEps { .. } => "eps-chart",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChildChart {
    pub chart: Chart,
    /// From the parent ring to the child ring.
    pub map: RingMap,
    /// The exceptional equation, always a monomial on these charts.
    pub exceptional: Monomial,
    pub role: ChildRole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupStep {
    pub parent: String,
    pub center: Center,
    /// Label given to the exceptional divisor (regular centers only).
    pub new_label: Option<u32>,
    pub children: Vec<ChildChart>,
}

fn fresh(base: &str, used: &mut BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    name
}

fn used_names(chart: &Chart) -> BTreeSet<String> {
    chart.ring().vars().iter().cloned().collect()
}

fn substitute_monomial(m: &Monomial, images: &BTreeMap<String, Poly>) -> Monomial {
    let p = Poly::monomial(m.clone()).substitute(images);
    p.as_term().expect("monomial images").1.clone()
}

/// Blow up `V(eps, t_S)`; the new exceptional label is `E.len() + 1`.
pub fn blowup_regular(chart: &Chart, s: &BTreeSet<String>) -> Result<BlowupStep> {
    blowup_regular_labeled(chart, s, chart.boundary.len() + 1)
}

pub(crate) fn blowup_regular_labeled(
    chart: &Chart,
    s: &BTreeSet<String>,
    label: u32,
) -> Result<BlowupStep> {
    if s.is_empty() {
        return Err(Error::BadCenter("empty variable set".into()));
    }
    if s.contains(chart.eps()) {
        return Err(Error::BadCenter(format!(
            "`{}` is the nilpotent parameter",
            chart.eps()
        )));
    }
    if let Some(v) = s.iter().find(|v| !chart.ring().has_var(v)) {
        return Err(Error::UnknownVariable(v.clone()));
    }
    if !chart.is_ptm() {
        return Err(Error::NotPtm(chart.id.clone()));
    }
    let eps = chart.eps();
    let mut children = Vec::with_capacity(s.len());
    for ti in s {
        let mut used = used_names(chart);
        let eps_new = fresh(eps, &mut used);
        let mut renamed = BTreeMap::new();
        for tj in s.iter().filter(|t| *t != ti) {
            renamed.insert(tj.clone(), fresh(tj, &mut used));
        }
        let vars: Vec<String> = chart
            .ring()
            .vars()
            .iter()
            .map(|v| {
                if v == eps {
                    eps_new.clone()
                } else {
                    renamed.get(v).cloned().unwrap_or_else(|| v.clone())
                }
            })
            .collect();
        let ring = QuotientRing::ptm(vars, &eps_new, chart.h())?;
        let t = Poly::var(ti);
        let mut images = BTreeMap::new();
        images.insert(eps.to_string(), &t * &Poly::var(&eps_new));
        for (tj, tj_new) in &renamed {
            images.insert(tj.clone(), &t * &Poly::var(tj_new));
        }
        let map = RingMap::new(chart.ring().clone(), ring.clone(), images)?;
        let mut child = Chart::ptm(
            format!("{}.{ti}", chart.id),
            ring.vars().iter().cloned(),
            &eps_new,
            chart.h(),
        )?
        .with_boundary(regular_boundary(&chart.boundary, ti, &renamed, label))?;
        child.boundary.set_len(label);
        child.set_pi_from(chart.pi(), &map)?;
        children.push(ChildChart {
            chart: child,
            map,
            exceptional: Monomial::var(ti),
            role: ChildRole::Regular {
                var: ti.clone(),
                renamed,
            },
        });
    }
    Ok(BlowupStep {
        parent: chart.id.clone(),
        center: Center::Regular(s.clone()),
        new_label: Some(label),
        children,
    })
}

/// The monic monomial `m` with `f mod eps = c m`, for a nonunit `m`.
pub(crate) fn divisor_monomial(chart: &Chart, f: &Poly) -> Result<Monomial> {
    let free = f.set_zero(&[chart.eps()]);
    match free.as_term() {
        Some((_, m)) if !m.is_one() => {
            if let Some(v) = m.vars().find(|v| !chart.ring().has_var(v)) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
            Ok(m.clone())
        }
        _ => Err(Error::NonMonomialDivisor(f.to_string())),
    }
}

/// Blow up the reduced divisor `V(eps, f)`: one chart, `eps = m * eps'`.
pub fn blowup_reduced_divisor(chart: &Chart, f: &Poly) -> Result<BlowupStep> {
    if !chart.is_ptm() || chart.h() < 2 {
        return Err(Error::NotPtm(chart.id.clone()));
    }
    let m = divisor_monomial(chart, f)?;
    let eps = chart.eps();
    let eps_new = fresh(eps, &mut used_names(chart));
    let vars: Vec<String> = chart
        .t_vars()
        .map(str::to_string)
        .chain([eps_new.clone()])
        .collect();
    let ring = QuotientRing::ptm(vars, &eps_new, chart.h())?;
    let mut images = BTreeMap::new();
    images.insert(
        eps.to_string(),
        Poly::monomial(m.mul(&Monomial::var(&eps_new))),
    );
    let map = RingMap::new(chart.ring().clone(), ring.clone(), images)?;
    let mut child = Chart::ptm(
        format!("{}.[{m}]", chart.id),
        ring.vars().iter().cloned(),
        &eps_new,
        chart.h(),
    )?
    .with_boundary(chart.boundary.clone())?;
    child.set_pi_from(chart.pi(), &map)?;
    Ok(BlowupStep {
        parent: chart.id.clone(),
        center: Center::ReducedDivisor(Poly::monomial(m.clone())),
        new_label: None,
        children: vec![ChildChart {
            chart: child,
            map,
            exceptional: m,
            role: ChildRole::TrivialReduction,
        }],
    })
}

/// Log blowup of `(t, eps)`: a `t`-chart `eps = t eps'` carrying the
/// component `(eps'^h)`, and an `eps`-chart `t = t' eps`.
///
/// Also accepted on charts that already carry a component, so sequences
/// of log blowups can be chained along the component.
pub fn log_blowup_reduced_divisor(chart: &Chart, t: &str) -> Result<BlowupStep> {
    if !chart.boundary.contains_var(t) {
        return Err(Error::NotBoundaryVariable(t.to_string()));
    }
    if chart.h() < 2 || !(chart.is_ptm() || chart.component().is_some()) {
        return Err(Error::NotPtm(chart.id.clone()));
    }
    let eps = chart.eps();
    let h = chart.h();
    let component = match chart.component() {
        Some(c) if *c != Monomial::power(eps, h) => {
            return Err(Error::InvalidChart(format!(
                "component ({c}) is not a power of `{eps}`"
            )))
        }
        _ => Monomial::power(eps, h),
    };
    let mut used = used_names(chart);

    // t-chart
    let eps_new = fresh(eps, &mut used);
    let mut images = BTreeMap::new();
    images.insert(
        eps.to_string(),
        Poly::monomial(Monomial::var(t).mul(&Monomial::var(&eps_new))),
    );
    let vars: Vec<String> = chart
        .t_vars()
        .map(str::to_string)
        .chain([eps_new.clone()])
        .collect();
    let relation = substitute_monomial(chart.ring().relation(), &images);
    let ring = QuotientRing::new(vars, relation)?;
    let map = RingMap::new(chart.ring().clone(), ring.clone(), images)?;
    let mut t_chart = Chart::general(format!("{}.{t}", chart.id), ring, &eps_new, h)?
        .with_boundary(chart.boundary.clone())?
        .with_component(Some(component.rename(eps, &eps_new)));
    t_chart.set_pi_from(chart.pi(), &map)?;
    let t_child = ChildChart {
        chart: t_chart,
        map,
        exceptional: Monomial::var(t).mul(&Monomial::var(&eps_new)),
        role: ChildRole::LogT { var: t.to_string() },
    };

    // eps-chart
    let t_new = fresh(t, &mut used);
    let mut images = BTreeMap::new();
    images.insert(
        t.to_string(),
        Poly::monomial(Monomial::var(&t_new).mul(&Monomial::var(eps))),
    );
    let vars: Vec<String> = chart
        .ring()
        .vars()
        .iter()
        .map(|v| if v == t { t_new.clone() } else { v.clone() })
        .collect();
    let relation = substitute_monomial(chart.ring().relation(), &images);
    let ring = QuotientRing::new(vars, relation)?;
    let map = RingMap::new(chart.ring().clone(), ring.clone(), images)?;
    let mut boundary = chart.boundary.clone();
    boundary.rename_var(t, &t_new);
    let mut e_chart =
        Chart::general(format!("{}.{eps}", chart.id), ring, eps, h)?.with_boundary(boundary)?;
    e_chart.set_pi_from(chart.pi(), &map)?;
    let e_child = ChildChart {
        chart: e_chart,
        map,
        exceptional: Monomial::var(eps),
        role: ChildRole::LogEps {
            var: t.to_string(),
            renamed: t_new,
        },
    };

    Ok(BlowupStep {
        parent: chart.id.clone(),
        center: Center::LogReducedDivisor(t.to_string()),
        new_label: None,
        children: vec![t_child, e_child],
    })
}

/// Apply any center to a chart; `label` is used by regular centers.
pub(crate) fn apply_center(chart: &Chart, center: &Center, label: u32) -> Result<BlowupStep> {
    match center {
        Center::Regular(s) => blowup_regular_labeled(chart, s, label),
        Center::ReducedDivisor(f) => blowup_reduced_divisor(chart, f),
        Center::LogReducedDivisor(t) => log_blowup_reduced_divisor(chart, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::OrderedBoundary;

    fn set(vs: &[&str]) -> BTreeSet<String> {
        vs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn regular_single_variable() {
        let c = Chart::ptm("root", ["eps", "x"], "eps", 2).unwrap();
        let step = blowup_regular(&c, &set(&["x"])).unwrap();
        assert_eq!(step.children.len(), 1);
        let child = &step.children[0];
        assert_eq!(child.chart.ring().to_string(), "k[eps',x]/(eps'^2)");
        assert_eq!(child.map.to_string(), "eps -> eps'*x");
        assert_eq!(child.exceptional, Monomial::var("x"));
        assert_eq!(child.chart.boundary.var_of(1), Some("x"));
    }

    #[test]
    fn regular_two_variables() {
        let c = Chart::ptm("root", ["eps", "x", "y"], "eps", 3).unwrap();
        let step = blowup_regular(&c, &set(&["x", "y"])).unwrap();
        let xc = &step.children[0];
        assert_eq!(xc.chart.ring().to_string(), "k[eps',x,y']/(eps'^3)");
        assert_eq!(xc.map.to_string(), "eps -> eps'*x, y -> x*y'");
        let yc = &step.children[1];
        assert_eq!(yc.map.to_string(), "eps -> eps'*y, x -> x'*y");
        assert!(matches!(
            blowup_regular(&c, &set(&["eps"])),
            Err(Error::BadCenter(_))
        ));
        assert!(matches!(
            blowup_regular(&c, &set(&[])),
            Err(Error::BadCenter(_))
        ));
    }

    #[test]
    fn regular_boundary_transform() {
        let c = Chart::ptm("root", ["eps", "x", "y"], "eps", 2)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs([(1, "x"), (2, "y")]).unwrap())
            .unwrap();
        let step = blowup_regular(&c, &set(&["y"])).unwrap();
        let b = &step.children[0].chart.boundary;
        assert_eq!(b.var_of(1), Some("x"));
        assert_eq!(b.var_of(2), None);
        assert_eq!(b.var_of(3), Some("y"));
    }

    #[test]
    fn reduced_divisor_examples() {
        let c = Chart::ptm("root", ["eps", "x"], "eps", 3).unwrap();
        let step = blowup_reduced_divisor(&c, &"x^2".parse().unwrap()).unwrap();
        assert_eq!(step.children[0].map.to_string(), "eps -> eps'*x^2");
        let thin = Chart::ptm("root", ["eps", "x"], "eps", 1).unwrap();
        assert!(matches!(
            blowup_reduced_divisor(&thin, &"x".parse().unwrap()),
            Err(Error::NotPtm(_))
        ));
        assert!(matches!(
            blowup_reduced_divisor(&c, &"x + 1".parse().unwrap()),
            Err(Error::NonMonomialDivisor(_))
        ));
    }

    #[test]
    fn log_blowup_charts() {
        let c = Chart::ptm("root", ["eps", "t"], "eps", 2)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs([(1, "t")]).unwrap())
            .unwrap();
        let step = log_blowup_reduced_divisor(&c, "t").unwrap();
        let tc = &step.children[0].chart;
        let ec = &step.children[1].chart;
        assert_eq!(tc.ring().to_string(), "k[eps',t]/(eps'^2*t^2)");
        assert_eq!(tc.component(), Some(&Monomial::power("eps'", 2)));
        assert_eq!(ec.ring().to_string(), "k[eps,t']/(eps^2)");
        assert_eq!(ec.boundary.var_of(1), Some("t'"));
        assert!(matches!(
            log_blowup_reduced_divisor(&c, "eps"),
            Err(Error::NotBoundaryVariable(_))
        ));
    }
}
