//! JSON encodings of charts, atlases, blowup trees and pipeline reports.
//!
//! Polynomials are strings in the ring grammar (`3/2*x^2*eps - y`),
//! monomial divisors are `{"label": mult}` maps and ideals are lists of
//! generator strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blowup::{BlowupStep, BlowupTree, Center, CenterSelector, ChildRole};
use crate::chart::{Atlas, AtlasMap, Chart, HypersurfacePresentation};
use crate::divisors::{CartierDivisor, MonomialDivisor, OrderedBoundary, Subscheme};
use crate::error::{Error, Result};
use crate::ring::{Monomial, Poly, QuotientRing, RationalFunction, RingMap};
use crate::structure::Retract;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEntry {
    pub label: u32,
    pub var: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartJson {
    pub id: String,
    pub vars: Vec<String>,
    pub relation: BTreeMap<String, u32>,
    pub nilpotent: String,
    pub thickness: u32,
    #[serde(default)]
    pub boundary: Vec<BoundaryEntry>,
    #[serde(default)]
    pub pi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<BTreeMap<String, u32>>,
}

impl ChartJson {
    pub fn from_chart(c: &Chart) -> Self {
        ChartJson {
            id: c.id.clone(),
            vars: c.ring().vars().to_vec(),
            relation: c.ring().relation().exponents().clone(),
            nilpotent: c.eps().to_string(),
            thickness: c.h(),
            boundary: c
                .boundary
                .iter()
                .map(|(label, var)| BoundaryEntry {
                    label,
                    var: var.to_string(),
                })
                .collect(),
            pi: c.pi().map(ToString::to_string),
            component: c.component().map(|m| m.exponents().clone()),
        }
    }

    pub fn to_chart(&self) -> Result<Chart> {
        let relation = Monomial::from_exponents(self.relation.clone());
        let mut chart = if relation == Monomial::power(&self.nilpotent, self.thickness) {
            Chart::ptm(&self.id, self.vars.iter().cloned(), &self.nilpotent, self.thickness)?
        } else {
            let ring = QuotientRing::new(self.vars.iter().cloned(), relation)?;
            Chart::general(&self.id, ring, &self.nilpotent, self.thickness)?
        };
        if chart.ring().vars().len() != self.vars.len() {
            return Err(Error::InvalidChart(format!(
                "`{}` does not list its nilpotent parameter among its variables",
                self.id
            )));
        }
        let boundary =
            OrderedBoundary::from_pairs(self.boundary.iter().map(|b| (b.label, b.var.clone())))?;
        chart = chart.with_boundary(boundary)?;
        if let Some(pi) = &self.pi {
            chart = chart.with_pi(&pi.parse()?)?;
        }
        if let Some(c) = &self.component {
            chart = chart.with_component(Some(Monomial::from_exponents(c.clone())));
        }
        Ok(chart)
    }
}

/// `k[vars]/(f)`, certified to be a ptm chart before use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceJson {
    #[serde(default = "default_id")]
    pub id: String,
    pub vars: Vec<String>,
    pub f: String,
    #[serde(default)]
    pub nilpotent: Option<String>,
    #[serde(default)]
    pub boundary: Vec<BoundaryEntry>,
    #[serde(default)]
    pub pi: Option<String>,
}

fn default_id() -> String {
    "root".into()
}

impl HypersurfaceJson {
    pub fn presentation(&self) -> Result<HypersurfacePresentation> {
        Ok(HypersurfacePresentation {
            ambient_vars: self.vars.clone(),
            f: self.f.parse()?,
            declared_nilpotent: self.nilpotent.clone(),
        })
    }

    pub fn to_chart(&self) -> Result<Chart> {
        let mut chart = self.presentation()?.to_chart(&self.id)?;
        let boundary =
            OrderedBoundary::from_pairs(self.boundary.iter().map(|b| (b.label, b.var.clone())))?;
        chart = chart.with_boundary(boundary)?;
        if let Some(pi) = &self.pi {
            chart = chart.with_pi(&pi.parse()?)?;
        }
        Ok(chart)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub source: String,
    pub target: String,
    pub images: BTreeMap<String, String>,
}

/// A center on one chart (`chart` set) or on every leaf. Exactly one of
/// `vars` (regular center `V(eps, vars)`), `divisor` (reduced divisor) and
/// `log` (log blowup of a boundary variable) is given.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log: Option<String>,
}

impl CenterJson {
    pub fn to_center(&self) -> Result<Center> {
        match (&self.vars, &self.divisor, &self.log) {
            (Some(v), None, None) => Ok(Center::regular(v.iter().cloned())),
            (None, Some(d), None) => {
                let p: Poly = d.parse()?;
                let (_, m) = p
                    .as_term()
                    .ok_or_else(|| Error::BadCenter(format!("{p} is not a monomial")))?;
                Ok(Center::divisor(m.clone()))
            }
            (None, None, Some(t)) => Ok(Center::LogReducedDivisor(t.clone())),
            _ => Err(Error::InvalidInput(
                "a center needs exactly one of `vars`, `divisor`, `log`".into(),
            )),
        }
    }

    pub fn to_selector(&self) -> Result<CenterSelector> {
        let center = self.to_center()?;
        Ok(match &self.chart {
            Some(c) => CenterSelector::on(c.clone(), center),
            None => CenterSelector::everywhere(center),
        })
    }

    pub fn from_selector(s: &CenterSelector) -> Self {
        let mut out = center_json(&s.center);
        out.chart = s.chart.clone();
        out
    }
}

fn center_json(c: &Center) -> CenterJson {
    match c {
        Center::Regular(s) => CenterJson {
            vars: Some(s.iter().cloned().collect()),
            ..Default::default()
        },
        Center::ReducedDivisor(p) => CenterJson {
            divisor: Some(p.to_string()),
            ..Default::default()
        },
        Center::LogReducedDivisor(t) => CenterJson {
            log: Some(t.clone()),
            ..Default::default()
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetractJson {
    pub chart: String,
    pub sections: BTreeMap<String, BTreeMap<u32, String>>,
}

impl RetractJson {
    pub fn from_retract(r: &Retract) -> Self {
        RetractJson {
            chart: r.chart.clone(),
            sections: r
                .sections
                .iter()
                .map(|(v, s)| {
                    let s = s.iter().map(|(e, a)| (*e, a.to_string())).collect();
                    (v.clone(), s)
                })
                .collect(),
        }
    }

    pub fn to_retract(&self) -> Result<Retract> {
        let sections = self
            .sections
            .iter()
            .map(|(v, s)| {
                let s = s
                    .iter()
                    .map(|(e, a)| Ok((*e, a.parse::<RationalFunction>()?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok((v.clone(), s))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Retract {
            chart: self.chart.clone(),
            sections,
        })
    }
}

/// The input document of every subcommand. Each subcommand reads the
/// fields it needs and rejects documents missing them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    /// Exponent `n` of the base `k[pi]/(pi^n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charts: Vec<ChartJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypersurfaces: Vec<HypersurfaceJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub centers: Vec<CenterJson>,
    /// Ideal generators per chart.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ideal: BTreeMap<String, Vec<String>>,
    /// One divisor equation per chart.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub divisor: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub retracts: Vec<RetractJson>,
    /// Source chart of a chart map `O_source -> O_target`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<ChartJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ChartJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub images: BTreeMap<String, String>,
}

/// Parse a document, reporting the line and column of malformed JSON.
pub fn parse_input(text: &str) -> Result<InputDoc> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: byte_offset(text, e.line(), e.column()),
        msg: format!("line {} column {}: {e}", e.line(), e.column()),
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    start + column.saturating_sub(1)
}

impl InputDoc {
    /// Every chart, hypersurfaces included, in input order.
    pub fn chart_list(&self) -> Result<Vec<Chart>> {
        let mut out = self
            .charts
            .iter()
            .map(ChartJson::to_chart)
            .collect::<Result<Vec<_>>>()?;
        for h in &self.hypersurfaces {
            out.push(h.to_chart()?);
        }
        Ok(out)
    }

    pub fn atlas(&self) -> Result<Atlas> {
        let charts = self.chart_list()?;
        if charts.is_empty() {
            return Err(Error::InvalidInput("no charts given".into()));
        }
        let find = |id: &str| {
            charts
                .iter()
                .find(|c| c.id == id)
                .ok_or_else(|| Error::UnknownChart(id.to_string()))
        };
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let images = parse_images(&m.images)?;
                let map = RingMap::new(
                    find(&m.source)?.ring().clone(),
                    find(&m.target)?.ring().clone(),
                    images,
                )?;
                Ok(AtlasMap {
                    source: m.source.clone(),
                    target: m.target.clone(),
                    map,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let base_exponent = match self.n {
            Some(n) => n,
            None => charts.iter().map(Chart::h).max().unwrap_or(1),
        };
        Ok(Atlas {
            charts,
            maps,
            base_exponent,
        })
    }

    pub fn subscheme(&self, atlas: &Atlas) -> Result<Subscheme> {
        let mut z = Subscheme::default();
        for (id, gens) in &self.ideal {
            let chart = atlas
                .chart(id)
                .ok_or_else(|| Error::UnknownChart(id.clone()))?;
            let gens = gens
                .iter()
                .map(|g| chart.parse(g))
                .collect::<Result<Vec<_>>>()?;
            z.gens.insert(id.clone(), gens);
        }
        Ok(z)
    }

    pub fn cartier_divisor(&self, atlas: &Atlas) -> Result<CartierDivisor> {
        if self.divisor.is_empty() {
            return Err(Error::InvalidInput("no `divisor` given".into()));
        }
        let mut equations = BTreeMap::new();
        for (id, f) in &self.divisor {
            let chart = atlas
                .chart(id)
                .ok_or_else(|| Error::UnknownChart(id.clone()))?;
            let d = CartierDivisor::on_chart(chart, chart.parse(f)?)?;
            equations.extend(d.equations);
        }
        Ok(CartierDivisor { equations })
    }

    pub fn retract_list(&self) -> Result<Vec<Retract>> {
        self.retracts.iter().map(RetractJson::to_retract).collect()
    }

    pub fn selectors(&self) -> Result<Vec<CenterSelector>> {
        self.centers.iter().map(CenterJson::to_selector).collect()
    }

    /// The chart map `O_source -> O_target`.
    pub fn chart_map(&self) -> Result<(Chart, Chart, RingMap)> {
        let (Some(s), Some(t)) = (&self.source, &self.target) else {
            return Err(Error::InvalidInput("`source` and `target` are required".into()));
        };
        let (s, t) = (s.to_chart()?, t.to_chart()?);
        let map = RingMap::new(s.ring().clone(), t.ring().clone(), parse_images(&self.images)?)?;
        Ok((s, t, map))
    }
}

fn parse_images(images: &BTreeMap<String, String>) -> Result<BTreeMap<String, Poly>> {
    images
        .iter()
        .map(|(v, p)| Ok((v.clone(), p.parse()?)))
        .collect()
}

pub fn monomial_divisor(d: &MonomialDivisor) -> Value {
    let m: BTreeMap<String, u32> = d
        .multiplicities()
        .iter()
        .map(|(l, n)| (l.to_string(), *n))
        .collect();
    json!(m)
}

pub fn boundary(e: &OrderedBoundary) -> Value {
    json!(e
        .iter()
        .map(|(label, var)| BoundaryEntry {
            label,
            var: var.to_string()
        })
        .collect::<Vec<_>>())
}

pub fn ring_map(m: &RingMap) -> Value {
    let images: BTreeMap<&String, String> =
        m.images().iter().map(|(v, p)| (v, p.to_string())).collect();
    json!(images)
}

pub fn atlas(a: &Atlas) -> Value {
    json!({
        "n": a.base_exponent,
        "charts": a.charts.iter().map(ChartJson::from_chart).collect::<Vec<_>>(),
        "maps": a.maps.iter().map(|m| MapJson {
            source: m.source.clone(),
            target: m.target.clone(),
            images: m.map.images().iter().map(|(v, p)| (v.clone(), p.to_string())).collect(),
        }).collect::<Vec<_>>(),
    })
}

fn role(r: &ChildRole) -> Value {
    match r {
        ChildRole::Regular { var, renamed } => {
            json!({"kind": r.tag(), "var": var, "renamed": renamed})
        }
        ChildRole::TrivialReduction => json!({"kind": r.tag()}),
        ChildRole::LogT { var } => json!({"kind": r.tag(), "var": var}),
        ChildRole::LogEps { var, renamed } => {
            json!({"kind": r.tag(), "var": var, "renamed": renamed})
        }
    }
}

pub fn step(s: &BlowupStep) -> Value {
    json!({
        "parent": s.parent,
        "center": center_json(&s.center),
        "label": s.new_label,
        "children": s.children.iter().map(|c| json!({
            "chart": ChartJson::from_chart(&c.chart),
            "role": role(&c.role),
            "map": ring_map(&c.map),
            "exceptional": c.exceptional.to_string(),
        })).collect::<Vec<_>>(),
    })
}

pub fn steps(s: &[BlowupStep]) -> Value {
    json!({ "steps": s.iter().map(step).collect::<Vec<_>>() })
}

pub fn tree(t: &BlowupTree) -> Value {
    let roots: Vec<ChartJson> = t
        .roots()
        .iter()
        .map(|r| ChartJson::from_chart(t.chart(r).expect("root")))
        .collect();
    json!({
        "roots": roots,
        "steps": t.steps().iter().map(step).collect::<Vec<_>>(),
        "leaves": t.leaves(),
        "skipped": t.skipped(),
    })
}

pub fn subscheme(z: &Subscheme) -> Value {
    let m: BTreeMap<&String, Vec<String>> = z
        .gens
        .iter()
        .map(|(id, g)| (id, g.iter().map(ToString::to_string).collect()))
        .collect();
    json!(m)
}

pub fn cartier_divisor(d: &CartierDivisor) -> Value {
    let m: BTreeMap<&String, String> = d
        .equations
        .iter()
        .map(|(id, f)| (id, f.to_string()))
        .collect();
    json!(m)
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_round_trip() {
        let c = Chart::ptm("root", ["x", "y", "eps"], "eps", 3)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs([(1, "x"), (3, "y")]).unwrap())
            .unwrap()
            .with_pi(&"1/2*eps*x - eps^2*y".parse().unwrap())
            .unwrap();
        let j = serde_json::to_string(&ChartJson::from_chart(&c)).unwrap();
        let back: ChartJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_chart().unwrap(), c);
    }

    #[test]
    fn general_chart_round_trip() {
        let ring = QuotientRing::new(["eps'", "x"], "eps'^2*x^2".parse::<Poly>().unwrap().as_term().unwrap().1.clone()).unwrap();
        let c = Chart::general("r.x", ring, "eps'", 2)
            .unwrap()
            .with_component(Some(Monomial::power("eps'", 2)));
        let back = ChartJson::from_chart(&c).to_chart().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_input("{\n  \"charts\": [,]\n}").unwrap_err();
        match err {
            Error::Parse { pos, msg } => {
                assert_eq!(pos, 15);
                assert!(msg.starts_with("line 2 column 14"), "{msg}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse_input("{\"chart\": []}").is_err());
    }

    #[test]
    fn center_needs_one_kind() {
        let c = CenterJson {
            vars: Some(vec!["x".into()]),
            log: Some("x".into()),
            ..Default::default()
        };
        assert!(c.to_center().is_err());
    }
}
