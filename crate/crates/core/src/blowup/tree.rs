use std::collections::BTreeMap;

use super::{apply_center, BlowupStep, Center};
use crate::chart::{Atlas, Chart};
use crate::error::{Error, Result};
use crate::ring::RingMap;

/// Which leaves a center applies to: one named leaf, or every current leaf
/// on which it makes sense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterSelector {
    pub chart: Option<String>,
    pub center: Center,
}

impl CenterSelector {
    pub fn on(chart: impl Into<String>, center: Center) -> Self {
        CenterSelector {
            chart: Some(chart.into()),
            center,
        }
    }

    pub fn everywhere(center: Center) -> Self {
        CenterSelector {
            chart: None,
            center,
        }
    }
}

/// Charts connected by blowup steps. Leaves are kept in a deterministic
/// order: a blown-up leaf is replaced in place by its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupTree {
    roots: Vec<String>,
    charts: BTreeMap<String, Chart>,
    steps: Vec<BlowupStep>,
    leaves: Vec<String>,
    parent: BTreeMap<String, usize>,
    skipped: usize,
    next_label: u32,
}

impl BlowupTree {
    pub fn new(roots: Vec<Chart>) -> Result<Self> {
        let mut charts = BTreeMap::new();
        let mut ids = Vec::new();
        let mut next_label = 1;
        for c in roots {
            next_label = next_label.max(c.boundary.len() + 1);
            ids.push(c.id.clone());
            if charts.insert(c.id.clone(), c).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate chart id `{}`",
                    ids.last().unwrap()
                )));
            }
        }
        Ok(BlowupTree {
            leaves: ids.clone(),
            roots: ids,
            charts,
            steps: Vec::new(),
            parent: BTreeMap::new(),
            skipped: 0,
            next_label,
        })
    }

    pub fn from_chart(chart: Chart) -> Self {
        Self::new(vec![chart]).expect("single chart")
    }

    pub fn from_atlas(atlas: &Atlas) -> Result<Self> {
        Self::new(atlas.charts.clone())
    }

    pub fn roots(&self) -> &[String] {
        &self.roots
    }

    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn leaf_charts(&self) -> impl Iterator<Item = &Chart> {
        self.leaves.iter().map(|id| &self.charts[id])
    }

    pub fn chart(&self, id: &str) -> Result<&Chart> {
        self.charts
            .get(id)
            .ok_or_else(|| Error::UnknownChart(id.to_string()))
    }

    pub fn charts(&self) -> impl Iterator<Item = &Chart> {
        self.charts.values()
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    /// The first unused boundary label.
    pub fn next_label(&self) -> u32 {
        self.next_label
    }

    pub(crate) fn allocate_label(&mut self) -> u32 {
        let l = self.next_label;
        self.next_label += 1;
        l
    }

    pub fn is_leaf(&self, id: &str) -> bool {
        self.leaves.iter().any(|l| l == id)
    }

    /// Attach a boundary label to a variable of a leaf.
    pub(crate) fn label_leaf_var(&mut self, leaf: &str, var: &str, label: u32) -> Result<()> {
        let chart = self
            .charts
            .get_mut(leaf)
            .ok_or_else(|| Error::UnknownChart(leaf.to_string()))?;
        chart.boundary.insert(label, var)?;
        self.next_label = self.next_label.max(label + 1);
        Ok(())
    }

    /// Blow up one leaf; returns the index of the new step.
    pub fn apply(&mut self, leaf: &str, center: &Center) -> Result<usize> {
        self.apply_labeled(leaf, center, self.next_label)
    }

    /// Like [`BlowupTree::apply`], with an explicit label for a regular
    /// center (several leaves may share one global center).
    pub(crate) fn apply_labeled(&mut self, leaf: &str, center: &Center, label: u32) -> Result<usize> {
        let pos = self
            .leaves
            .iter()
            .position(|l| l == leaf)
            .ok_or_else(|| Error::UnknownChart(leaf.to_string()))?;
        let step = apply_center(&self.charts[leaf], center, label)?;
        if step.new_label.is_some() {
            self.next_label = self.next_label.max(label + 1);
        }
        Ok(self.push_step(pos, step))
    }

    fn push_step(&mut self, pos: usize, step: BlowupStep) -> usize {
        let idx = self.steps.len();
        let ids: Vec<String> = step.children.iter().map(|c| c.chart.id.clone()).collect();
        for c in &step.children {
            self.charts.insert(c.chart.id.clone(), c.chart.clone());
            self.parent.insert(c.chart.id.clone(), idx);
        }
        self.leaves.splice(pos..=pos, ids);
        self.steps.push(step);
        idx
    }

    /// Apply the selectors in order. A selector without a chart applies to
    /// every current leaf where its center is meaningful; all of those
    /// blowups form one global center and share one exceptional label.
    /// Leaves where it is not are counted as skipped.
    pub fn run_sequence(&mut self, selectors: &[CenterSelector]) -> Result<()> {
        for sel in selectors {
            match &sel.chart {
                Some(id) => {
                    self.apply(id, &sel.center)?;
                }
                None => {
                    let label = self.next_label;
                    let mut used_label = false;
                    for leaf in self.leaves.clone() {
                        let chart = &self.charts[&leaf];
                        if !applies(chart, &sel.center) {
                            self.skipped += 1;
                            continue;
                        }
                        let step = apply_center(chart, &sel.center, label)?;
                        used_label |= step.new_label.is_some();
                        let pos = self.leaves.iter().position(|l| *l == leaf).expect("leaf");
                        self.push_step(pos, step);
                    }
                    if used_label {
                        self.next_label += 1;
                    }
                }
            }
        }
        Ok(())
    }

    /// The step that produced `id`, if any.
    pub fn step_into(&self, id: &str) -> Option<&BlowupStep> {
        self.parent.get(id).map(|i| &self.steps[*i])
    }

    /// Steps from the root down to `id`.
    pub fn path(&self, id: &str) -> Vec<&BlowupStep> {
        let mut out = Vec::new();
        let mut cur = id.to_string();
        while let Some(step) = self.step_into(&cur) {
            out.push(step);
            cur = step.parent.clone();
        }
        out.reverse();
        out
    }

    pub fn root_of(&self, id: &str) -> String {
        self.path(id)
            .first()
            .map(|s| s.parent.clone())
            .unwrap_or_else(|| id.to_string())
    }

    /// The composite map from the root ring to the ring of `id`.
    pub fn composite_map(&self, id: &str) -> Result<RingMap> {
        let mut chain = Vec::new();
        let mut cur = id.to_string();
        while let Some(&i) = self.parent.get(&cur) {
            chain.push((i, cur.clone()));
            cur = self.steps[i].parent.clone();
        }
        let root = self.chart(&cur)?;
        let mut acc = RingMap::identity(root.ring().clone());
        for (i, child_id) in chain.into_iter().rev() {
            let child = self.steps[i]
                .children
                .iter()
                .find(|c| c.chart.id == child_id)
                .expect("recorded child");
            acc = acc.then(&child.map)?;
        }
        Ok(acc)
    }

    /// `(parent, center)` for every step, in order.
    pub fn center_sequence(&self) -> Vec<(String, Center)> {
        self.steps
            .iter()
            .map(|s| (s.parent.clone(), s.center.clone()))
            .collect()
    }
}

fn applies(chart: &Chart, center: &Center) -> bool {
    match center {
        Center::Regular(s) => {
            chart.is_ptm()
                && s.iter()
                    .all(|v| v != chart.eps() && chart.ring().has_var(v))
        }
        Center::ReducedDivisor(f) => {
            chart.is_ptm() && chart.h() >= 2 && super::divisor_monomial(chart, f).is_ok()
        }
        Center::LogReducedDivisor(t) => {
            chart.h() >= 2
                && chart.boundary.contains_var(t)
                && (chart.is_ptm() || chart.component().is_some())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Poly;

    #[test]
    fn two_divisor_blowups_compose() {
        let c = Chart::ptm("root", ["eps", "x"], "eps", 3).unwrap();
        let mut tree = BlowupTree::from_chart(c);
        let x: Poly = "x".parse().unwrap();
        tree.run_sequence(&[
            CenterSelector::everywhere(Center::ReducedDivisor(x.clone())),
            CenterSelector::everywhere(Center::ReducedDivisor(x)),
        ])
        .unwrap();
        assert_eq!(tree.leaves().len(), 1);
        let leaf = &tree.leaves()[0];
        let m = tree.composite_map(leaf).unwrap();
        assert_eq!(m.to_string(), "eps -> eps''*x^2");
    }

    #[test]
    fn empty_sequence_is_identity() {
        let c = Chart::ptm("root", ["eps", "x"], "eps", 3).unwrap();
        let mut tree = BlowupTree::from_chart(c);
        let before = tree.clone();
        tree.run_sequence(&[]).unwrap();
        assert_eq!(tree, before);
    }

    #[test]
    fn leaves_are_spliced_in_place() {
        let a = Chart::ptm("a", ["eps", "x", "y"], "eps", 2).unwrap();
        let b = Chart::ptm("b", ["eps", "x"], "eps", 2).unwrap();
        let mut tree = BlowupTree::new(vec![a, b]).unwrap();
        tree.apply("a", &Center::regular(["x", "y"])).unwrap();
        assert_eq!(tree.leaves(), &["a.x", "a.y", "b"]);
        tree.run_sequence(&[CenterSelector::everywhere(Center::regular(["y"]))])
            .unwrap();
        // a.x has y', not y; a.y has y
        assert_eq!(tree.skipped(), 2);
        assert_eq!(tree.leaves(), &["a.x", "a.y.y", "b"]);
    }
}
