use std::fmt::Write;

use super::BlowupTree;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: one node per chart (roots first, then children in
/// step order), one edge per child labelled with its center and map.
pub fn to_dot(tree: &BlowupTree) -> String {
    let mut out = String::from("digraph blowups {\n  node [shape=box];\n");
    let node = |id: &str, out: &mut String| {
        let chart = tree.chart(id).expect("tree chart");
        let mut label = format!("{}\\n{}", chart.id, chart.ring());
        if !chart.boundary.is_empty() {
            let _ = write!(label, "\\nE={}", chart.boundary);
        }
        if let Some(pi) = chart.pi() {
            let _ = write!(label, "\\npi={pi}");
        }
        if let Some(c) = chart.component() {
            let _ = write!(label, "\\ncomponent=({c})");
        }
        let _ = writeln!(out, "  {} [label={}];", quote(id), quote(&label));
    };
    for r in tree.roots() {
        node(r, &mut out);
    }
    for step in tree.steps() {
        for c in &step.children {
            node(&c.chart.id, &mut out);
        }
    }
    for step in tree.steps() {
        for c in &step.children {
            let label = format!("{} [{}]\\n{}", step.center, c.role.tag(), c.map);
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                quote(&step.parent),
                quote(&c.chart.id),
                quote(&label)
            );
        }
    }
    out.push_str("}\n");
    out
}
