//! Print a blowup tree as Graphviz.
//!
//! ```bash
//! cargo run --example dot_tree | dot -Tsvg > tree.svg
//! ```

use thickres::blowup::{to_dot, BlowupTree, Center, CenterSelector};
use thickres::chart::Chart;
use thickres::ring::Monomial;

fn main() -> thickres::Result<()> {
    let x = Chart::ptm("X", ["x", "y", "eps"], "eps", 2)?;
    let mut tree = BlowupTree::from_chart(x);
    tree.run_sequence(&[
        CenterSelector::everywhere(Center::regular(["x", "y"])),
        CenterSelector::on("X.x", Center::divisor(Monomial::var("x"))),
    ])?;
    print!("{}", to_dot(&tree));
    Ok(())
}
