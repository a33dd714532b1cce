//! Resolve charts over `B = k[pi]/(pi^n)` into distinguished B-pairs.
//!
//! ```bash
//! cargo run --example resolve_over_b
//! ```

use thickres::chart::{Atlas, Chart};
use thickres::divisors::Subscheme;
use thickres::pipeline::{resolve_over_b, smooth_away_from_snc, BaseSpec};
use thickres::principalize::MonomialOracle;

fn main() -> thickres::Result<()> {
    let oracle = MonomialOracle::default();
    for (n, pi) in [(2, "eps*x"), (3, "eps*x^2 + eps^2"), (2, "eps*x*y")] {
        let x = Chart::ptm("X", ["x", "y", "eps"], "eps", n)?.with_pi(&pi.parse()?)?;
        let base = BaseSpec::new(n)?;
        let atlas = Atlas::single(x, n);
        let res = resolve_over_b(&atlas, &Subscheme::default(), &base, &oracle)?;
        println!("pi = {pi} over k[pi]/(pi^{n}): {} blowups", res.tree.steps().len());
        for (leaf, w) in &res.witnesses {
            println!("  {leaf}: pi = ({}) * {} * E^{}", w.unit, w.eps, w.d);
        }
        for l in &smooth_away_from_snc(&atlas, &base, &oracle)?.loci {
            println!("  not smooth along V({}) on {}", l.vars.join("*"), l.chart);
        }
    }
    Ok(())
}
