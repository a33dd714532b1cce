//! Principalize `(x^2, y^3)` on `k[x, y, eps]/(eps^2)`.
//!
//! The built-in oracle works on the reduction `k[x, y]`; its centers
//! `V(t_S)` are lifted to `V(eps, t_S)`.
//!
//! ```bash
//! cargo run --example principalize
//! ```

use thickres::chart::{Atlas, Chart};
use thickres::divisors::Subscheme;
use thickres::principalize::{pushforward_principalization, MonomialOracle};

fn main() -> thickres::Result<()> {
    let x = Chart::ptm("X", ["x", "y", "eps"], "eps", 2)?;
    let z = Subscheme::on_chart(&x, &["x^2".parse()?, "y^3".parse()?])?;
    let res = pushforward_principalization(&Atlas::single(x, 2), &z, &MonomialOracle::default())?;
    for (parent, center) in res.tree.center_sequence() {
        println!("blow up {center} on {parent}");
    }
    for leaf in res.tree.leaf_charts() {
        let gens: Vec<String> = res.transform.gens[&leaf.id].iter().map(|g| g.to_string()).collect();
        println!("{leaf}\n  transform ({})", gens.join(", "));
    }
    Ok(())
}
