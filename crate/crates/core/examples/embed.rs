//! Realize the resolved chart of `pi = eps x` as a component of a log
//! smooth chart `k[pi', x]/(pi'^2 x^2)`.
//!
//! ```bash
//! cargo run --example embed
//! ```

use std::collections::BTreeMap;

use thickres::chart::{Atlas, Chart};
use thickres::divisors::Subscheme;
use thickres::pipeline::{embed_log_smooth, resolve_over_b, BaseSpec};
use thickres::principalize::MonomialOracle;

fn main() -> thickres::Result<()> {
    let x = Chart::ptm("X", ["x", "eps"], "eps", 2)?.with_pi(&"eps*x".parse()?)?;
    let base = BaseSpec::new(2)?;
    let res = resolve_over_b(&Atlas::single(x, 2), &Subscheme::default(), &base, &MonomialOracle::default())?;
    for e in embed_log_smooth(&res, &BTreeMap::new())? {
        println!("leaf {} embeds via Y' = {}", e.leaf, e.y_prime);
        for c in e.charts() {
            println!("  {c}   pi = {}", e.pi_images[&c.id]);
        }
        println!("  component on {}", e.component_chart);
    }
    Ok(())
}
