//! Extend the generic retract `s(x) = x + x^-3 eps^2` to a regular one.
//!
//! The invariant `n(V(x)) = 2` drops to 1 and then to 0, one blowup of
//! `V(eps, x)` per round.
//!
//! ```bash
//! cargo run --example retract
//! ```

use thickres::chart::{Atlas, Chart};
use thickres::divisors::OrderedBoundary;
use thickres::structure::{extend_retract, retract_invariant, Retract};

fn main() -> thickres::Result<()> {
    let x = Chart::ptm("X", ["x", "eps"], "eps", 3)?
        .with_boundary(OrderedBoundary::from_pairs([(1, "x")])?)?;
    let mut r = Retract::trivial(&x);
    r.sections
        .get_mut("x")
        .expect("coordinate")
        .insert(2, "(1)/(x^3)".parse()?);
    println!("n(V(x)) = {}", retract_invariant(&x, &r, "x")?);

    let ext = extend_retract(&Atlas::single(x, 3), &[r])?;
    println!("maxima (n, label) per round: {:?}", ext.maxima);
    for (leaf, r) in &ext.retracts {
        let chart = ext.tree.chart(leaf)?;
        println!("{chart}\n  s(x) = {}", r.image(chart, "x")?);
    }
    Ok(())
}
