//! Factor a trivial-reduction chart map into reduced-divisor blowups.
//!
//! `eps -> x^2 (e + e^2)` is the composite of two blowups of `V(eps, x)`
//! followed by the change of nilpotent parameter `eps'' -> e + e^2`.
//!
//! ```bash
//! cargo run --example factorize
//! ```

use std::collections::BTreeMap;

use thickres::chart::Chart;
use thickres::divisors::OrderedBoundary;
use thickres::ring::RingMap;
use thickres::structure::factor_trivial_modification;

fn main() -> thickres::Result<()> {
    let boundary = OrderedBoundary::from_pairs([(1, "x")])?;
    let x = Chart::ptm("X", ["x", "eps"], "eps", 3)?.with_boundary(boundary.clone())?;
    let y = Chart::ptm("Y", ["x", "e"], "e", 3)?.with_boundary(boundary)?;
    let mut images = BTreeMap::new();
    images.insert("eps".to_string(), "x^2*e + x^2*e^2".parse()?);
    images.insert("x".to_string(), "x".parse()?);
    let map = RingMap::new(x.ring().clone(), y.ring().clone(), images)?;

    let f = factor_trivial_modification(&x, &y, &map)?;
    println!("path {}", f.path);
    println!("replayed chart {}", f.replay_leaf());
    println!("isomorphism onto {}: {}", f.y_chart, f.iso);
    Ok(())
}
