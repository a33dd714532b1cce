//! Log blowup of `(t, eps)` on `k[t, eps]/(eps^n)`.
//!
//! The t-chart is no longer a ptm chart: its relation is `eps'^n t^n`, and
//! its component `(eps'^n)` is the ordinary blowup of the reduced divisor.
//!
//! ```bash
//! cargo run --example log_blowup
//! ```

use thickres::blowup::{blowup_reduced_divisor, log_blowup_reduced_divisor};
use thickres::chart::Chart;
use thickres::divisors::OrderedBoundary;
use thickres::ring::Poly;

fn main() -> thickres::Result<()> {
    for n in 2..=4 {
        let x = Chart::ptm("X", ["t", "eps"], "eps", n)?
            .with_boundary(OrderedBoundary::from_pairs([(1, "t")])?)?;
        let step = log_blowup_reduced_divisor(&x, "t")?;
        println!("{x}");
        for child in &step.children {
            println!("  [{}] {}   via {}", child.role.tag(), child.chart, child.map);
        }
        let strict = blowup_reduced_divisor(&x, &Poly::var("t"))?;
        println!("  ordinary blowup of V(eps, t): {}", strict.children[0].chart.ring());
    }
    Ok(())
}
