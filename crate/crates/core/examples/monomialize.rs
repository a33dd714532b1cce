//! Make the divisor `y^2 + eps` boundary-monomial.
//!
//! Its reduction `y^2` is already monomial; two reduced-divisor blowups
//! along `V(y)` turn the divisor itself into `unit * y^2`.
//!
//! ```bash
//! cargo run --example monomialize
//! ```

use thickres::chart::{Atlas, Chart};
use thickres::divisors::{CartierDivisor, OrderedBoundary};
use thickres::principalize::monomialize_divisor;

fn main() -> thickres::Result<()> {
    let x = Chart::ptm("X", ["y", "eps"], "eps", 2)?
        .with_boundary(OrderedBoundary::from_pairs([(1, "y")])?)?;
    let f = x.parse("y^2 + eps")?;
    let d = CartierDivisor::on_chart(&x, f)?;
    let res = monomialize_divisor(&Atlas::single(x, 2), &d)?;
    for (leaf, f) in &res.divisor.equations {
        let (unit, m) = f.unit_monomial_decompose().expect("certified");
        println!("{leaf}: {f} = ({unit}) * {m}, multiplicities {}", res.multiplicities[leaf]);
    }
    Ok(())
}
