//! Chart-level calculus on principally thick manifolds.
//!
//! A ptm chart is `k[eps, t_1..t_m]/(eps^h)`. This crate blows such charts
//! up along regular centers, reduced divisors and (logarithmically) along
//! boundary components; tracks boundaries and transforms; principalizes
//! monomial ideals by pushing forward a principalization of the reduction;
//! factors modifications with trivial reduction; extends retracts; and
//! resolves `X -> B = Spec k[pi]/(pi^n)` into distinguished B-pairs that
//! embed as components of log smooth charts.
//!
//! ```
//! use thickres::chart::Chart;
//! use thickres::blowup::blowup_regular;
//!
//! let x = Chart::ptm("root", ["eps", "x"], "eps", 2).unwrap();
//! let step = blowup_regular(&x, &["x".to_string()].into()).unwrap();
//! assert_eq!(step.children[0].map.to_string(), "eps -> eps'*x");
//! ```

pub mod blowup;
pub mod chart;
pub mod cli;
pub mod divisors;
pub mod error;
pub mod json;
pub mod pipeline;
pub mod principalize;
pub mod ring;
pub mod selftest;
pub mod structure;

pub use error::{Error, Result};
