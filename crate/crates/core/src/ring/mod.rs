//! Exact arithmetic over the rationals in `k[vars]` and `k[vars]/(monomial)`.

mod map;
mod monomial;
pub(crate) mod parse;
mod poly;
mod quotient;
mod ratfunc;

pub use map::RingMap;
pub use monomial::Monomial;
pub use poly::Poly;
pub use quotient::{QuotientRing, RingElem};
pub use ratfunc::RationalFunction;

/// Arbitrary-precision rationals, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Shorthand for a small rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
