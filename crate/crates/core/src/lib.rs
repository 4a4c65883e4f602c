//! Exact symbolic computations in the tautological rings attached to the
//! partial compactification of the universal family of principally
//! polarized abelian varieties.
//!
//! - [`exact_arith`]: rationals, factorials, double factorials, Bernoulli numbers.
//! - [`poly`]: sparse polynomials over named variables, parser and formatters.
//! - [`chow_ring`]: the genus-`g` quotient rings, normal forms, dimensions,
//!   pushforwards, pairings, shift/involution operators, invariant classes.
//! - [`zero_section`]: the coefficient families of the zero-section formula
//!   and verifiers for it.
//! - [`dr_class`]: the double ramification class over formal divisor symbols.

pub mod chow_ring;
pub mod dr_class;
pub mod error;
pub mod exact_arith;
pub mod linalg;
pub mod poly;
pub mod zero_section;

pub use chow_ring::{InvariantBasis, RingContext};
pub use error::{Error, Result};
pub use exact_arith::Rational;
pub use poly::{FormatMode, Monomial, Polynomial, VarSet};
