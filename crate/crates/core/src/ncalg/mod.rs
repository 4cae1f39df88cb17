//! Exact noncommutative polynomials in one canonical pair.
//!
//! Coefficients are polynomials in ħ over the complex rationals, so every
//! identity is checked with zero rounding. The canonical form places every
//! `q` to the left of every `p`, reached by rewriting `pq = qp - iħ`.

mod poly;
pub mod scalar;
pub mod text;
mod word;

pub use poly::{check_power_identity, NCPolynomial, RewriteStrategy};
pub use scalar::{ExactComplex, HbarScalar};
pub use text::parse_polynomial;
pub use word::{Letter, Word};
