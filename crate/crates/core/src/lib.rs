//! Operator-ordering calculus for a single canonical pair `(q, p)`.
//!
//! The crate has two halves that are meant to be checked against each other:
//!
//! * an exact side ([`ncalg`], [`quantrules`]) where operators are
//!   noncommutative polynomials in `q`, `p` with coefficients that are
//!   polynomials in `h` (standing for ħ) over the complex rationals, and
//!   the Born–Jordan, Weyl and τ ordering rules act on classical monomials;
//! * a numerical side ([`gridrep`], [`phasespace`], [`dynamics`]) where
//!   operators are dense matrices on a periodic position grid, built from
//!   arbitrary classical symbols through their configuration-space kernels.
//!
//! Conventions used throughout: `pq - qp = -iħ`, propagators are
//! `U(t) = exp(-iHt/ħ)`, and matrix entry `(i, j)` of an operator is
//! `Δq · ⟨q_i|A|q_j⟩` (column = input point, row = output point).

pub mod dynamics;
pub mod error;
pub mod gridrep;
pub mod ncalg;
pub mod phasespace;
pub mod quadrature;
pub mod quantrules;

pub use error::{Error, Result};
