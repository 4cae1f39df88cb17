//! Born–Jordan, Weyl and τ ordering of classical polynomials.
//!
//! Each rule maps `p^s q^r` to a combination of the words `p^a q^r p^b` and
//! returns the canonical form, so two quantizations are equal as operators
//! exactly when the returned polynomials are equal.

mod classical;
mod rules;
pub mod suite;

pub use classical::{ClassicalMonomial, ClassicalPolynomial};
pub use rules::{
    bj_from_tau_average, bj_from_tau_quadrature, bj_quantize, bj_quantize_qform, bj_weyl_gap,
    check_motion_identities, classify_gap, find_noncentral_monomial, max_coeff_diff, quantize_monomial,
    quantize_polynomial, tau_expansion, tau_quantize, to_numeric, weyl_quantize, GapClass, NumericPolynomial,
    Rule, TauParameter,
};
