//! Phase-space transforms, weak values and the dequantization witness.
//!
//! Tables live on the grid `(q_a, p_m)` of [`GridSpec`](crate::gridrep::GridSpec).
//! Normalizations are fixed in one place each: [`cross_wigner`] carries
//! `Δq/2πħ`, integrals over phase space carry `ΔqΔp` (see
//! [`PhaseSpaceFunction::pair`]), and the 2-D inverse transform in
//! [`apply_fafb`] carries `1/N²`. Together they give `∬ W(φ,ψ) = ⟨ψ|φ⟩` and
//! `∬ A·W(φ,ψ) = ⟨ψ|A_W|φ⟩`.

mod function;
mod state;
mod transforms;
mod weak;

pub use function::{CsvPart, PhaseSpaceFunction};
pub use state::StateVector;
pub use transforms::{
    apply_fafb, compare_fafb, cross_wigner, theta, theta_at_indices, weyl_symbol_of, FafbComparison,
    ThetaMultiplier,
};
pub use weak::{
    dequantization_witness, grid_steps, norm_ratio, weak_value, weak_value_phase_space, witness_at,
    witness_at_steps, zero_set_point, DequantizationWitness, PhaseSpaceRule, ORTHOGONALITY_THRESHOLD,
};
