//! Time evolution on the grid in the Schrödinger and Heisenberg pictures.
//!
//! The propagator is `U(t) = exp(-iHt/ħ)`, evaluated exactly from an
//! eigendecomposition of the Hermitian Hamiltonian, so picture-equivalence
//! checks carry no time-stepping error. With this sign `iħ ∂ψ/∂t = Hψ` and
//! `iħ dA_H/dt = [A_H, H]`.

mod divergence;
mod propagator;

pub use divergence::{
    divergence_experiment, grid_hamiltonian, DivergenceReport, DivergenceSample, DivergenceSummary, GapKind,
    GapReport, CENTRAL_TOLERANCE,
};
pub use propagator::{
    check_heisenberg_equation, check_schrodinger_equation, convergence_order, evolve_state,
    heisenberg_observable, picture_gap, PictureState, Propagator, HERMITIAN_TOLERANCE,
};
