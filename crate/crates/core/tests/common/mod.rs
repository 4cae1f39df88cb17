#![allow(dead_code)]

use num_complex::Complex64;
use opcalc::gridrep::{GridSpec, OperatorMatrix};
use opcalc::phasespace::StateVector;

/// Gaussians with negligible mass within L/4 of the box edges, narrow enough
/// that no pair of points more than L apart carries weight in both.
pub fn interior_states(grid: GridSpec) -> Vec<StateVector> {
    let states: Vec<StateVector> = [(0.0, 0.0, 0.7), (-0.5, 0.5, 0.7), (0.4, -1.0, 0.6)]
        .iter()
        .map(|&(q0, p0, s)| StateVector::gaussian(grid, q0, p0, s).unwrap())
        .collect();
    for s in &states {
        assert!(s.edge_mass(grid.half_width() / 4.0) < 1e-12);
    }
    states
}

/// `max |⟨φ|A|ψ⟩ - ⟨φ|B|ψ⟩|` over all pairs of the given states.
pub fn element_gap(a: &OperatorMatrix, b: &OperatorMatrix, states: &[StateVector]) -> f64 {
    let mut worst = 0.0f64;
    for psi in states {
        let x = psi.apply(a).unwrap();
        let y = psi.apply(b).unwrap();
        for phi in states {
            let d = phi.inner(&x).unwrap() - phi.inner(&y).unwrap();
            worst = worst.max(d.norm());
        }
    }
    worst
}

pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}
