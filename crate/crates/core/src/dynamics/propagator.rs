use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::Result;
use crate::gridrep::{GridSpec, OperatorMatrix};
use crate::phasespace::StateVector;

/// Relative Hermiticity tolerance for Hamiltonians.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// `U(t) = exp(-iHt/ħ)` from a cached eigendecomposition of `H`.
#[derive(Clone, Debug)]
pub struct Propagator {
    hamiltonian: OperatorMatrix,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Propagator {
    /// Rejects Hamiltonians with `max |H - H†| > 1e-10 · max |H|`. The
    /// decomposition uses the Hermitian part, so rounding-level asymmetry is
    /// dropped.
    pub fn new(hamiltonian: &OperatorMatrix) -> Result<Self> {
        let mut h = hamiltonian.clone();
        h.certify_hermitian(HERMITIAN_TOLERANCE)?;
        let h = h.hermitian_part();
        let eig = SymmetricEigen::new(h.entries().clone());
        Ok(Self { hamiltonian: h, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors })
    }

    pub fn grid(&self) -> &GridSpec {
        self.hamiltonian.grid()
    }

    pub fn hamiltonian(&self) -> &OperatorMatrix {
        &self.hamiltonian
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    fn phases(&self, t: f64) -> DVector<Complex64> {
        let hbar = self.grid().hbar();
        self.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t / hbar))
    }

    /// `U(t)`; exactly the identity at `t = 0`.
    pub fn unitary(&self, t: f64) -> OperatorMatrix {
        if t == 0.0 {
            return OperatorMatrix::identity(*self.grid());
        }
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (mut col, ph) in scaled.column_iter_mut().zip(self.phases(t).iter()) {
            col *= *ph;
        }
        OperatorMatrix::from_entries(*self.grid(), scaled * v.adjoint()).expect("square matrix on the grid")
    }

    /// `max |U(t)U(t)† - I|`.
    pub fn unitarity_residual(&self, t: f64) -> f64 {
        let u = self.unitary(t);
        let n = self.grid().n();
        let prod = u.entries() * u.entries().adjoint();
        (prod - DMatrix::<Complex64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `U(t)ψ₀`, applied in the eigenbasis.
pub fn evolve_state(prop: &Propagator, psi0: &StateVector, t: f64) -> Result<StateVector> {
    prop.grid().check_same(psi0.grid())?;
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let v = &prop.eigenvectors;
    let coeffs = v.adjoint() * psi0.amplitudes();
    let rotated = coeffs.component_mul(&prop.phases(t));
    StateVector::new(*psi0.grid(), v * rotated)
}

/// `A_H(t) = U(t)† A U(t)`; `A` itself at `t = 0`.
pub fn heisenberg_observable(prop: &Propagator, a: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    prop.grid().check_same(a.grid())?;
    if t == 0.0 {
        return Ok(a.clone());
    }
    let u = prop.unitary(t);
    u.adjoint().try_mul(a)?.try_mul(&u)
}

/// `max |iħ (A_H(t+δ) - A_H(t-δ)) / 2δ - [A_H(t), H]|`, which is `O(δ²)`
/// for a time-independent `A`.
pub fn check_heisenberg_equation(prop: &Propagator, a: &OperatorMatrix, t: f64, delta: f64) -> Result<f64> {
    let ih = Complex64::new(0.0, prop.grid().hbar());
    let forward = heisenberg_observable(prop, a, t + delta)?;
    let backward = heisenberg_observable(prop, a, t - delta)?;
    let lhs = forward.try_sub(&backward)?.scale(ih / (2.0 * delta));
    let rhs = heisenberg_observable(prop, a, t)?.commutator(prop.hamiltonian())?;
    lhs.max_abs_diff(&rhs)
}

/// `‖iħ (ψ(t+δ) - ψ(t-δ)) / 2δ - Hψ(t)‖`, the finite-difference residual of
/// the Schrödinger equation.
pub fn check_schrodinger_equation(prop: &Propagator, psi0: &StateVector, t: f64, delta: f64) -> Result<f64> {
    let ih = Complex64::new(0.0, prop.grid().hbar());
    let forward = evolve_state(prop, psi0, t + delta)?;
    let backward = evolve_state(prop, psi0, t - delta)?;
    let now = evolve_state(prop, psi0, t)?;
    let lhs = (forward.amplitudes() - backward.amplitudes()) * (ih / (2.0 * delta));
    let rhs = prop.hamiltonian().apply(now.amplitudes())?;
    StateVector::new(*psi0.grid(), lhs - rhs).map(|r| r.norm())
}

/// Least-squares slope of `log residual` against `log δ`.
pub fn convergence_order(deltas: &[f64], residuals: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = deltas.iter().zip(residuals).map(|(d, r)| (d.ln(), r.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// A state in both pictures: the evolving Schrödinger ket and the fixed
/// Heisenberg ket `ψ_H = ψ_S(0)`.
#[derive(Clone, Debug)]
pub struct PictureState {
    pub time: f64,
    pub schrodinger: StateVector,
    pub heisenberg: StateVector,
}

impl PictureState {
    pub fn new(psi0: StateVector) -> Self {
        Self { time: 0.0, schrodinger: psi0.clone(), heisenberg: psi0 }
    }

    pub fn at(&self, prop: &Propagator, t: f64) -> Result<Self> {
        Ok(Self {
            time: t,
            schrodinger: evolve_state(prop, &self.heisenberg, t)?,
            heisenberg: self.heisenberg.clone(),
        })
    }

    /// `⟨ψ_S(t)|A|ψ_S(t)⟩`.
    pub fn schrodinger_expectation(&self, a: &OperatorMatrix) -> Result<Complex64> {
        self.schrodinger.expectation(a)
    }

    /// `⟨ψ_H|A_H(t)|ψ_H⟩`.
    pub fn heisenberg_expectation(&self, prop: &Propagator, a: &OperatorMatrix) -> Result<Complex64> {
        self.heisenberg.expectation(&heisenberg_observable(prop, a, self.time)?)
    }
}

/// Largest disagreement between the two pictures' expectation values of `a`
/// over `times`.
pub fn picture_gap(prop: &Propagator, a: &OperatorMatrix, psi0: &StateVector, times: &[f64]) -> Result<f64> {
    let start = PictureState::new(psi0.clone());
    let mut worst = 0.0f64;
    for &t in times {
        let s = start.at(prop, t)?;
        let gap = s.schrodinger_expectation(a)? - s.heisenberg_expectation(prop, a)?;
        worst = worst.max(gap.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn rejects_non_hermitian() {
        let g = GridSpec::new(16, 2.0, 1.0).unwrap();
        let mut m = DMatrix::<Complex64>::identity(16, 16);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        let op = OperatorMatrix::from_entries(g, m).unwrap();
        assert!(matches!(Propagator::new(&op), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn order_of_exact_power_law() {
        let d = [0.1, 0.05, 0.025];
        let r: Vec<f64> = d.iter().map(|x| 3.0 * x * x).collect();
        assert!((convergence_order(&d, &r) - 2.0).abs() < 1e-12);
    }
}
