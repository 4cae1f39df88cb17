use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gridrep::{GridSpec, OperatorMatrix};

/// Wavefunction samples `ψ(q_i)` with the Δq-weighted L² norm cached.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    grid: GridSpec,
    amplitudes: DVector<Complex64>,
    norm: f64,
}

impl StateVector {
    pub fn new(grid: GridSpec, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n() {
            return Err(Error::Dimension { expected: grid.n(), got: amplitudes.len() });
        }
        let norm = (amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dq()).sqrt();
        Ok(Self { grid, amplitudes, norm })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: GridSpec, f: F) -> Self {
        let amps = DVector::from_iterator(grid.n(), grid.q_points().into_iter().map(f));
        Self::new(grid, amps).expect("length matches grid")
    }

    /// `(πσ²)^{-1/4} exp(-(q-q₀)²/2σ²) exp(i p₀ q/ħ)`, normalized in the
    /// continuum; `⟨q⟩ = q₀`, `⟨p⟩ = p₀`, `⟨(q-q₀)²⟩ = σ²/2`.
    pub fn gaussian(grid: GridSpec, q0: f64, p0: f64, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Invalid(format!("Gaussian width must be positive, got {sigma}")));
        }
        let pref = (PI * sigma * sigma).powf(-0.25);
        let hbar = grid.hbar();
        Ok(Self::from_fn(grid, |q| {
            let env = (-(q - q0).powi(2) / (2.0 * sigma * sigma)).exp();
            Complex64::from_polar(pref * env, p0 * q / hbar)
        }))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn normalized(&self) -> Self {
        let inv = if self.norm > 0.0 { 1.0 / self.norm } else { 0.0 };
        Self::new(self.grid, &self.amplitudes * Complex64::from(inv)).expect("same length")
    }

    /// `⟨self|other⟩ = Δq Σ conj(self_i) other_i`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.amplitudes.dotc(&other.amplitudes) * self.grid.dq())
    }

    pub fn apply(&self, op: &OperatorMatrix) -> Result<Self> {
        self.grid.check_same(op.grid())?;
        Self::new(self.grid, op.apply(&self.amplitudes)?)
    }

    /// `⟨ψ|A|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<Complex64> {
        let a_psi = self.apply(op)?;
        Ok(self.inner(&a_psi)? / (self.norm * self.norm))
    }

    /// Probability mass within `width` of either edge of the box.
    pub fn edge_mass(&self, width: f64) -> f64 {
        let l = self.grid.half_width();
        let mass: f64 = self
            .grid
            .q_points()
            .iter()
            .zip(self.amplitudes.iter())
            .filter(|(q, _)| q.abs() > l - width)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        mass * self.grid.dq() / (self.norm * self.norm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moments() {
        let g = GridSpec::desk();
        let psi = StateVector::gaussian(g, 0.5, 0.0, 1.0).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let q = crate::gridrep::build_position(&g);
        assert!((psi.expectation(&q).unwrap().re - 0.5).abs() < 1e-12);
        assert!(psi.edge_mass(2.0) < 1e-12);
        assert!(StateVector::gaussian(g, 0.0, 0.0, 0.0).is_err());
    }
}
