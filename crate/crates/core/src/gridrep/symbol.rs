use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::phasespace::PhaseSpaceFunction;
use crate::quantrules::ClassicalPolynomial;

/// Points in the Lagrange stencil used to evaluate tabulated symbols between
/// grid points.
const TABLE_STENCIL: usize = 12;

/// Behaviour the discretization relies on; informational except where a
/// caller checks it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolClass {
    /// Decays (or is negligible) near the edges of the box in `q` and `p`.
    Decaying,
    /// Periodic in `q` with the box period and band-limited in `p`.
    Periodic,
    /// Polynomial growth; kernels are accurate away from the box edges only.
    Polynomial,
}

type SymbolFn = dyn Fn(f64, f64) -> Complex64 + Send + Sync;

#[derive(Clone)]
enum Source {
    Function(Arc<SymbolFn>),
    Table(PhaseSpaceFunction),
}

/// A classical observable `A(q, p)`, either callable or tabulated on the
/// phase-space grid.
///
/// Tables are interpolated in `q` only; outside the box a periodic table
/// wraps, a decaying one is zero and a polynomial one is extrapolated, which
/// is only trustworthy close to the edges.
#[derive(Clone)]
pub struct SampledSymbol {
    source: Source,
    class: SymbolClass,
}

impl fmt::Debug for SampledSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::Function(_) => "function",
            Source::Table(_) => "table",
        };
        f.debug_struct("SampledSymbol").field("source", &kind).field("class", &self.class).finish()
    }
}

impl SampledSymbol {
    pub fn from_fn<F>(class: SymbolClass, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        Self { source: Source::Function(Arc::new(f)), class }
    }

    /// Real-valued callable symbol.
    pub fn real<F>(class: SymbolClass, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(class, move |q, p| Complex64::new(f(q, p), 0.0))
    }

    /// Evaluates the polynomial with ħ fixed to `hbar`.
    pub fn from_polynomial(poly: &ClassicalPolynomial, hbar: f64) -> Self {
        let terms: Vec<(i32, i32, Complex64)> =
            poly.monomials().map(|m| (m.s as i32, m.r as i32, m.coeff.evaluate(hbar))).collect();
        Self::from_fn(SymbolClass::Polynomial, move |q, p| {
            terms.iter().map(|&(s, r, c)| c * p.powi(s) * q.powi(r)).sum()
        })
    }

    pub fn from_table(table: PhaseSpaceFunction, class: SymbolClass) -> Self {
        Self { source: Source::Table(table), class }
    }

    pub fn class(&self) -> SymbolClass {
        self.class
    }

    pub fn table_grid(&self) -> Option<&GridSpec> {
        match &self.source {
            Source::Table(t) => Some(t.grid()),
            Source::Function(_) => None,
        }
    }

    /// Rejects tables sampled on a different grid.
    pub fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        match self.table_grid() {
            Some(g) => g.check_same(grid),
            None => Ok(()),
        }
    }

    /// Fills `out[m] = A(x, p_m)` for every momentum slot of `grid`.
    pub fn eval_row(&self, grid: &GridSpec, x: f64, out: &mut [Complex64]) {
        match &self.source {
            Source::Function(f) => {
                for (m, slot) in out.iter_mut().enumerate() {
                    *slot = f(x, grid.p(m));
                }
            }
            Source::Table(t) => {
                let l = t.grid().half_width();
                let x = match self.class {
                    SymbolClass::Periodic => (x + l).rem_euclid(2.0 * l) - l,
                    SymbolClass::Decaying if !(-l..l).contains(&x) => {
                        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                        return;
                    }
                    _ => x,
                };
                let (start, weights) = stencil(t.grid(), x);
                for (m, slot) in out.iter_mut().enumerate() {
                    *slot = weights.iter().enumerate().map(|(k, w)| t.get(start + k, m) * *w).sum();
                }
            }
        }
    }

    /// Samples on the phase-space grid of `grid`.
    pub fn sample(&self, grid: &GridSpec) -> Result<PhaseSpaceFunction> {
        self.check_grid(grid)?;
        let table = match &self.source {
            Source::Table(t) => t.clone(),
            Source::Function(f) => PhaseSpaceFunction::from_fn(*grid, |q, p| f(q, p)),
        };
        if let Some((a, m)) = first_non_finite(&table) {
            return Err(Error::NonFiniteSymbol { q: grid.q(a), p: grid.p(m) });
        }
        Ok(table)
    }
}

fn first_non_finite(t: &PhaseSpaceFunction) -> Option<(usize, usize)> {
    let n = t.grid().n();
    (0..n)
        .flat_map(|a| (0..n).map(move |m| (a, m)))
        .find(|&(a, m)| !(t.get(a, m).re.is_finite() && t.get(a, m).im.is_finite()))
}

/// Lagrange weights for evaluating a table at `x`. Near and beyond the edges
/// the stencil is shifted inwards (one-sided); far outside the box this
/// extrapolation is poorly conditioned.
fn stencil(grid: &GridSpec, x: f64) -> (usize, [f64; TABLE_STENCIL]) {
    let l = grid.half_width();
    let t = (x + l) / grid.dq();
    let base = t.floor() as i64;
    let max_start = (grid.n() - TABLE_STENCIL) as i64;
    let start = (base - (TABLE_STENCIL as i64 / 2 - 1)).clamp(0, max_start) as usize;
    let mut w = [0.0; TABLE_STENCIL];
    for (k, wk) in w.iter_mut().enumerate() {
        let xk = (start + k) as f64;
        let mut prod = 1.0;
        for j in 0..TABLE_STENCIL {
            if j != k {
                let xj = (start + j) as f64;
                prod *= (t - xj) / (xk - xj);
            }
        }
        *wk = prod;
    }
    (start, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_interpolation_is_accurate_for_smooth_symbols() {
        let grid = GridSpec::new(64, 8.0, 1.0).unwrap();
        let f = |q: f64, p: f64| Complex64::new((-(q * q) / 4.0).exp() * p.cos(), 0.0);
        let table = SampledSymbol::from_table(PhaseSpaceFunction::from_fn(grid, f), SymbolClass::Decaying);
        let mut row = vec![Complex64::new(0.0, 0.0); grid.n()];
        for &x in &[-3.1, -0.05, 0.0625, 2.77] {
            table.eval_row(&grid, x, &mut row);
            for (m, v) in row.iter().enumerate() {
                assert!((v - f(x, grid.p(m))).norm() < 1e-7, "x = {x}");
            }
        }
        // At a grid point interpolation is exact.
        table.eval_row(&grid, grid.q(5), &mut row);
        assert!((row[3] - f(grid.q(5), grid.p(3))).norm() < 1e-14);
    }

    #[test]
    fn non_finite_samples_rejected() {
        let grid = GridSpec::new(16, 1.0, 1.0).unwrap();
        let s = SampledSymbol::real(SymbolClass::Polynomial, |q, _| 1.0 / q);
        assert!(matches!(s.sample(&grid), Err(Error::NonFiniteSymbol { .. })));
    }
}
