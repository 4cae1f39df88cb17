//! Kernel quantization of sampled symbols.
//!
//! Every rule goes through one engine. For the pair of grid points
//! `(q_i, q_j)` the symbol is averaged over evaluation points
//! `x = τ q_j + (1 - τ) q_i` with rule-specific weights, and the momentum
//! integral becomes a sum over the conjugate grid:
//!
//! `M_ij = (1/N) Σ_m ω^{m(i-j)} Σ_τ w_τ A(x_τ, p_m)`, `ω = e^{2πi/N}`.
//!
//! The grid is a circle: if `|q_i - q_j| > L` the column point is replaced by
//! its image nearest `q_i`. The segment of evaluation points is then shifted
//! by a whole period so that its weighted centre `τ̄ q_j + (1 - τ̄) q_i` lies in
//! `[-L, L)`; for Weyl and Born–Jordan that is the midpoint, for a single τ it
//! is the evaluation point itself. The twiddle factor is unchanged by these
//! shifts. Swapping `i` and `j` together with `τ → 1 - τ` gives the same
//! points, so real symbols stay Hermitian under the Weyl and Born–Jordan
//! rules, and τ = 0 (τ = 1) evaluates at the row (column) point itself.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::GridSpec;
use super::matrix::OperatorMatrix;
use super::symbol::SampledSymbol;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_unit;

/// Gauss–Legendre order used for the τ-average when none is given.
pub const DEFAULT_BJ_ORDER: usize = 16;

/// `(q_i, q_j')` with `q_j'` the image of `q_j` nearest `q_i`.
pub fn torus_pair(grid: &GridSpec, i: usize, j: usize) -> (f64, f64) {
    let l = grid.half_width();
    let qi = grid.q(i);
    let mut qj = grid.q(j);
    let d = qi - qj;
    if d.abs() > l {
        qj += 2.0 * l * d.signum();
    }
    (qi, qj)
}

/// `x` wrapped into `[-L, L)`.
pub fn wrap_to_box(grid: &GridSpec, x: f64) -> f64 {
    let l = grid.half_width();
    (x + l).rem_euclid(2.0 * l) - l
}

fn twiddles(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

/// Builds the matrix for the weighted set of τ values `nodes`.
fn kernel_matrix(a: &SampledSymbol, grid: &GridSpec, nodes: &[(f64, f64)]) -> Result<OperatorMatrix> {
    a.check_grid(grid)?;
    let n = grid.n();
    let tw = twiddles(n);
    let inv_n = 1.0 / n as f64;
    let total: f64 = nodes.iter().map(|&(_, w)| w).sum();
    let centre = nodes.iter().map(|&(t, w)| t * w).sum::<f64>() / total;
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            let mut acc = vec![Complex64::new(0.0, 0.0); n];
            let mut vals = vec![Complex64::new(0.0, 0.0); n];
            for (j, entry) in row.iter_mut().enumerate() {
                let (qi, qj) = torus_pair(grid, i, j);
                let c = centre * qj + (1.0 - centre) * qi;
                let shift = wrap_to_box(grid, c) - c;
                acc.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                for &(tau, w) in nodes {
                    let x = tau * qj + (1.0 - tau) * qi + shift;
                    a.eval_row(grid, x, &mut vals);
                    for (m, v) in vals.iter().enumerate() {
                        if !(v.re.is_finite() && v.im.is_finite()) {
                            return Err(Error::NonFiniteSymbol { q: x, p: grid.p(m) });
                        }
                        acc[m] += v * w;
                    }
                }
                let k = (i + n - j) % n;
                let mut sum = Complex64::new(0.0, 0.0);
                for (m, v) in acc.iter().enumerate() {
                    sum += tw[(m * k) % n] * v;
                }
                *entry = sum * inv_n;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let entries = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    OperatorMatrix::from_entries(*grid, entries)
}

/// Weyl rule: the symbol is evaluated at the midpoint of each pair.
pub fn weyl_kernel_quantize(a: &SampledSymbol, grid: &GridSpec) -> Result<OperatorMatrix> {
    kernel_matrix(a, grid, &[(0.5, 1.0)])
}

/// τ-rule: evaluation point `τ q_j + (1 - τ) q_i`, with `j` the input
/// (column) index. τ = 0 multiplies by functions of `q` on the output side.
pub fn tau_kernel_quantize(a: &SampledSymbol, tau: f64, grid: &GridSpec) -> Result<OperatorMatrix> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::TauRange(tau.to_string()));
    }
    kernel_matrix(a, grid, &[(tau, 1.0)])
}

/// Born–Jordan rule: the τ-rule averaged over `τ ∈ [0, 1]` with
/// Gauss–Legendre quadrature of the given order.
pub fn bj_kernel_quantize(a: &SampledSymbol, grid: &GridSpec, order: usize) -> Result<OperatorMatrix> {
    if order < 2 {
        return Err(Error::QuadratureOrder(order));
    }
    let (nodes, weights) = gauss_legendre_unit(order);
    let pairs: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
    kernel_matrix(a, grid, &pairs)
}
