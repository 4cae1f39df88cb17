//! Operators as dense matrices on a periodic position grid.

mod grid;
mod kernel;
mod matrix;
mod symbol;

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

pub use grid::GridSpec;
pub use kernel::{
    bj_kernel_quantize, tau_kernel_quantize, torus_pair, weyl_kernel_quantize, wrap_to_box, DEFAULT_BJ_ORDER,
};
pub use matrix::OperatorMatrix;
pub use symbol::{SampledSymbol, SymbolClass};

use crate::ncalg::{Letter, NCPolynomial};

/// Multiplication by `q`.
pub fn build_position(grid: &GridSpec) -> OperatorMatrix {
    let q = DVector::from_iterator(grid.n(), grid.q_points().into_iter().map(Complex64::from));
    let mut m =
        OperatorMatrix::from_entries(*grid, DMatrix::from_diagonal(&q)).expect("square by construction");
    m.certify_hermitian(0.0).expect("diagonal real matrix");
    m
}

/// Spectral `-iħ d/dq`: FFT, multiply by `ħk`, inverse FFT, applied to
/// each unit vector.
pub fn build_momentum(grid: &GridSpec) -> OperatorMatrix {
    let n = grid.n();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let scale: Vec<f64> = (0..n).map(|m| grid.p(m) / n as f64).collect();
    let mut entries = DMatrix::zeros(n, n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        buf[j] = Complex64::new(1.0, 0.0);
        fwd.process(&mut buf);
        for (z, s) in buf.iter_mut().zip(&scale) {
            *z *= s;
        }
        inv.process(&mut buf);
        entries.set_column(j, &DVector::from_column_slice(&buf));
    }
    OperatorMatrix::from_entries(*grid, entries).expect("square by construction")
}

/// Forward and inverse FFT plans of length `n`.
pub(crate) fn fft_plans(n: usize) -> (Arc<dyn rustfft::Fft<f64>>, Arc<dyn rustfft::Fft<f64>>) {
    let mut planner = FftPlanner::<f64>::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

/// Substitutes the grid position and momentum matrices into each word and
/// evaluates ħ at `grid.hbar()`.
pub fn realize(poly: &NCPolynomial, grid: &GridSpec) -> OperatorMatrix {
    let n = grid.n();
    let q = grid.q_points();
    let p = build_momentum(grid).into_entries();
    let mut p_powers: HashMap<usize, DMatrix<Complex64>> = HashMap::new();
    let mut total = DMatrix::<Complex64>::zeros(n, n);
    for (word, coeff) in poly.terms() {
        let c = coeff.evaluate(grid.hbar());
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut acc = DMatrix::<Complex64>::identity(n, n) * c;
        for (letter, k) in word.runs() {
            match letter {
                Letter::Q => {
                    // Right multiplication by a diagonal scales columns.
                    for (j, mut column) in acc.column_iter_mut().enumerate() {
                        column *= Complex64::from(q[j].powi(k as i32));
                    }
                }
                Letter::P => {
                    let pk = p_powers.entry(k).or_insert_with(|| (1..k).fold(p.clone(), |m, _| &m * &p));
                    acc = &acc * &*pk;
                }
            }
        }
        total += acc;
    }
    OperatorMatrix::from_entries(*grid, total).expect("square by construction")
}
