use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::Fft;

use super::function::PhaseSpaceFunction;
use super::state::StateVector;
use crate::error::Result;
use crate::gridrep::{bj_kernel_quantize, fft_plans, GridSpec, OperatorMatrix, SampledSymbol};

/// Lagrange weights for the midpoint of `2h` equispaced nodes at offsets
/// `u + 1/2`, `u = -h .. h-1`.
fn midpoint_weights(h: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (0..2 * h).map(|k| k as f64 - h as f64 + 0.5).collect();
    (0..2 * h)
        .map(|k| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &xj)| (0.0 - xj) / (nodes[k] - xj))
                .product()
        })
        .collect()
}

/// Half-width of the stencil used to read kernels between grid points.
const SYMBOL_STENCIL_HALF: usize = 6;

fn fft_in_place(plan: &dyn Fft<f64>, data: &mut [Complex64]) {
    plan.process(data);
}

/// 2-D DFT over both indices; the inverse is normalized by `1/N²`.
pub(crate) fn fft2(values: &DMatrix<Complex64>, inverse: bool) -> DMatrix<Complex64> {
    let n = values.nrows();
    let (fwd, inv) = fft_plans(n);
    let plan = if inverse { inv } else { fwd };
    let mut out = values.clone();
    for mut col in out.column_iter_mut() {
        let mut buf: Vec<Complex64> = col.iter().copied().collect();
        fft_in_place(plan.as_ref(), &mut buf);
        col.iter_mut().zip(buf).for_each(|(z, v)| *z = v);
    }
    for mut row in out.row_iter_mut() {
        let mut buf: Vec<Complex64> = row.iter().copied().collect();
        fft_in_place(plan.as_ref(), &mut buf);
        row.iter_mut().zip(buf).for_each(|(z, v)| *z = v);
    }
    if inverse {
        out /= Complex64::from((n * n) as f64);
    }
    out
}

/// `Θ(q, p) = sin(pq/2ħ) / (pq/2ħ)` on the dual grid of a phase-space table.
///
/// Slot `(a', m')` of the 2-D transform of a table corresponds to the dual
/// point `(q, p) = (m'Δq, ħπa'/L)`, where `pq/2ħ = πa'm'/N` (signed
/// frequency indices).
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaMultiplier {
    grid: GridSpec,
    values: DMatrix<f64>,
}

impl ThetaMultiplier {
    pub fn new(grid: GridSpec) -> Self {
        let n = grid.n();
        let values =
            DMatrix::from_fn(n, n, |a, m| theta_at_indices(grid.freq_index(a), grid.freq_index(m), n));
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn get(&self, a: usize, m: usize) -> f64 {
        self.values[(a, m)]
    }

    /// Dual point `(q, p)` of slot `(a', m')`.
    pub fn dual_point(&self, a: usize, m: usize) -> (f64, f64) {
        let g = &self.grid;
        (g.freq_index(m) as f64 * g.dq(), g.hbar() * PI * g.freq_index(a) as f64 / g.half_width())
    }
}

/// `sinc(π a m / N)`, exactly 0 when `a·m` is a nonzero multiple of `N`.
pub fn theta_at_indices(a: i64, m: i64, n: usize) -> f64 {
    let prod = a * m;
    if prod == 0 {
        return 1.0;
    }
    if prod.rem_euclid(n as i64) == 0 {
        return 0.0;
    }
    let x = PI * prod as f64 / n as f64;
    x.sin() / x
}

/// `sinc(pq/2ħ)` at an arbitrary point.
pub fn theta(q: f64, p: f64, hbar: f64) -> f64 {
    let x = p * q / (2.0 * hbar);
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Samples of `ψ(q_b + Δq/2)` by a spectral half-step shift.
fn half_shift(psi: &StateVector) -> Vec<Complex64> {
    let grid = psi.grid();
    let n = grid.n();
    let (fwd, inv) = fft_plans(n);
    let mut buf: Vec<Complex64> = psi.amplitudes().iter().copied().collect();
    fwd.process(&mut buf);
    for (m, z) in buf.iter_mut().enumerate() {
        *z *= Complex64::from_polar(1.0 / n as f64, 0.5 * grid.k(m) * grid.dq());
    }
    inv.process(&mut buf);
    buf
}

/// `W(φ,ψ)(q,p) = (1/2πħ) ∫ e^{-ipy/ħ} φ(q + y/2) ψ*(q - y/2) dy`.
///
/// The integral runs over `y = kΔq`, `k ∈ [-N, N)`; samples at half-grid
/// points come from a spectral half-step shift and samples outside the box
/// are zero. With this normalization `∬ W(φ,ψ) = ⟨ψ|φ⟩` and
/// `∬ A·W(φ,ψ) = ⟨ψ|A_W|φ⟩`.
pub fn cross_wigner(phi: &StateVector, psi: &StateVector) -> Result<PhaseSpaceFunction> {
    phi.grid().check_same(psi.grid())?;
    let grid = *phi.grid();
    let n = grid.n() as i64;
    let phi_full: Vec<Complex64> = phi.amplitudes().iter().copied().collect();
    let psi_full: Vec<Complex64> = psi.amplitudes().iter().copied().collect();
    let phi_half = half_shift(phi);
    let psi_half = half_shift(psi);
    let at = |v: &[Complex64], idx: i64| {
        if (0..n).contains(&idx) {
            v[idx as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let (fwd, _) = fft_plans(grid.n());
    let scale = grid.dq() / (2.0 * PI * grid.hbar());
    let mut values = DMatrix::zeros(grid.n(), grid.n());
    let mut folded = vec![Complex64::new(0.0, 0.0); grid.n()];
    for a in 0..n {
        folded.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for k in -n..n {
            let term = if k % 2 == 0 {
                let u = k / 2;
                at(&phi_full, a + u) * at(&psi_full, a - u).conj()
            } else {
                let u = (k - 1) / 2;
                at(&phi_half, a + u) * at(&psi_half, a - u - 1).conj()
            };
            folded[k.rem_euclid(n) as usize] += term;
        }
        fwd.process(&mut folded);
        for (m, z) in folded.iter().enumerate() {
            values[(a as usize, m)] = z * scale;
        }
    }
    PhaseSpaceFunction::new(grid, values)
}

/// Weyl symbol `B(q,p) = ∫ e^{-ipy/ħ} K(q + y/2, q - y/2) dy` of a matrix.
///
/// Indices are taken modulo N with separations `d ∈ [-N/2, N/2)`. For odd `d`
/// the kernel is needed between grid points and is interpolated along the
/// diagonal `i - j = d` with a 12-point Lagrange stencil.
pub fn weyl_symbol_of(op: &OperatorMatrix) -> PhaseSpaceFunction {
    let grid = *op.grid();
    let n = grid.n() as i64;
    let h = SYMBOL_STENCIL_HALF as i64;
    let weights = midpoint_weights(SYMBOL_STENCIL_HALF);
    let m = op.entries();
    let entry = |i: i64, j: i64| m[(i.rem_euclid(n) as usize, j.rem_euclid(n) as usize)];
    let (fwd, _) = fft_plans(grid.n());
    let mut values = DMatrix::zeros(grid.n(), grid.n());
    let mut folded = vec![Complex64::new(0.0, 0.0); grid.n()];
    for a in 0..n {
        for d in -n / 2..n / 2 {
            let g = if d % 2 == 0 {
                entry(a + d / 2, a - d / 2)
            } else {
                (-h..h)
                    .zip(&weights)
                    .map(|(u, w)| {
                        let s = 2 * a + 2 * u + 1;
                        entry((s + d) / 2, (s - d) / 2) * *w
                    })
                    .sum()
            };
            folded[d.rem_euclid(n) as usize] = g;
        }
        fwd.process(&mut folded);
        for (mm, z) in folded.iter().enumerate() {
            values[(a as usize, mm)] = *z;
        }
    }
    PhaseSpaceFunction::new(grid, values).expect("dimensions match grid")
}

/// `B` with `𝓕B = Θ·𝓕A`: the Weyl symbol of the Born–Jordan quantization of
/// `A`.
pub fn apply_fafb(a: &PhaseSpaceFunction) -> PhaseSpaceFunction {
    let theta = ThetaMultiplier::new(*a.grid());
    let mut spec = fft2(a.values(), false);
    spec.zip_apply(theta.values(), |z, t| *z *= t);
    PhaseSpaceFunction::new(*a.grid(), fft2(&spec, true)).expect("dimensions match grid")
}

/// Multiplier path against kernel path for the Born–Jordan Weyl symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct FafbComparison {
    /// `max |𝓕B_fafb - 𝓕B_kernel| / max |𝓕A|` over the support.
    pub spectral_gap: f64,
    /// Dual-grid points with `|𝓕A| > threshold · max |𝓕A|`.
    pub support: usize,
    /// `max |B_fafb - B_kernel| / max |A|` over the whole table.
    pub table_gap: f64,
}

/// Compares `apply_fafb(A)` with `weyl_symbol_of(bj_kernel_quantize(A))` on
/// the dual points where `|𝓕A|` exceeds `threshold` relative to its maximum.
pub fn compare_fafb(
    a: &SampledSymbol,
    grid: &GridSpec,
    order: usize,
    threshold: f64,
) -> Result<FafbComparison> {
    let table = a.sample(grid)?;
    let via_multiplier = apply_fafb(&table);
    let via_kernel = weyl_symbol_of(&bj_kernel_quantize(a, grid, order)?);
    let fa = fft2(table.values(), false);
    let f1 = fft2(via_multiplier.values(), false);
    let f2 = fft2(via_kernel.values(), false);
    let peak = fa.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut spectral_gap = 0.0f64;
    let mut support = 0;
    for ((za, z1), z2) in fa.iter().zip(f1.iter()).zip(f2.iter()) {
        if za.norm() > threshold * peak {
            support += 1;
            spectral_gap = spectral_gap.max((z1 - z2).norm() / peak);
        }
    }
    Ok(FafbComparison {
        spectral_gap,
        support,
        table_gap: via_multiplier.max_abs_diff(&via_kernel)? / table.max_abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_weights_match_known_8_point_rule() {
        let w = midpoint_weights(4);
        let known = [-5.0, 49.0, -245.0, 1225.0, 1225.0, -245.0, 49.0, -5.0];
        for (a, b) in w.iter().zip(known) {
            assert!((a - b / 2048.0).abs() < 1e-15);
        }
        let w12 = midpoint_weights(6);
        assert!((w12.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fft2_round_trip() {
        let v = DMatrix::from_fn(16, 16, |i, j| Complex64::new(i as f64 - j as f64 * 0.5, 0.25 * i as f64));
        let back = fft2(&fft2(&v, false), true);
        assert!(v.iter().zip(back.iter()).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta_at_indices(0, 5, 128), 1.0);
        assert_eq!(theta_at_indices(16, 8, 128), 0.0);
        assert_eq!(theta_at_indices(-16, 16, 128), 0.0);
        assert!((theta_at_indices(16, 4, 128) - 2.0 / PI).abs() < 1e-15);
        assert!((theta(2.0, PI / 2.0, 1.0) - theta_at_indices(16, 4, 128)).abs() < 1e-15);
    }
}
