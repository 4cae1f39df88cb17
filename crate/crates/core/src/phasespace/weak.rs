use num_complex::Complex64;

use super::function::PhaseSpaceFunction;
use super::state::StateVector;
use super::transforms::{apply_fafb, cross_wigner, theta_at_indices};
use crate::error::{Error, Result};
use crate::gridrep::{
    bj_kernel_quantize, weyl_kernel_quantize, GridSpec, OperatorMatrix, SampledSymbol, SymbolClass,
    DEFAULT_BJ_ORDER,
};

/// Relative overlap below which a pre/post pair is rejected.
pub const ORTHOGONALITY_THRESHOLD: f64 = 1e-10;

/// Rule used to pair a symbol with the cross-Wigner transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseSpaceRule {
    Weyl,
    BornJordan,
}

/// `⟨φ|ψ⟩`, or an error when it is too small relative to `‖φ‖‖ψ‖`.
fn checked_overlap(phi: &StateVector, psi: &StateVector) -> Result<Complex64> {
    let overlap = phi.inner(psi)?;
    let scale = phi.norm() * psi.norm();
    // Negated so that a NaN overlap is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(overlap.norm() > ORTHOGONALITY_THRESHOLD * scale) {
        let relative = if scale > 0.0 { overlap.norm() / scale } else { 0.0 };
        return Err(Error::NearOrthogonal { overlap: overlap.norm(), relative });
    }
    Ok(overlap)
}

/// `⟨φ|M|ψ⟩ / ⟨φ|ψ⟩` with post-selected `φ` and pre-selected `ψ`.
pub fn weak_value(op: &OperatorMatrix, phi: &StateVector, psi: &StateVector) -> Result<Complex64> {
    phi.grid().check_same(op.grid())?;
    let overlap = checked_overlap(phi, psi)?;
    let m_psi = psi.apply(op)?;
    Ok(phi.inner(&m_psi)? / overlap)
}

/// The same weak value computed as `∬ A·W(ψ,φ) / ⟨φ|ψ⟩`, with `W` replaced
/// by its Θ-filtered version for the Born–Jordan rule.
pub fn weak_value_phase_space(
    a: &PhaseSpaceFunction,
    phi: &StateVector,
    psi: &StateVector,
    rule: PhaseSpaceRule,
) -> Result<Complex64> {
    a.grid().check_same(phi.grid())?;
    let overlap = checked_overlap(phi, psi)?;
    let w = cross_wigner(psi, phi)?;
    let w = match rule {
        PhaseSpaceRule::Weyl => w,
        PhaseSpaceRule::BornJordan => apply_fafb(&w),
    };
    Ok(a.pair(&w)? / overlap)
}

/// Cosine symbol `cos((p₀q - q₀p)/ħ)` whose Born–Jordan quantization is
/// scaled by `Θ(q₀, p₀)` relative to its Weyl quantization.
#[derive(Clone, Debug)]
pub struct DequantizationWitness {
    pub symbol: SampledSymbol,
    /// Grid steps: `q₀ = nΔq`, `p₀ = mΔp`.
    pub n: i64,
    pub m: i64,
    pub q0: f64,
    pub p0: f64,
    pub theta: f64,
    pub weyl_norm: f64,
    pub bj_norm: f64,
    pub ratio: f64,
}

/// Grid steps `(n, m)` with `n·m = N`, `0 < n, m < N/2`, choosing the pair
/// with `q₀ = nΔq` closest to `p₀ = mΔp`.
pub fn zero_set_point(grid: &GridSpec) -> Result<(i64, i64)> {
    let big_n = grid.n() as i64;
    (1..big_n / 2)
        .filter(|n| big_n % n == 0 && big_n / n < big_n / 2)
        .map(|n| (n, big_n / n))
        .min_by(|a, b| {
            let da = (a.0 as f64 * grid.dq() - a.1 as f64 * grid.dp()).abs();
            let db = (b.0 as f64 * grid.dq() - b.1 as f64 * grid.dp()).abs();
            da.total_cmp(&db)
        })
        .ok_or_else(|| Error::OffGrid(format!("no zero-set point q0*p0 = 2*pi*hbar on {grid}")))
}

/// `‖A_BJ‖_F / ‖A_W‖_F`, defined as 0 when the Weyl norm vanishes.
pub fn norm_ratio(bj: &OperatorMatrix, weyl: &OperatorMatrix) -> f64 {
    let w = weyl.frobenius_norm();
    if w == 0.0 {
        0.0
    } else {
        bj.frobenius_norm() / w
    }
}

/// Steps for a physical point, rejecting points off the dual grid or outside
/// `0 < |n|, |m| < N/2`.
pub fn grid_steps(grid: &GridSpec, q0: f64, p0: f64) -> Result<(i64, i64)> {
    let to_step = |x: f64, step: f64, what: &str| -> Result<i64> {
        let r = x / step;
        let k = r.round();
        let half = (grid.n() / 2) as f64;
        if (r - k).abs() > 1e-9 || k == 0.0 || k.abs() >= half {
            return Err(Error::OffGrid(format!(
                "{what} = {x} is {r} grid steps; need a nonzero integer below {half} in magnitude on {grid}"
            )));
        }
        Ok(k as i64)
    };
    Ok((to_step(q0, grid.dq(), "q0")?, to_step(p0, grid.dp(), "p0")?))
}

/// Builds the cosine witness for steps `(n, m)` and compares the Born–Jordan
/// and Weyl kernel quantizations.
pub fn witness_at_steps(grid: &GridSpec, n: i64, m: i64) -> Result<DequantizationWitness> {
    let q0 = n as f64 * grid.dq();
    let p0 = m as f64 * grid.dp();
    grid_steps(grid, q0, p0)?;
    let hbar = grid.hbar();
    let symbol = SampledSymbol::real(SymbolClass::Periodic, move |q, p| ((p0 * q - q0 * p) / hbar).cos());
    let weyl = weyl_kernel_quantize(&symbol, grid)?;
    let bj = bj_kernel_quantize(&symbol, grid, DEFAULT_BJ_ORDER)?;
    Ok(DequantizationWitness {
        symbol,
        n,
        m,
        q0,
        p0,
        theta: theta_at_indices(n, m, grid.n()),
        weyl_norm: weyl.frobenius_norm(),
        bj_norm: bj.frobenius_norm(),
        ratio: norm_ratio(&bj, &weyl),
    })
}

/// Witness at a physical point `(q₀, p₀)`.
pub fn witness_at(grid: &GridSpec, q0: f64, p0: f64) -> Result<DequantizationWitness> {
    let (n, m) = grid_steps(grid, q0, p0)?;
    witness_at_steps(grid, n, m)
}

/// Witness on the zero set `q₀p₀ = 2πħ`: the Born–Jordan quantization
/// vanishes while the Weyl quantization does not.
pub fn dequantization_witness(grid: &GridSpec) -> Result<DequantizationWitness> {
    let (n, m) = zero_set_point(grid)?;
    witness_at_steps(grid, n, m)
}
