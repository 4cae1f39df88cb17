use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::propagator::{evolve_state, Propagator};
use crate::error::{Error, Result};
use crate::gridrep::{build_position, realize, GridSpec, OperatorMatrix};
use crate::phasespace::StateVector;
use crate::quantrules::{bj_weyl_gap, quantize_polynomial, ClassicalPolynomial, Rule};

/// Largest `|D - cI|` entry for which the gap `D` counts as central.
pub const CENTRAL_TOLERANCE: f64 = 1e-8;

/// Grid Hamiltonian for a polynomial symbol: the Hermitian part of the
/// realized canonical form. Realization is linear, so two rules whose
/// quantizations differ by a scalar give matrices differing by that scalar
/// times the identity.
pub fn grid_hamiltonian(symbol: &ClassicalPolynomial, rule: &Rule, grid: &GridSpec) -> OperatorMatrix {
    realize(&quantize_polynomial(symbol, rule), grid).hermitian_part()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapKind {
    Central,
    NonCentral,
}

/// `H_BJ - H_W` on the grid, compared with its best multiple of the identity.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub kind: GapKind,
    /// Canonical form of `BJ(A) - Weyl(A)`.
    pub symbolic: String,
    /// Mean diagonal entry `c` of the grid gap.
    pub value: f64,
    /// `max |D - cI|`.
    pub residual: f64,
}

impl GapReport {
    pub fn measure(symbol: &ClassicalPolynomial, grid: &GridSpec) -> Self {
        let gap = bj_weyl_gap(symbol);
        let d = realize(&gap, grid).hermitian_part();
        let n = grid.n();
        let c = d.entries().diagonal().sum() / n as f64;
        let mut residual = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { c } else { Complex64::new(0.0, 0.0) };
                residual = residual.max((d.get(i, j) - expected).norm());
            }
        }
        let kind = if residual <= CENTRAL_TOLERANCE { GapKind::Central } else { GapKind::NonCentral };
        Self { kind, symbolic: gap.to_string(), value: c.re, residual }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivergenceSample {
    pub t: f64,
    pub exp_q_bj: f64,
    pub exp_q_weyl: f64,
    pub abs_gap: f64,
    /// `|⟨ψ_BJ(t)|ψ_W(t)⟩|`.
    pub fidelity: f64,
    /// `arg ⟨ψ_W(t)|ψ_BJ(t)⟩`, unwrapped along the samples.
    pub phase: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceSummary {
    pub symbol: String,
    pub grid: GridSpec,
    pub horizon: f64,
    pub samples: usize,
    pub gap: GapReport,
    pub max_abs_gap: f64,
    pub min_fidelity: f64,
    /// For a central gap `c`: `max |⟨ψ_W|ψ_BJ⟩ - e^{-ict/ħ}|`.
    pub phase_error: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct DivergenceReport {
    pub summary: DivergenceSummary,
    pub samples: Vec<DivergenceSample>,
}

impl DivergenceReport {
    /// Columns `t, exp_q_bj, exp_q_weyl, abs_gap, fidelity, phase`.
    pub fn to_csv_writer<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for s in &self.samples {
            out.serialize(s)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary)?)
    }
}

fn has_mixed_monomial(symbol: &ClassicalPolynomial) -> bool {
    symbol.monomials().any(|m| m.s >= 2 && m.r >= 2)
}

/// Evolves `ψ₀` under the Born–Jordan and Weyl grid Hamiltonians of
/// `symbol` and records how far the two evolutions drift apart at `samples`
/// equally spaced times in `[0, horizon]`.
pub fn divergence_experiment(
    symbol: &ClassicalPolynomial,
    psi0: &StateVector,
    horizon: f64,
    samples: usize,
) -> Result<DivergenceReport> {
    if samples < 2 || !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::Invalid(format!(
            "need at least 2 samples over a positive horizon, got {samples} over {horizon}"
        )));
    }
    let grid = *psi0.grid();
    let mut warnings = Vec::new();
    if !has_mixed_monomial(symbol) {
        warnings.push(format!(
            "{symbol} has no monomial p^s q^r with s >= 2 and r >= 2; the rules may not diverge"
        ));
    }
    let bj = Propagator::new(&grid_hamiltonian(symbol, &Rule::BornJordan, &grid))?;
    let weyl = Propagator::new(&grid_hamiltonian(symbol, &Rule::Weyl, &grid))?;
    let gap = GapReport::measure(symbol, &grid);
    let q = build_position(&grid);
    let hbar = grid.hbar();

    let mut rows = Vec::with_capacity(samples);
    let mut phase_error: Option<f64> = (gap.kind == GapKind::Central).then_some(0.0);
    let mut last_phase = 0.0;
    for k in 0..samples {
        let t = horizon * k as f64 / (samples - 1) as f64;
        let a = evolve_state(&bj, psi0, t)?;
        let b = evolve_state(&weyl, psi0, t)?;
        let exp_q_bj = a.expectation(&q)?.re;
        let exp_q_weyl = b.expectation(&q)?.re;
        let overlap = b.inner(&a)? / (a.norm() * b.norm());
        let mut phase = overlap.arg();
        if k > 0 {
            phase +=
                (2.0 * std::f64::consts::PI) * ((last_phase - phase) / (2.0 * std::f64::consts::PI)).round();
        }
        last_phase = phase;
        if let Some(err) = phase_error.as_mut() {
            let predicted = Complex64::from_polar(1.0, -gap.value * t / hbar);
            *err = err.max((overlap - predicted).norm());
        }
        rows.push(DivergenceSample {
            t,
            exp_q_bj,
            exp_q_weyl,
            abs_gap: (exp_q_bj - exp_q_weyl).abs(),
            fidelity: overlap.norm(),
            phase,
        });
    }
    let summary = DivergenceSummary {
        symbol: symbol.to_string(),
        grid,
        horizon,
        samples,
        max_abs_gap: rows.iter().map(|r| r.abs_gap).fold(0.0, f64::max),
        min_fidelity: rows.iter().map(|r| r.fidelity).fold(f64::INFINITY, f64::min),
        gap,
        phase_error,
        warnings,
    };
    Ok(DivergenceReport { summary, samples: rows })
}
