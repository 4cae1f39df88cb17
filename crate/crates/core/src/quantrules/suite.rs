//! Exact identity checks over ranges of monomials, reported as a table.

use std::fmt;

use super::classical::{ClassicalMonomial, ClassicalPolynomial};
use super::rules::{
    bj_from_tau_average, bj_from_tau_quadrature, bj_quantize, bj_quantize_qform, bj_weyl_gap,
    check_motion_identities, max_coeff_diff, tau_quantize, to_numeric, weyl_quantize, TauParameter,
};
use crate::ncalg::scalar::rational;
use crate::ncalg::{check_power_identity, HbarScalar, NCPolynomial};

/// Outcome of one family of checks.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        Self { name, passed: 0, total: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(label());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "{status}  {:<44} {:>3}/{:<3}", self.name, self.passed, self.total)?;
        if !self.failures.is_empty() {
            write!(f, "  failing: {}", self.failures.join(", "))?;
        }
        Ok(())
    }
}

fn monomials_up_to(total: usize) -> impl Iterator<Item = ClassicalMonomial> {
    (0..=total).flat_map(move |s| (0..=total - s).map(move |r| ClassicalMonomial::new(s, r)))
}

fn label(m: &ClassicalMonomial) -> String {
    format!("p^{} q^{}", m.s, m.r)
}

pub fn commutation_identity(max: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("p^m q^n - q^n p^m identity");
    for m in 1..=max {
        for n in 1..=max {
            out.record(check_power_identity(m, n), || format!("(m={m}, n={n})"));
        }
    }
    out
}

pub fn bj_equals_weyl_low_order(max_total: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("BJ = Weyl when min(s, r) <= 1");
    for m in monomials_up_to(max_total).filter(|m| m.s.min(m.r) <= 1) {
        out.record(bj_quantize(&m) == weyl_quantize(&m), || label(&m));
    }
    out
}

/// BJ and Weyl differ, and the gap only contains terms of order ħ² or
/// higher (so words of length at most `s + r - 4`).
pub fn bj_differs_from_weyl(max_power: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("BJ != Weyl when s, r >= 2");
    for s in 2..=max_power {
        for r in 2..=max_power {
            let gap = bj_weyl_gap(&ClassicalPolynomial::monomial(s, r));
            let orders_ok =
                gap.terms().all(|(w, c)| w.len() + 4 <= s + r && c.valuation().is_some_and(|k| k >= 2));
            out.record(!gap.is_zero() && orders_ok, || format!("p^{s} q^{r}"));
        }
    }
    out
}

pub fn central_gap_witness() -> CheckOutcome {
    let mut out = CheckOutcome::new("BJ(p^2 q^2) - Weyl(p^2 q^2) = -h^2/6");
    let gap = bj_weyl_gap(&ClassicalPolynomial::monomial(2, 2));
    let expected =
        NCPolynomial::scalar(HbarScalar::monomial(crate::ncalg::scalar::exact_real(rational(-1, 6)), 2));
    out.record(gap == expected, || gap.to_string());
    out
}

pub fn qform_matches(max_total: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("BJ p-form = BJ q-form");
    for m in monomials_up_to(max_total) {
        out.record(bj_quantize(&m) == bj_quantize_qform(&m), || label(&m));
    }
    out
}

pub fn tau_average_exact(max_total: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("tau-average = BJ (exact)");
    for m in monomials_up_to(max_total) {
        out.record(bj_from_tau_average(&m) == bj_quantize(&m), || label(&m));
    }
    out
}

pub fn tau_average_quadrature(max_total: usize, order: usize, tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("tau-average = BJ (Gauss-Legendre)");
    for m in monomials_up_to(max_total) {
        let err = bj_from_tau_quadrature(&m, order)
            .map(|num| max_coeff_diff(&num, &to_numeric(&bj_quantize(&m))))
            .unwrap_or(f64::INFINITY);
        out.record(err <= tol, || format!("{} (err {err:e})", label(&m)));
    }
    out
}

pub fn motion_identities(max_power: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("equations of motion for BJ(p^s q^r)");
    for s in 0..=max_power {
        for r in 0..=max_power {
            let (rq, rp) = check_motion_identities(&ClassicalMonomial::new(s, r));
            out.record(rq.is_zero() && rp.is_zero(), || format!("p^{s} q^{r}"));
        }
    }
    out
}

/// BJ and Weyl images of real monomials are formally self-adjoint, and the
/// τ = 1/3 image of `p^2 q` is not.
pub fn self_adjointness(max_total: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("self-adjointness (BJ, Weyl; tau witness)");
    for m in monomials_up_to(max_total) {
        let bj = bj_quantize(&m);
        let w = weyl_quantize(&m);
        out.record(bj.adjoint().op_eq(&bj) && w.adjoint().op_eq(&w), || label(&m));
    }
    let tau = TauParameter::from_ratio(1, 3).expect("1/3 is in range");
    let t = tau_quantize(&ClassicalMonomial::new(2, 1), &tau);
    out.record(!t.adjoint().op_eq(&t), || "tau=1/3 p^2 q".into());
    out
}

/// All exact checks at the default ranges.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        commutation_identity(5),
        bj_equals_weyl_low_order(8),
        bj_differs_from_weyl(4),
        central_gap_witness(),
        qform_matches(8),
        tau_average_exact(8),
        tau_average_quadrature(8, 16, 1e-12),
        motion_identities(4),
        self_adjointness(8),
    ]
}
