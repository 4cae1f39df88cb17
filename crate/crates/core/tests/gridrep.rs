mod common;

use std::f64::consts::PI;

use common::{close, element_gap, interior_states};
use nalgebra::DVector;
use num_complex::Complex64;
use opcalc::gridrep::{
    bj_kernel_quantize, build_momentum, build_position, realize, tau_kernel_quantize, weyl_kernel_quantize,
    GridSpec, OperatorMatrix, SampledSymbol, SymbolClass, DEFAULT_BJ_ORDER,
};
use opcalc::ncalg::parse_polynomial;
use opcalc::phasespace::{PhaseSpaceFunction, StateVector};
use opcalc::quantrules::{bj_quantize, ClassicalMonomial, ClassicalPolynomial};
use opcalc::Error;

fn desk() -> GridSpec {
    GridSpec::desk()
}

fn poly_symbol(expr: &str, grid: &GridSpec) -> SampledSymbol {
    SampledSymbol::from_polynomial(&ClassicalPolynomial::parse(expr).unwrap(), grid.hbar())
}

fn relative_hermiticity(m: &OperatorMatrix) -> f64 {
    m.hermiticity_residual() / m.max_abs()
}

#[test]
fn position_matrix() {
    let g = GridSpec::new(16, 1.0, 1.0).unwrap();
    let q = build_position(&g);
    let diag: Vec<f64> = (0..16).map(|i| q.get(i, i).re).collect();
    assert_eq!(diag[0], -1.0);
    assert_eq!(diag[1], -7.0 / 8.0);
    assert_eq!(diag[15], 7.0 / 8.0);
    let ones = StateVector::from_fn(g, |_| Complex64::new(1.0, 0.0));
    let out = ones.apply(&q).unwrap();
    for (i, z) in out.amplitudes().iter().enumerate() {
        assert_eq!(*z, Complex64::new(g.q(i), 0.0));
    }
    let q2 = &q * &q;
    assert_eq!(q.commutator(&q2).unwrap().max_abs(), 0.0);
    assert_eq!(q.hermiticity_residual(), 0.0);
}

#[test]
fn momentum_matrix() {
    let g = desk();
    let p = build_momentum(&g);
    let l = g.half_width();
    let wave = StateVector::from_fn(g, |q| Complex64::from_polar(1.0, PI * q / l));
    let out = wave.apply(&p).unwrap();
    let eig = PI * g.hbar() / l;
    for (a, b) in out.amplitudes().iter().zip(wave.amplitudes().iter()) {
        assert!((a - b * eig).norm() < 1e-12);
    }
    let ones = StateVector::from_fn(g, |_| Complex64::new(1.0, 0.0));
    assert!(ones.apply(&p).unwrap().amplitudes().iter().all(|z| z.norm() < 1e-12));
    assert!(p.hermiticity_residual() < 1e-12);

    let psi = StateVector::gaussian(g, 0.0, 0.0, l / 8.0).unwrap();
    let comm = build_position(&g).commutator(&p).unwrap();
    let val = psi.expectation(&comm).unwrap();
    assert!(close(val, Complex64::new(0.0, g.hbar()), 1e-6), "{val}");
}

#[test]
fn weyl_kernel_of_coordinates() {
    let g = desk();
    let p_kernel = weyl_kernel_quantize(&poly_symbol("p", &g), &g).unwrap();
    assert!(p_kernel.relative_frobenius_gap(&build_momentum(&g)).unwrap() < 1e-10);
    let q_kernel = weyl_kernel_quantize(&poly_symbol("q", &g), &g).unwrap();
    assert!(q_kernel.relative_frobenius_gap(&build_position(&g)).unwrap() < 1e-10);
}

#[test]
fn weyl_kernel_of_anharmonic_hamiltonian() {
    let g = desk();
    let h = weyl_kernel_quantize(&poly_symbol("p^2/2 + q^4", &g), &g).unwrap();
    assert!(relative_hermiticity(&h) <= 1e-10);
    let p = build_momentum(&g);
    let q = build_position(&g);
    let q2 = &q * &q;
    let composed = &(&p * &p).scale(Complex64::from(0.5)) + &(&q2 * &q2);
    let states = interior_states(g);
    assert!(element_gap(&h, &composed, &states) < 1e-8);
}

#[test]
fn tau_half_is_weyl_bit_for_bit() {
    let g = desk();
    for expr in ["q^2", "p^2 q^2 - 3 q p"] {
        let a = poly_symbol(expr, &g);
        let w = weyl_kernel_quantize(&a, &g).unwrap();
        let t = tau_kernel_quantize(&a, 0.5, &g).unwrap();
        assert_eq!(w, t, "{expr}");
    }
}

#[test]
fn tau_endpoints_are_one_sided_orderings() {
    let g = desk();
    let f = |q: f64| (-(q - 0.3) * (q - 0.3) / 3.0).exp();
    let a = SampledSymbol::real(SymbolClass::Decaying, move |q, p| f(q) * p);
    let fq = OperatorMatrix::from_entries(
        g,
        nalgebra::DMatrix::from_diagonal(&DVector::from_iterator(
            g.n(),
            g.q_points().into_iter().map(|q| Complex64::from(f(q))),
        )),
    )
    .unwrap();
    let p = build_momentum(&g);
    let states = interior_states(g);
    let t0 = tau_kernel_quantize(&a, 0.0, &g).unwrap();
    let g0 = element_gap(&t0, &(&fq * &p), &states);
    assert!(g0 < 1e-10, "{g0:e}");
    let t1 = tau_kernel_quantize(&a, 1.0, &g).unwrap();
    let g1 = element_gap(&t1, &(&p * &fq), &states);
    assert!(g1 < 1e-10, "{g1:e}");
    // The two orderings genuinely differ.
    assert!(element_gap(&t0, &t1, &states) > 1e-2);
}

#[test]
fn bj_and_weyl_coincide_for_physical_hamiltonians() {
    let g = desk();
    let a = 0.7;
    let symbols = vec![
        poly_symbol("p^2/2 + q^4", &g),
        SampledSymbol::real(SymbolClass::Polynomial, move |q, p| (p - a * q).powi(2) / 2.0 + q.cos()),
        poly_symbol("3/2 p^2 + 2*(-1/3) p q + 5/4 q^2", &g),
    ];
    for s in &symbols {
        let w = weyl_kernel_quantize(s, &g).unwrap();
        let b = bj_kernel_quantize(s, &g, DEFAULT_BJ_ORDER).unwrap();
        assert!(b.relative_frobenius_gap(&w).unwrap() < 1e-8);
    }
}

#[test]
fn bj_and_weyl_differ_by_constant_for_p2q2() {
    let g = desk();
    let s = poly_symbol("p^2 q^2", &g);
    let w = weyl_kernel_quantize(&s, &g).unwrap();
    let b = bj_kernel_quantize(&s, &g, DEFAULT_BJ_ORDER).unwrap();
    let diff = b.try_sub(&w).unwrap();
    let expected = Complex64::from(-g.hbar().powi(2) / 6.0);
    for psi in interior_states(g) {
        let v = psi.expectation(&diff).unwrap();
        assert!(close(v, expected, 1e-6), "{v}");
    }
}

#[test]
fn quadrature_is_exact_for_low_tau_degree() {
    let g = desk();
    // τ-degree 3 in the evaluation point: order 2 already integrates it exactly.
    let s = poly_symbol("p^2 q^3 - q^3", &g);
    let reference = bj_kernel_quantize(&s, &g, DEFAULT_BJ_ORDER).unwrap();
    for order in [2, 4, 8] {
        let m = bj_kernel_quantize(&s, &g, order).unwrap();
        let gap = m.max_abs_diff(&reference).unwrap() / reference.max_abs();
        assert!(gap <= 1e-12, "order {order}: {gap:e}");
    }
}

#[test]
fn hermiticity_of_real_symbols() {
    let g = desk();
    let damped =
        SampledSymbol::real(SymbolClass::Decaying, |q, p| p * p * q * q * (-(q * q + p * p) / 2.0).exp());
    for s in [damped, poly_symbol("p^2/2 + q^4", &g), poly_symbol("p^2 q", &g)] {
        let w = weyl_kernel_quantize(&s, &g).unwrap();
        let t = tau_kernel_quantize(&s, 0.5, &g).unwrap();
        let b = bj_kernel_quantize(&s, &g, DEFAULT_BJ_ORDER).unwrap();
        for m in [&w, &t, &b] {
            assert!(relative_hermiticity(m) <= 1e-10);
        }
    }
    let witness = tau_kernel_quantize(&poly_symbol("p^2 q", &g), 0.25, &g).unwrap();
    assert!(relative_hermiticity(&witness) > 1e-3);
}

#[test]
fn table_symbols_match_callables() {
    let g = desk();
    let f = |q: f64, p: f64| (q * p).cos() * (-(q * q + p * p) / 4.0).exp();
    let callable = SampledSymbol::real(SymbolClass::Decaying, f);
    let table = SampledSymbol::from_table(
        PhaseSpaceFunction::from_fn(g, |q, p| Complex64::from(f(q, p))),
        SymbolClass::Decaying,
    );
    let a = bj_kernel_quantize(&callable, &g, 8).unwrap();
    let b = bj_kernel_quantize(&table, &g, 8).unwrap();
    let tg = b.relative_frobenius_gap(&a).unwrap();
    assert!(tg < 1e-6, "{tg:e}");
    let other = GridSpec::new(64, 8.0, 1.0).unwrap();
    assert!(matches!(weyl_kernel_quantize(&table, &other), Err(Error::GridMismatch { .. })));
}

#[test]
fn realize_examples() {
    let g = desk();
    let states = interior_states(g);
    let lhs = realize(&parse_polynomial("q p - i*h").unwrap(), &g);
    let rhs = realize(&parse_polynomial("p q").unwrap(), &g);
    assert!(element_gap(&lhs, &rhs, &states) < 1e-6);

    let q = build_position(&g);
    assert_eq!(realize(&parse_polynomial("q^2").unwrap(), &g), &q * &q);

    let p2q = realize(&bj_quantize(&ClassicalMonomial::new(2, 1)), &g);
    let kernel = bj_kernel_quantize(&poly_symbol("p^2 q", &g), &g, DEFAULT_BJ_ORDER).unwrap();
    let rg = element_gap(&p2q, &kernel, &states);
    assert!(rg < 1e-6, "{rg:e}");
}

#[test]
fn normal_ordering_survives_realization() {
    // p^2 q -> q p^2 - 2iħ p, compared on the grid.
    let g = desk();
    let word = parse_polynomial("p^2 q").unwrap();
    let a = realize(&word, &g);
    let b = realize(&word.normal_order(), &g);
    assert!(element_gap(&a, &b, &interior_states(g)) < 1e-6);
}

#[test]
fn symbolic_and_kernel_bj_agree_on_interior_states() {
    let g = desk();
    let states = interior_states(g);
    for s in 0..=3 {
        for r in 0..=3 {
            let m = ClassicalMonomial::new(s, r);
            let symbolic = realize(&bj_quantize(&m), &g);
            let sym = SampledSymbol::from_polynomial(&ClassicalPolynomial::monomial(s, r), g.hbar());
            let kernel = bj_kernel_quantize(&sym, &g, DEFAULT_BJ_ORDER).unwrap();
            let gap = element_gap(&symbolic, &kernel, &states);
            assert!(gap < 1e-6, "p^{s} q^{r}: {gap:e}");
        }
    }
}

#[test]
fn polynomial_tables_match_callables_on_interior_states() {
    let g = desk();
    let f = |q: f64, p: f64| p * p * q * q - 0.5 * q.powi(3);
    let table = SampledSymbol::from_table(
        PhaseSpaceFunction::from_fn(g, |q, p| Complex64::from(f(q, p))),
        SymbolClass::Polynomial,
    );
    let callable = SampledSymbol::real(SymbolClass::Polynomial, f);
    let a = bj_kernel_quantize(&table, &g, 8).unwrap();
    let b = bj_kernel_quantize(&callable, &g, 8).unwrap();
    let gap = element_gap(&a, &b, &interior_states(g));
    assert!(gap < 1e-8, "{gap:e}");
}

#[test]
fn kernel_matrices_survive_serialization() {
    let g = GridSpec::new(32, 4.0, 0.5).unwrap();
    let m = bj_kernel_quantize(&poly_symbol("p^2 q^2 + q", &g), &g, 8).unwrap();
    let back = OperatorMatrix::from_json_str(&m.to_json_string().unwrap()).unwrap();
    assert_eq!(back, m);
    let mut csv = Vec::new();
    m.to_csv_writer(&mut csv).unwrap();
    let back = OperatorMatrix::from_csv_reader(g, csv.as_slice()).unwrap();
    assert!(back.max_abs_diff(&m).unwrap() <= 1e-12 * m.max_abs());
}
