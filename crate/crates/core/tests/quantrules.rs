use opcalc::ncalg::{parse_polynomial, NCPolynomial};
use opcalc::quantrules::suite;
use opcalc::quantrules::{
    bj_from_tau_average, bj_from_tau_quadrature, bj_quantize, bj_quantize_qform, check_motion_identities,
    max_coeff_diff, quantize_polynomial, tau_expansion, tau_quantize, to_numeric, weyl_quantize,
    ClassicalMonomial, ClassicalPolynomial, Rule, TauParameter,
};
use proptest::prelude::*;

fn nc(s: &str) -> NCPolynomial {
    parse_polynomial(s).unwrap().normal_order()
}

fn cl(s: &str) -> ClassicalPolynomial {
    ClassicalPolynomial::parse(s).unwrap()
}

#[test]
fn every_identity_suite_passes() {
    for outcome in suite::run_all() {
        assert!(outcome.ok(), "{outcome}");
    }
}

#[test]
fn suite_sizes() {
    assert_eq!(suite::commutation_identity(5).total, 25);
    assert_eq!(suite::bj_differs_from_weyl(4).total, 9);
    assert_eq!(suite::motion_identities(4).total, 25);
}

#[test]
fn bj_matches_explicit_average() {
    let m = ClassicalMonomial::new(2, 1);
    assert_eq!(bj_quantize(&m), nc("1/3*(p^2 q + p q p + q p^2)"));
    assert_eq!(bj_quantize(&ClassicalMonomial::new(0, 3)), nc("q^3"));
    assert_eq!(bj_quantize(&ClassicalMonomial::new(2, 2)), nc("1/3*(p^2 q^2 + p q^2 p + q^2 p^2)"));
}

#[test]
fn qform_examples() {
    let m = ClassicalMonomial::new(2, 1);
    assert_eq!(bj_quantize_qform(&m).to_string(), "q p^2 - i*h*p");
    assert_eq!(bj_quantize_qform(&ClassicalMonomial::new(0, 3)), nc("q^3"));
    let m32 = ClassicalMonomial::new(3, 2);
    assert_eq!(bj_quantize_qform(&m32), bj_quantize(&m32));
}

#[test]
fn weyl_examples() {
    assert_eq!(weyl_quantize(&ClassicalMonomial::new(1, 1)), nc("1/2*(p q + q p)"));
    assert_eq!(weyl_quantize(&ClassicalMonomial::new(2, 1)), nc("1/4*(p^2 q + 2 p q p + q p^2)"));
}

#[test]
fn tau_rule_examples() {
    // Weight τ^(s-l) (1-τ)^l on p^(s-l) q^r p^l.
    let m = ClassicalMonomial::new(2, 1);
    for (n, d) in [(0, 1), (1, 5), (1, 3), (1, 2), (3, 4), (1, 1)] {
        let tau = TauParameter::from_ratio(n, d).unwrap();
        let t = format!("{n}/{d}");
        let expected = nc(&format!("({t})^2 p^2 q + 2 ({t}) (1 - {t}) p q p + (1 - {t})^2 q p^2"));
        assert_eq!(tau_quantize(&m, &tau), expected, "tau = {t}");
    }
    let q3 = ClassicalMonomial::new(0, 3);
    assert_eq!(tau_quantize(&q3, &TauParameter::from_ratio(1, 7).unwrap()), nc("q^3"));
    // τ = 1 puts the p factors on the left.
    let tau1 = TauParameter::from_ratio(1, 1).unwrap();
    assert_eq!(tau_quantize(&m, &tau1), nc("p^2 q"));
}

#[test]
fn tau_expansion_evaluates_to_tau_rule() {
    let m = ClassicalMonomial::new(3, 2);
    let coeffs = tau_expansion(&m);
    let tau = TauParameter::from_ratio(2, 7).unwrap();
    let mut acc = NCPolynomial::zero();
    for (k, c) in coeffs.iter().enumerate() {
        let w = num_traits::pow(tau.value().clone(), k);
        acc = &acc + &c.scale_exact(&num_complex::Complex::new(w, num_traits::Zero::zero()));
    }
    assert_eq!(acc, tau_quantize(&m, &tau));
}

#[test]
fn tau_average_examples() {
    let m = ClassicalMonomial::new(2, 1);
    assert_eq!(bj_from_tau_average(&m), nc("1/3*(p^2 q + p q p + q p^2)"));
    assert_eq!(bj_from_tau_average(&ClassicalMonomial::new(0, 2)), nc("q^2"));
    let m33 = ClassicalMonomial::new(3, 3);
    assert_eq!(bj_from_tau_average(&m33), bj_quantize(&m33));
    let num = bj_from_tau_quadrature(&m33, 16).unwrap();
    assert!(max_coeff_diff(&num, &to_numeric(&bj_quantize(&m33))) <= 1e-12);
}

#[test]
fn motion_identity_examples() {
    let (rq, rp) = check_motion_identities(&ClassicalMonomial::new(2, 0));
    assert!(rq.is_zero() && rp.is_zero());
    let h = bj_quantize(&ClassicalMonomial::new(2, 1));
    let comm = NCPolynomial::commutator(&h, &NCPolynomial::q());
    assert_eq!(comm, nc("-2*i*h*q p - h^2"));
    assert_eq!(comm, nc("-i*h*(q p + p q)"));
    let (rq, _) = check_motion_identities(&ClassicalMonomial::new(0, 3));
    assert!(rq.is_zero());
}

#[test]
fn physical_hamiltonians_coincide() {
    for expr in ["p^2/2 + q^2/2", "3 p^2 + 2*5 p q - 7/2 q^2", "p^2/2 + q^4", "(p - 3/2 q)^2/2 + q^3 - q^6"] {
        let h = cl(expr);
        assert_eq!(
            quantize_polynomial(&h, &Rule::BornJordan),
            quantize_polynomial(&h, &Rule::Weyl),
            "{expr}"
        );
    }
    let zero = &cl("p^2 q^2") - &cl("p^2 q^2");
    for rule in [Rule::BornJordan, Rule::Weyl, Rule::Tau(TauParameter::from_ratio(1, 4).unwrap())] {
        assert!(quantize_polynomial(&zero, &rule).is_zero());
    }
}

fn classical_poly() -> impl Strategy<Value = ClassicalPolynomial> {
    prop::collection::vec((0usize..=3, 0usize..=3, -5i64..=5), 1..=4).prop_map(|terms| {
        ClassicalPolynomial::from_monomials(
            terms
                .into_iter()
                .map(|(s, r, c)| ClassicalMonomial::with_coeff(s, r, opcalc::ncalg::HbarScalar::from_int(c))),
        )
    })
}

fn rule() -> impl Strategy<Value = Rule> {
    prop_oneof![
        Just(Rule::BornJordan),
        Just(Rule::Weyl),
        (0i64..=6).prop_map(|n| Rule::Tau(TauParameter::from_ratio(n, 6).unwrap())),
    ]
}

proptest! {
    #[test]
    fn quantization_is_linear(a in classical_poly(), b in classical_poly(), rule in rule()) {
        let sum = quantize_polynomial(&(&a + &b), &rule);
        let parts = &quantize_polynomial(&a, &rule) + &quantize_polynomial(&b, &rule);
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn classical_text_round_trip(a in classical_poly()) {
        prop_assert_eq!(ClassicalPolynomial::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn tau_half_is_weyl(s in 0usize..=4, r in 0usize..=4) {
        let m = ClassicalMonomial::new(s, r);
        prop_assert_eq!(tau_quantize(&m, &TauParameter::half()), weyl_quantize(&m));
    }

    #[test]
    fn mirror_tau_is_adjoint(s in 0usize..=4, r in 0usize..=4, n in 0i64..=8) {
        // The τ and 1-τ images of a real monomial are formal adjoints.
        let m = ClassicalMonomial::new(s, r);
        let t = tau_quantize(&m, &TauParameter::from_ratio(n, 8).unwrap());
        let u = tau_quantize(&m, &TauParameter::from_ratio(8 - n, 8).unwrap());
        prop_assert!(t.adjoint().op_eq(&u));
    }
}
