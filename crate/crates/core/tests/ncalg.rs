use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use opcalc::ncalg::scalar::{exact_i, exact_int, ExactComplex};
use opcalc::ncalg::{
    check_power_identity, parse_polynomial, HbarScalar, Letter, NCPolynomial, RewriteStrategy, Word,
};
use proptest::prelude::*;

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Closed form `p^m q^n = Σ_k k! C(m,k) C(n,k) (-iħ)^k q^{n-k} p^{m-k}`.
fn pm_qn_oracle(m: usize, n: usize) -> NCPolynomial {
    let mut minus_i_pow = HbarScalar::one();
    let mut terms = Vec::new();
    for k in 0..=m.min(n) {
        let c = factorial(k) * binom(m, k) * binom(n, k);
        terms.push((Word::q_then_p(n - k, m - k), minus_i_pow.scale(&exact_int(c))));
        minus_i_pow = &minus_i_pow * &HbarScalar::minus_i_hbar();
    }
    NCPolynomial::from_terms(terms)
}

fn word_from_bits(bits: &[bool]) -> Word {
    Word::from_letters(bits.iter().map(|&b| if b { Letter::P } else { Letter::Q }).collect())
}

fn small_poly() -> impl Strategy<Value = NCPolynomial> {
    prop::collection::vec((prop::collection::vec(any::<bool>(), 0..=6), -4i64..=4, 0usize..=1), 1..=3)
        .prop_map(|terms| {
            NCPolynomial::from_terms(
                terms
                    .into_iter()
                    .map(|(bits, c, k)| (word_from_bits(&bits), HbarScalar::monomial(exact_int(c), k))),
            )
        })
}

fn exact_coeff() -> impl Strategy<Value = ExactComplex> {
    (-9i64..=9, 1i64..=7, -9i64..=9, 1i64..=7).prop_map(|(a, b, c, d)| {
        ExactComplex::new(
            BigRational::new(BigInt::from(a), BigInt::from(b)),
            BigRational::new(BigInt::from(c), BigInt::from(d)),
        )
    })
}

#[test]
fn pm_qn_matches_closed_form() {
    for m in 0..=6 {
        for n in 0..=6 {
            let word = Word::p_pow(m).concat(&Word::q_pow(n));
            let got = NCPolynomial::word(word).normal_order();
            assert_eq!(got, pm_qn_oracle(m, n), "p^{m} q^{n}");
        }
    }
}

#[test]
fn power_identity_holds_for_all_small_exponents() {
    for m in 1..=5 {
        for n in 1..=5 {
            assert!(check_power_identity(m, n), "m = {m}, n = {n}");
        }
    }
}

#[test]
fn documented_canonical_forms() {
    let pq = parse_polynomial("p q").unwrap().normal_order();
    assert_eq!(pq.to_string(), "q p - i*h");
    let ppq = parse_polynomial("p^2 q").unwrap().normal_order();
    assert_eq!(ppq.to_string(), "q p^2 - 2*i*h*p");
    let comm = NCPolynomial::commutator(&NCPolynomial::p_pow(2), &NCPolynomial::q());
    assert_eq!(comm.to_string(), "-2*i*h*p");
}

#[test]
fn adjoint_of_canonical_pq_product() {
    // (qp)† = pq, which normal-orders to qp - iħ: qp is not self-adjoint.
    let qp = NCPolynomial::word(Word::q_then_p(1, 1));
    let diff = &qp.adjoint().normal_order() - &qp;
    assert_eq!(diff, NCPolynomial::scalar(HbarScalar::minus_i_hbar()));
    let sym = parse_polynomial("1/2*(q p + p q)").unwrap();
    assert!(sym.adjoint().op_eq(&sym));
    let ih = NCPolynomial::scalar(HbarScalar::monomial(exact_i(), 1));
    assert!(!ih.adjoint().op_eq(&ih));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rewriting_is_confluent(
        bits in prop::collection::vec(any::<bool>(), 0..=8),
        s1 in any::<u64>(),
        s2 in any::<u64>(),
    ) {
        let poly = NCPolynomial::word(word_from_bits(&bits));
        let left = poly.normal_order_with(RewriteStrategy::Leftmost);
        prop_assert!(left.is_canonical());
        prop_assert_eq!(&poly.normal_order_with(RewriteStrategy::Rightmost), &left);
        prop_assert_eq!(&poly.normal_order_with(RewriteStrategy::Seeded(s1)), &left);
        prop_assert_eq!(&poly.normal_order_with(RewriteStrategy::Seeded(s2)), &left);
    }

    #[test]
    fn confluence_for_sums(a in small_poly(), b in small_poly(), seed in any::<u64>()) {
        let poly = a.multiply(&b);
        prop_assert_eq!(
            poly.normal_order_with(RewriteStrategy::Seeded(seed)),
            poly.normal_order_with(RewriteStrategy::Rightmost)
        );
    }

    #[test]
    fn normal_order_is_a_homomorphism(a in small_poly(), b in small_poly()) {
        let direct = a.multiply(&b).normal_order();
        let via = a.normal_order().multiply(&b.normal_order()).normal_order();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn normal_order_is_idempotent(a in small_poly()) {
        let once = a.normal_order();
        prop_assert_eq!(once.normal_order(), once);
    }

    #[test]
    fn adjoint_reverses_products(a in small_poly(), b in small_poly()) {
        let lhs = a.multiply(&b).adjoint();
        let rhs = b.adjoint().multiply(&a.adjoint());
        prop_assert!(lhs.op_eq(&rhs));
    }

    #[test]
    fn degree_filtration(bits in prop::collection::vec(any::<bool>(), 0..=8)) {
        let word = word_from_bits(&bits);
        let (ps, qs) = (word.count(Letter::P), word.count(Letter::Q));
        let out = NCPolynomial::word(word).normal_order();
        for (w, c) in out.terms() {
            prop_assert!(w.len() <= bits.len());
            for (k, _) in c.iter_terms() {
                prop_assert_eq!(w.count(Letter::P) + k, ps);
                prop_assert_eq!(w.count(Letter::Q) + k, qs);
            }
        }
    }

    #[test]
    fn text_round_trip(
        terms in prop::collection::vec(
            (0usize..=4, 0usize..=4, 0usize..=3, exact_coeff()),
            0..=5,
        )
    ) {
        let poly = NCPolynomial::from_terms(terms.into_iter().map(|(a, b, k, c)| {
            (Word::q_then_p(a, b), HbarScalar::monomial(c, k))
        }));
        let text = poly.to_string();
        let back = parse_polynomial(&text).unwrap();
        prop_assert_eq!(&back, &poly, "text was {}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn round_trip_of_noncanonical_words(a in small_poly()) {
        let back = parse_polynomial(&a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn zero_coefficients_never_stored() {
    let a = NCPolynomial::from_terms([
        (Word::q_pow(1), HbarScalar::from_int(1)),
        (Word::q_pow(1), HbarScalar::from_int(-1)),
    ]);
    assert!(a.is_zero());
    assert!(
        HbarScalar::from_coeffs(vec![ExactComplex::new(BigRational::zero(), BigRational::zero())]).is_zero()
    );
}
