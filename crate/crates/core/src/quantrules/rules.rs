use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::classical::{ClassicalMonomial, ClassicalPolynomial};
use crate::error::{Error, Result};
use crate::ncalg::scalar::{exact_i, exact_real, exact_to_c64, rational_to_f64};
use crate::ncalg::{HbarScalar, NCPolynomial, Word};
use crate::quadrature::gauss_legendre_unit;

/// Exact τ in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauParameter(BigRational);

impl TauParameter {
    pub fn new(tau: BigRational) -> Result<Self> {
        if tau < BigRational::zero() || tau > BigRational::one() {
            return Err(Error::TauRange(tau.to_string()));
        }
        Ok(Self(tau))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::TauRange(format!("{num}/0")));
        }
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn half() -> Self {
        Self(BigRational::new(BigInt::from(1), BigInt::from(2)))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }
}

impl FromStr for TauParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { pos: 0, msg: format!("invalid tau '{s}'") };
        let poly = ClassicalPolynomial::parse(s).map_err(|_| bad())?;
        if poly.is_zero() {
            return Self::new(BigRational::zero());
        }
        let c = poly.coeff(0, 0);
        if poly.degree() != Some(0) || c.degree() != Some(0) || !c.is_real() {
            return Err(bad());
        }
        Self::new(c.coeff(0).re)
    }
}

impl fmt::Display for TauParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordering rule applied to classical monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    BornJordan,
    Weyl,
    Tau(TauParameter),
}

impl FromStr for Rule {
    type Err = Error;
    /// Accepts `bj`, `weyl` and `tau:<rational>` (e.g. `tau:1/3`).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bj" | "born-jordan" | "bornjordan" => Ok(Rule::BornJordan),
            "weyl" | "w" => Ok(Rule::Weyl),
            other => match other.strip_prefix("tau:") {
                Some(v) => Ok(Rule::Tau(v.parse()?)),
                None => Err(Error::Invalid(format!("unknown rule '{s}' (expected bj, weyl or tau:<value>)"))),
            },
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::BornJordan => write!(f, "bj"),
            Rule::Weyl => write!(f, "weyl"),
            Rule::Tau(t) => write!(f, "tau:{t}"),
        }
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j) / BigInt::from(j + 1))
}

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// The word `p^a q^r p^b`.
fn p_q_p(a: usize, r: usize, b: usize) -> NCPolynomial {
    NCPolynomial::word(Word::p_pow(a).concat(&Word::q_pow(r)).concat(&Word::p_pow(b)))
}

/// The word `q^a p^s q^b`.
fn q_p_q(a: usize, s: usize, b: usize) -> NCPolynomial {
    NCPolynomial::word(Word::q_pow(a).concat(&Word::p_pow(s)).concat(&Word::q_pow(b)))
}

fn weighted_sum<I>(items: I, coeff: &HbarScalar) -> NCPolynomial
where
    I: IntoIterator<Item = (BigRational, NCPolynomial)>,
{
    let mut acc = NCPolynomial::zero();
    for (w, poly) in items {
        acc = &acc + &poly.scale_exact(&exact_real(w));
    }
    acc.scale(coeff).normal_order()
}

/// Born–Jordan: `(1/(s+1)) Σ_l p^(s-l) q^r p^l`, normal-ordered.
pub fn bj_quantize(m: &ClassicalMonomial) -> NCPolynomial {
    let w = rat(BigInt::one(), BigInt::from(m.s + 1));
    weighted_sum((0..=m.s).map(|l| (w.clone(), p_q_p(m.s - l, m.r, l))), &m.coeff)
}

/// Born–Jordan in the form `(1/(r+1)) Σ_j q^(r-j) p^s q^j`.
pub fn bj_quantize_qform(m: &ClassicalMonomial) -> NCPolynomial {
    let w = rat(BigInt::one(), BigInt::from(m.r + 1));
    weighted_sum((0..=m.r).map(|j| (w.clone(), q_p_q(m.r - j, m.s, j))), &m.coeff)
}

/// Weyl: `2^-s Σ_l C(s,l) p^(s-l) q^r p^l`, normal-ordered.
pub fn weyl_quantize(m: &ClassicalMonomial) -> NCPolynomial {
    let denom = BigInt::one() << m.s;
    weighted_sum((0..=m.s).map(|l| (rat(binomial(m.s, l), denom.clone()), p_q_p(m.s - l, m.r, l))), &m.coeff)
}

/// τ-rule: `Σ_l C(s,l) (1-τ)^l τ^(s-l) p^(s-l) q^r p^l`, normal-ordered.
///
/// At τ = 0 every `p` ends up to the right of `q^r`, matching the kernel
/// convention in which τ = 0 evaluates the symbol at the output point.
pub fn tau_quantize(m: &ClassicalMonomial, tau: &TauParameter) -> NCPolynomial {
    let t = tau.value();
    let one_minus = BigRational::one() - t;
    weighted_sum(
        (0..=m.s).map(|l| {
            let w = BigRational::from_integer(binomial(m.s, l))
                * num_traits::pow(one_minus.clone(), l)
                * num_traits::pow(t.clone(), m.s - l);
            (w, p_q_p(m.s - l, m.r, l))
        }),
        &m.coeff,
    )
}

/// Coefficients of the τ-rule as a polynomial in τ: entry `k` multiplies
/// `τ^k`, each already normal-ordered.
pub fn tau_expansion(m: &ClassicalMonomial) -> Vec<NCPolynomial> {
    let mut out = vec![NCPolynomial::zero(); m.s + 1];
    for l in 0..=m.s {
        let base = p_q_p(m.s - l, m.r, l).scale(&m.coeff).normal_order();
        let c_sl = binomial(m.s, l);
        // (1-τ)^l τ^(s-l) = Σ_j C(l,j) (-1)^j τ^(s-l+j)
        for j in 0..=l {
            let mut c = &c_sl * binomial(l, j);
            if j % 2 == 1 {
                c = -c;
            }
            let term = base.scale_exact(&exact_real(BigRational::from_integer(c)));
            out[m.s - l + j] = &out[m.s - l + j] + &term;
        }
    }
    out
}

/// Exact `∫_0^1 tau_quantize(m, τ) dτ`, integrating the τ-polynomial termwise.
pub fn bj_from_tau_average(m: &ClassicalMonomial) -> NCPolynomial {
    let mut acc = NCPolynomial::zero();
    for (k, coeff) in tau_expansion(m).iter().enumerate() {
        let w = rat(BigInt::one(), BigInt::from(k + 1));
        acc = &acc + &coeff.scale_exact(&exact_real(w));
    }
    acc
}

/// Floating-point coefficients keyed by `(word, ħ power)`.
pub type NumericPolynomial = BTreeMap<(Word, usize), Complex64>;

pub fn to_numeric(poly: &NCPolynomial) -> NumericPolynomial {
    let mut out = NumericPolynomial::new();
    for (w, c) in poly.terms() {
        for (k, x) in c.iter_terms() {
            out.insert((w.clone(), k), exact_to_c64(x));
        }
    }
    out
}

/// Largest coefficient-wise difference between two numeric polynomials.
pub fn max_coeff_diff(a: &NumericPolynomial, b: &NumericPolynomial) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).norm())
        .fold(0.0, f64::max)
}

/// τ-average by Gauss–Legendre quadrature in floating point.
pub fn bj_from_tau_quadrature(m: &ClassicalMonomial, order: usize) -> Result<NumericPolynomial> {
    if order < 2 {
        return Err(Error::QuadratureOrder(order));
    }
    let (nodes, weights) = gauss_legendre_unit(order);
    let words: Vec<NumericPolynomial> =
        (0..=m.s).map(|l| to_numeric(&p_q_p(m.s - l, m.r, l).scale(&m.coeff).normal_order())).collect();
    let mut out = NumericPolynomial::new();
    for (tau, w) in nodes.iter().zip(&weights) {
        for (l, poly) in words.iter().enumerate() {
            let c_sl = rational_to_f64(&BigRational::from_integer(binomial(m.s, l)));
            let f = w * c_sl * (1.0 - tau).powi(l as i32) * tau.powi((m.s - l) as i32);
            for (key, x) in poly {
                *out.entry(key.clone()).or_insert(Complex64::new(0.0, 0.0)) += x * f;
            }
        }
    }
    Ok(out)
}

pub fn quantize_monomial(m: &ClassicalMonomial, rule: &Rule) -> NCPolynomial {
    match rule {
        Rule::BornJordan => bj_quantize(m),
        Rule::Weyl => weyl_quantize(m),
        Rule::Tau(t) => tau_quantize(m, t),
    }
}

/// Linear extension of a monomial rule.
pub fn quantize_polynomial(poly: &ClassicalPolynomial, rule: &Rule) -> NCPolynomial {
    poly.monomials().fold(NCPolynomial::zero(), |acc, m| &acc + &quantize_monomial(&m, rule))
}

/// Residuals of the equations of motion for `H = BJ(m)`:
///
/// * `[H, q] - (-iħ)·BJ(∂H/∂p)`
/// * `[H, p] - (iħ)·BJ(∂H/∂q)`
///
/// with the classical derivatives quantized by the same rule.
pub fn check_motion_identities(m: &ClassicalMonomial) -> (NCPolynomial, NCPolynomial) {
    let poly = ClassicalPolynomial::from_monomials([m.clone()]);
    let h = bj_quantize(m);
    let i_hbar = NCPolynomial::scalar(HbarScalar::monomial(exact_i(), 1));
    let dh_dp = quantize_polynomial(&poly.d_dp(), &Rule::BornJordan);
    let dh_dq = quantize_polynomial(&poly.d_dq(), &Rule::BornJordan);
    let res_q = &NCPolynomial::commutator(&h, &NCPolynomial::q()) + &i_hbar.multiply(&dh_dp);
    let res_p = &NCPolynomial::commutator(&h, &NCPolynomial::p()) - &i_hbar.multiply(&dh_dq);
    (res_q.normal_order(), res_p.normal_order())
}

/// How `BJ(P) - Weyl(P)` acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapClass {
    Zero,
    /// A multiple of the identity; the value is the scalar.
    Central(HbarScalar),
    NonCentral,
}

pub fn bj_weyl_gap(poly: &ClassicalPolynomial) -> NCPolynomial {
    &quantize_polynomial(poly, &Rule::BornJordan) - &quantize_polynomial(poly, &Rule::Weyl)
}

pub fn classify_gap(poly: &ClassicalPolynomial) -> GapClass {
    let gap = bj_weyl_gap(poly);
    if gap.is_zero() {
        GapClass::Zero
    } else if gap.is_central_scalar() {
        GapClass::Central(gap.coeff(&Word::identity()))
    } else {
        GapClass::NonCentral
    }
}

/// Lowest-degree monomial `p^s q^r` (ties broken by smaller `s`) with
/// `s, r <= max_power` whose BJ/Weyl gap is not a multiple of the identity.
pub fn find_noncentral_monomial(max_power: usize) -> Option<(usize, usize)> {
    (0..=2 * max_power)
        .flat_map(|d| (0..=d).map(move |s| (s, d - s)))
        .filter(|&(s, r)| s <= max_power && r <= max_power)
        .find(|&(s, r)| classify_gap(&ClassicalPolynomial::monomial(s, r)) == GapClass::NonCentral)
}
