use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ncalg::scalar::exact_int;
use crate::ncalg::text::{coeff_parts, letter_counts};
use crate::ncalg::{parse_polynomial, HbarScalar};

/// `coeff · p^s q^r` with commuting `p`, `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalMonomial {
    pub s: usize,
    pub r: usize,
    pub coeff: HbarScalar,
}

impl ClassicalMonomial {
    /// Unit-coefficient `p^s q^r`.
    pub fn new(s: usize, r: usize) -> Self {
        Self { s, r, coeff: HbarScalar::one() }
    }

    pub fn with_coeff(s: usize, r: usize, coeff: HbarScalar) -> Self {
        Self { s, r, coeff }
    }

    pub fn degree(&self) -> usize {
        self.s + self.r
    }
}

/// Finite sum of classical monomials keyed by `(s, r)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassicalPolynomial {
    terms: BTreeMap<(usize, usize), HbarScalar>,
}

impl ClassicalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(s: usize, r: usize) -> Self {
        Self::from_monomials([ClassicalMonomial::new(s, r)])
    }

    pub fn from_monomials<I: IntoIterator<Item = ClassicalMonomial>>(items: I) -> Self {
        let mut out = Self::zero();
        for m in items {
            out.add_monomial(m.s, m.r, &m.coeff);
        }
        out
    }

    fn add_monomial(&mut self, s: usize, r: usize, c: &HbarScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((s, r)).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(s, r));
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = ClassicalMonomial> + '_ {
        self.terms.iter().map(|(&(s, r), c)| ClassicalMonomial::with_coeff(s, r, c.clone()))
    }

    pub fn coeff(&self, s: usize, r: usize) -> HbarScalar {
        self.terms.get(&(s, r)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|(s, r)| s + r).max()
    }

    pub fn scale(&self, c: &HbarScalar) -> Self {
        Self::from_monomials(self.monomials().map(|m| ClassicalMonomial::with_coeff(m.s, m.r, &m.coeff * c)))
    }

    /// True when some monomial has `s >= 2` and `r >= 2`.
    pub fn has_mixed_quadratic_term(&self) -> bool {
        self.terms.keys().any(|&(s, r)| s >= 2 && r >= 2)
    }

    /// `∂/∂p`.
    pub fn d_dp(&self) -> Self {
        Self::from_monomials(self.monomials().filter(|m| m.s > 0).map(|m| {
            let c = m.coeff.scale(&exact_int(m.s as i64));
            ClassicalMonomial::with_coeff(m.s - 1, m.r, c)
        }))
    }

    /// `∂/∂q`.
    pub fn d_dq(&self) -> Self {
        Self::from_monomials(self.monomials().filter(|m| m.r > 0).map(|m| {
            let c = m.coeff.scale(&exact_int(m.r as i64));
            ClassicalMonomial::with_coeff(m.s, m.r - 1, c)
        }))
    }

    /// Value at `(q, p)` with ħ set to `hbar`.
    pub fn eval(&self, q: f64, p: f64, hbar: f64) -> Complex64 {
        self.terms.iter().map(|(&(s, r), c)| c.evaluate(hbar) * p.powi(s as i32) * q.powi(r as i32)).sum()
    }

    /// Parse expressions such as `3/2*p^2*q^2 - q^4`; `q` and `p` commute.
    pub fn parse(input: &str) -> Result<Self> {
        let nc = parse_polynomial(input)?;
        let mut out = Self::zero();
        for (w, c) in nc.terms() {
            let (s, r) = letter_counts(w);
            out.add_monomial(s, r, c);
        }
        Ok(out)
    }
}

impl FromStr for ClassicalPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ClassicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .flat_map(|(&(s, r), c)| c.iter_terms().map(move |(k, x)| (s, r, k, x.clone())))
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by_key(|&(s, r, k, _)| (Reverse(s + r), Reverse(s), k));
        for (idx, (s, r, k, c)) in terms.iter().enumerate() {
            let (neg, mag, imag) = coeff_parts(c);
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = mag.into_iter().collect();
            if imag {
                factors.push("i".into());
            }
            for (sym, n) in [("h", *k), ("p", *s), ("q", *r)] {
                match n {
                    0 => {}
                    1 => factors.push(sym.into()),
                    n => factors.push(format!("{sym}^{n}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &ClassicalPolynomial {
    type Output = ClassicalPolynomial;
    fn add(self, rhs: &ClassicalPolynomial) -> ClassicalPolynomial {
        let mut out = self.clone();
        for m in rhs.monomials() {
            out.add_monomial(m.s, m.r, &m.coeff);
        }
        out
    }
}

impl Sub for &ClassicalPolynomial {
    type Output = ClassicalPolynomial;
    fn sub(self, rhs: &ClassicalPolynomial) -> ClassicalPolynomial {
        self + &rhs.scale(&HbarScalar::from_int(-1))
    }
}
