use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scalar::{ExactComplex, HbarScalar};
use super::word::{Letter, Word};

/// Which adjacent `PQ` pair a rewrite step acts on.
///
/// Every strategy reaches the same canonical form; the choice exists so the
/// confluence of the rewriting system can be tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RewriteStrategy {
    #[default]
    Leftmost,
    Rightmost,
    /// Random word and random pair at every step, reproducible from the seed.
    Seeded(u64),
}

/// Finite sum of words in `q`, `p` with [`HbarScalar`] coefficients.
///
/// Terms are stored in a map keyed by word, so like words are always merged
/// and zero coefficients are dropped. `PartialEq` compares terms
/// structurally; use [`NCPolynomial::op_eq`] for equality as operators.
#[derive(Clone, Debug, Default)]
pub struct NCPolynomial {
    terms: BTreeMap<Word, HbarScalar>,
    canonical: bool,
}

impl PartialEq for NCPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for NCPolynomial {}

impl NCPolynomial {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), canonical: true }
    }

    pub fn one() -> Self {
        Self::scalar(HbarScalar::one())
    }

    pub fn scalar(c: HbarScalar) -> Self {
        Self::term(Word::identity(), c)
    }

    pub fn q() -> Self {
        Self::word(Word::letter(Letter::Q))
    }

    pub fn p() -> Self {
        Self::word(Word::letter(Letter::P))
    }

    pub fn hbar() -> Self {
        Self::scalar(HbarScalar::monomial(super::scalar::exact_int(1), 1))
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, HbarScalar::one())
    }

    pub fn term(w: Word, c: HbarScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(w, &c);
        out
    }

    /// Build from `(word, coefficient)` pairs, merging repeated words.
    pub fn from_terms<I: IntoIterator<Item = (Word, HbarScalar)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, &c);
        }
        out
    }

    fn add_term(&mut self, w: Word, c: &HbarScalar) {
        if c.is_zero() {
            return;
        }
        let canonical_word = w.is_canonical();
        let entry = self.terms.entry(w).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        } else if !canonical_word {
            self.canonical = false;
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &HbarScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> HbarScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every word is of the form `q^a p^b`.
    pub fn is_canonical(&self) -> bool {
        self.canonical || self.terms.keys().all(Word::is_canonical)
    }

    /// Only the empty word occurs, i.e. the polynomial is a multiple of `1`.
    pub fn is_central_scalar(&self) -> bool {
        self.terms.keys().all(Word::is_empty)
    }

    /// Maximum word length; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn scale(&self, c: &HbarScalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, x)| (w.clone(), x * c)))
    }

    pub fn scale_exact(&self, c: &ExactComplex) -> Self {
        self.scale(&HbarScalar::constant(c.clone()))
    }

    /// Formal product: words are concatenated, no rewriting is done.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.multiply(self);
        }
        acc
    }

    /// Formal adjoint: words are reversed and scalars conjugated
    /// (`q`, `p` and ħ are self-adjoint).
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.reversed(), c.conj())))
    }

    pub fn normal_order(&self) -> Self {
        self.normal_order_with(RewriteStrategy::Leftmost)
    }

    /// Rewrite `PQ -> QP - iħ·(pair deleted)` until every word is canonical.
    ///
    /// Pending words are processed from the largest `(length, inversions)`
    /// down. Both rewrite products are strictly smaller in that order, so by
    /// the time a word is taken off the queue every contribution to it has
    /// already been merged and each word is expanded once. The seeded
    /// strategy picks pending words at random instead.
    pub fn normal_order_with(&self, strategy: RewriteStrategy) -> Self {
        if self.is_canonical() {
            let mut out = self.clone();
            out.canonical = true;
            return out;
        }
        let minus_i_hbar = HbarScalar::minus_i_hbar();
        let mut rng = match strategy {
            RewriteStrategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut done = Self::zero();
        let mut pending: BTreeMap<(usize, usize, Word), HbarScalar> = BTreeMap::new();
        let push = |pending: &mut BTreeMap<(usize, usize, Word), HbarScalar>,
                    done: &mut Self,
                    w: Word,
                    c: &HbarScalar| {
            if w.is_canonical() {
                done.add_term(w, c);
            } else {
                let key = (w.len(), w.inversions(), w);
                let entry = pending.entry(key).or_default();
                *entry += c;
            }
        };
        for (w, c) in &self.terms {
            push(&mut pending, &mut done, w.clone(), c);
        }
        loop {
            let next = match rng.as_mut() {
                Some(r) if !pending.is_empty() => {
                    let idx = r.gen_range(0..pending.len());
                    let key = pending.keys().nth(idx).cloned();
                    key.and_then(|k| pending.remove_entry(&k))
                }
                _ => pending.pop_last(),
            };
            let Some(((_, _, w), c)) = next else { break };
            if c.is_zero() {
                continue;
            }
            let positions = w.pq_positions();
            let k = match strategy {
                RewriteStrategy::Leftmost => positions[0],
                RewriteStrategy::Rightmost => positions[positions.len() - 1],
                RewriteStrategy::Seeded(_) => {
                    let r = rng.as_mut().expect("seeded rng");
                    positions[r.gen_range(0..positions.len())]
                }
            };
            let (swapped, deleted) = w.rewrite_at(k);
            push(&mut pending, &mut done, swapped, &c);
            push(&mut pending, &mut done, deleted, &(&c * &minus_i_hbar));
        }
        done.canonical = true;
        done
    }

    /// Equality as operators: the canonical forms coincide.
    pub fn op_eq(&self, other: &Self) -> bool {
        (self - other).normal_order().is_zero()
    }

    /// `normal_order(ab - ba)`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        (&a.multiply(b) - &b.multiply(a)).normal_order()
    }

    pub fn q_pow(n: usize) -> Self {
        Self::word(Word::q_pow(n))
    }

    pub fn p_pow(n: usize) -> Self {
        Self::word(Word::p_pow(n))
    }
}

/// Checks `p^m q^n - q^n p^m = -iħ m Σ_{l<n} q^{n-1-l} p^{m-1} q^l` exactly.
pub fn check_power_identity(m: usize, n: usize) -> bool {
    if m == 0 || n == 0 {
        return false;
    }
    let lhs = NCPolynomial::commutator(&NCPolynomial::p_pow(m), &NCPolynomial::q_pow(n));
    let mut sum = NCPolynomial::zero();
    for l in 0..n {
        let w = Word::q_pow(n - 1 - l).concat(&Word::p_pow(m - 1)).concat(&Word::q_pow(l));
        sum = &sum + &NCPolynomial::word(w);
    }
    let factor = &HbarScalar::minus_i_hbar() * &HbarScalar::from_int(m as i64);
    let rhs = sum.scale(&factor).normal_order();
    lhs == rhs
}

impl Add for &NCPolynomial {
    type Output = NCPolynomial;
    fn add(self, rhs: &NCPolynomial) -> NCPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Add for NCPolynomial {
    type Output = NCPolynomial;
    fn add(self, rhs: NCPolynomial) -> NCPolynomial {
        &self + &rhs
    }
}

impl Neg for &NCPolynomial {
    type Output = NCPolynomial;
    fn neg(self) -> NCPolynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

impl Neg for NCPolynomial {
    type Output = NCPolynomial;
    fn neg(self) -> NCPolynomial {
        -&self
    }
}

impl Sub for &NCPolynomial {
    type Output = NCPolynomial;
    fn sub(self, rhs: &NCPolynomial) -> NCPolynomial {
        self + &(-rhs)
    }
}

impl Sub for NCPolynomial {
    type Output = NCPolynomial;
    fn sub(self, rhs: NCPolynomial) -> NCPolynomial {
        &self - &rhs
    }
}

impl Mul for &NCPolynomial {
    type Output = NCPolynomial;
    fn mul(self, rhs: &NCPolynomial) -> NCPolynomial {
        self.multiply(rhs)
    }
}

impl Mul for NCPolynomial {
    type Output = NCPolynomial;
    fn mul(self, rhs: NCPolynomial) -> NCPolynomial {
        self.multiply(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::super::scalar::{exact_i, exact_int, rational};
    use super::*;
    use Letter::{P, Q};

    fn w(letters: &[Letter]) -> Word {
        Word::from_letters(letters.to_vec())
    }

    #[test]
    fn multiply_examples() {
        let p = NCPolynomial::p();
        let q = NCPolynomial::q();
        assert_eq!(NCPolynomial::one().multiply(&p), p);
        assert_eq!(p.multiply(&q), NCPolynomial::word(w(&[P, Q])));
        let lhs = (&q + &p).multiply(&q);
        let rhs = &NCPolynomial::q_pow(2) + &NCPolynomial::word(w(&[P, Q]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pq_normal_orders_to_qp_minus_i_hbar() {
        let got = NCPolynomial::word(w(&[P, Q])).normal_order();
        let expected = &NCPolynomial::word(w(&[Q, P])) + &NCPolynomial::scalar(HbarScalar::minus_i_hbar());
        assert_eq!(got, expected);
        let qp = NCPolynomial::word(w(&[Q, P]));
        assert_eq!(qp.normal_order(), qp);
    }

    #[test]
    fn ppq_normal_order() {
        let got = NCPolynomial::word(w(&[P, P, Q])).normal_order();
        let two_i_h = HbarScalar::monomial(exact_i() * exact_int(-2), 1);
        let expected = &NCPolynomial::word(w(&[Q, P, P])) + &NCPolynomial::term(w(&[P]), two_i_h);
        assert_eq!(got, expected);
    }

    #[test]
    fn commutator_examples() {
        let p = NCPolynomial::p();
        let q = NCPolynomial::q();
        assert_eq!(NCPolynomial::commutator(&p, &q), NCPolynomial::scalar(HbarScalar::minus_i_hbar()));
        assert!(NCPolynomial::commutator(&p, &p).is_zero());
        let expected = NCPolynomial::term(w(&[P]), HbarScalar::monomial(exact_i() * exact_int(-2), 1));
        assert_eq!(NCPolynomial::commutator(&NCPolynomial::p_pow(2), &q), expected);
    }

    #[test]
    fn power_identity_small_cases() {
        assert!(check_power_identity(1, 1));
        assert!(check_power_identity(2, 1));
        assert!(check_power_identity(3, 3));
        assert!(!check_power_identity(0, 1));
    }

    #[test]
    fn adjoint_of_pq_is_qp() {
        let pq = NCPolynomial::word(w(&[P, Q]));
        assert_eq!(pq.adjoint(), NCPolynomial::word(w(&[Q, P])));
        let ih = NCPolynomial::scalar(HbarScalar::monomial(exact_i(), 1));
        assert_eq!(ih.adjoint(), -&ih);
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = NCPolynomial::term(w(&[Q]), HbarScalar::from_rational(rational(1, 2)));
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).num_terms(), 0);
    }
}
