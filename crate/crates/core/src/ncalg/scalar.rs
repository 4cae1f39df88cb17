use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact complex rational number.
pub type ExactComplex = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn exact_real(r: BigRational) -> ExactComplex {
    Complex::new(r, BigRational::zero())
}

pub fn exact_int(n: i64) -> ExactComplex {
    exact_real(BigRational::from_integer(BigInt::from(n)))
}

pub fn exact_i() -> ExactComplex {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

pub fn exact_to_c64(z: &ExactComplex) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

/// Polynomial in ħ with exact complex rational coefficients.
///
/// `coeffs[k]` multiplies `ħ^k`. Trailing zero coefficients are never stored,
/// so the zero scalar is the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct HbarScalar {
    coeffs: Vec<ExactComplex>,
}

impl HbarScalar {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(exact_int(1))
    }

    pub fn constant(c: ExactComplex) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(exact_int(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::constant(exact_real(r))
    }

    /// `c · ħ^power`.
    pub fn monomial(c: ExactComplex, power: usize) -> Self {
        let mut coeffs = vec![ExactComplex::zero(); power];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    /// `-iħ`, the right-hand side of `pq - qp`.
    pub fn minus_i_hbar() -> Self {
        Self::monomial(-exact_i(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<ExactComplex>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[ExactComplex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power of ħ present, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power of ħ with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, power: usize) -> ExactComplex {
        self.coeffs.get(power).cloned().unwrap_or_else(ExactComplex::zero)
    }

    /// Nonzero `(power, coefficient)` pairs in increasing power.
    pub fn iter_terms(&self) -> impl Iterator<Item = (usize, &ExactComplex)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn conj(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im.is_zero())
    }

    pub fn evaluate(&self, hbar: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * hbar + exact_to_c64(c);
        }
        acc
    }
}

impl fmt::Debug for HbarScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HbarScalar[")?;
        for (k, c) in self.iter_terms() {
            write!(f, " ({} + {}i)h^{}", c.re, c.im, k)?;
        }
        write!(f, " ]")
    }
}

impl Add for &HbarScalar {
    type Output = HbarScalar;
    fn add(self, rhs: &HbarScalar) -> HbarScalar {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        HbarScalar::from_coeffs(coeffs)
    }
}

impl Add for HbarScalar {
    type Output = HbarScalar;
    fn add(self, rhs: HbarScalar) -> HbarScalar {
        &self + &rhs
    }
}

impl AddAssign<&HbarScalar> for HbarScalar {
    fn add_assign(&mut self, rhs: &HbarScalar) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), ExactComplex::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = &*a + b;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl Neg for &HbarScalar {
    type Output = HbarScalar;
    fn neg(self) -> HbarScalar {
        HbarScalar::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Neg for HbarScalar {
    type Output = HbarScalar;
    fn neg(self) -> HbarScalar {
        -&self
    }
}

impl Sub for &HbarScalar {
    type Output = HbarScalar;
    fn sub(self, rhs: &HbarScalar) -> HbarScalar {
        self + &(-rhs)
    }
}

impl Sub for HbarScalar {
    type Output = HbarScalar;
    fn sub(self, rhs: HbarScalar) -> HbarScalar {
        &self - &rhs
    }
}

impl Mul for &HbarScalar {
    type Output = HbarScalar;
    fn mul(self, rhs: &HbarScalar) -> HbarScalar {
        if self.is_zero() || rhs.is_zero() {
            return HbarScalar::zero();
        }
        let mut coeffs = vec![ExactComplex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + a * b;
            }
        }
        HbarScalar::from_coeffs(coeffs)
    }
}

impl Mul for HbarScalar {
    type Output = HbarScalar;
    fn mul(self, rhs: HbarScalar) -> HbarScalar {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_are_trimmed() {
        let s = HbarScalar::from_coeffs(vec![exact_int(2), exact_int(0), exact_int(0)]);
        assert_eq!(s, HbarScalar::from_int(2));
        assert_eq!(s.degree(), Some(0));
        assert!(HbarScalar::from_coeffs(vec![exact_int(0)]).is_zero());
    }

    #[test]
    fn minus_i_hbar_squared_is_minus_hbar_squared() {
        let a = HbarScalar::minus_i_hbar();
        let sq = &a * &a;
        assert_eq!(sq, HbarScalar::monomial(exact_int(-1), 2));
        assert_eq!(sq.evaluate(0.5), Complex64::new(-0.25, 0.0));
    }

    #[test]
    fn add_cancels_exactly() {
        let third = HbarScalar::from_rational(rational(1, 3));
        let sum = &(&third + &third) + &third;
        assert_eq!(sum, HbarScalar::one());
        assert!((&third - &third).is_zero());
    }
}
