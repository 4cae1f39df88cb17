//! Text form of [`NCPolynomial`].
//!
//! Printing emits one term per `(word, ħ power)` pair, longest words first and
//! then increasing powers of ħ, e.g. `q^2 p^2 - 2*i*h*q p - 2/3*h^2`. Letters
//! of a word are separated by spaces; the coefficient, `i`, `h^k` and the word
//! are joined by `*`. Coefficients with both real and imaginary parts are
//! printed as `(a + b*i)`.
//!
//! The parser accepts that output and a little more: `*` may be replaced by
//! whitespace, `/` divides by a constant, `^` raises any factor to a
//! non-negative integer power, numbers may be decimal, and parentheses group.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::NCPolynomial;
use super::scalar::{exact_i, exact_real, ExactComplex, HbarScalar};
use super::word::{Letter, Word};
use crate::error::{Error, Result};

const MAX_EXPONENT: u64 = 64;

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Splits a coefficient into `(negative, magnitude, imaginary)`. The magnitude
/// is `None` when it is exactly 1; `imaginary` asks for an `i` factor.
pub fn coeff_parts(c: &ExactComplex) -> (bool, Option<String>, bool) {
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let mag = c.re.abs();
        let text = (!mag.is_one()).then(|| fmt_rational(&mag));
        (neg, text, false)
    } else if c.re.is_zero() {
        let neg = c.im.is_negative();
        let mag = c.im.abs();
        let text = (!mag.is_one()).then(|| fmt_rational(&mag));
        (neg, text, true)
    } else {
        let sign = if c.im.is_negative() { '-' } else { '+' };
        let text = format!("({} {} {}*i)", fmt_rational(&c.re), sign, fmt_rational(&c.im.abs()));
        (false, Some(text), false)
    }
}

/// Terms in print order: `(word, ħ power, coefficient)`.
pub fn ordered_terms(poly: &NCPolynomial) -> Vec<(Word, usize, ExactComplex)> {
    let mut out: Vec<(Word, usize, ExactComplex)> =
        poly.terms().flat_map(|(w, s)| s.iter_terms().map(move |(k, c)| (w.clone(), k, c.clone()))).collect();
    out.sort_by(|a, b| (Reverse(a.0.len()), &a.0, a.1).cmp(&(Reverse(b.0.len()), &b.0, b.1)));
    out
}

impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = ordered_terms(self);
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (word, power, c)) in terms.iter().enumerate() {
            let (neg, mag, imag) = coeff_parts(c);
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if let Some(m) = mag {
                factors.push(m);
            }
            if imag {
                factors.push("i".into());
            }
            match power {
                0 => {}
                1 => factors.push("h".into()),
                k => factors.push(format!("h^{k}")),
            }
            if !word.is_empty() {
                factors.push(word.to_string());
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for NCPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

/// Parse the text form. The result keeps the word order as written; call
/// [`NCPolynomial::normal_order`] for the canonical form.
pub fn parse_polynomial(input: &str) -> Result<NCPolynomial> {
    let mut parser = Parser { src: input.as_bytes(), pos: 0 };
    parser.skip_ws();
    if parser.peek().is_none() {
        return Err(parser.error("empty expression"));
    }
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.peek().is_some() {
        return Err(parser.error("unexpected character"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("{msg} (found '{}')", c as char),
            None => format!("{msg} (at end of input)"),
        };
        Error::Parse { pos: self.pos, msg: found }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn starts_factor(c: u8) -> bool {
        c.is_ascii_digit() || c == b'.' || c == b'(' || matches!(c, b'q' | b'p' | b'h' | b'i')
    }

    fn expr(&mut self) -> Result<NCPolynomial> {
        self.skip_ws();
        let mut negate = false;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            negate = c == b'-';
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NCPolynomial> {
        self.skip_ws();
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.skip_ws();
                    acc = acc.multiply(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.factor()?;
                    let c = constant_of(&d)
                        .ok_or(Error::Parse { pos: at, msg: "divisor must be a nonzero constant".into() })?;
                    acc = acc.scale_exact(&(exact_real(BigRational::one()) / c));
                }
                Some(c) if Self::starts_factor(c) => {
                    acc = acc.multiply(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<NCPolynomial> {
        let base = self.primary()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let n = self.integer()?;
            if n > MAX_EXPONENT {
                return Err(Error::Parse { pos: at, msg: format!("exponent {n} exceeds {MAX_EXPONENT}") });
            }
            return Ok(base.pow(n as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<NCPolynomial> {
        self.skip_ws();
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(NCPolynomial::q())
            }
            Some(b'p') => {
                self.pos += 1;
                Ok(NCPolynomial::p())
            }
            Some(b'h') => {
                self.pos += 1;
                Ok(NCPolynomial::hbar())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(NCPolynomial::scalar(HbarScalar::constant(exact_i())))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let r = self.number()?;
                Ok(NCPolynomial::scalar(HbarScalar::from_rational(r)))
            }
            _ => Err(self.error("expected a number, q, p, h, i or '('")),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a non-negative integer exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Parse { pos: start, msg: "exponent out of range".into() })
    }

    fn number(&mut self) -> Result<BigRational> {
        let start = self.pos;
        let mut digits = String::new();
        let mut frac_len = 0u32;
        let mut seen_dot = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c as char);
                if seen_dot {
                    frac_len += 1;
                }
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(Error::Parse { pos: start, msg: "malformed number".into() });
        }
        let numer: BigInt = digits.parse().expect("ascii digits");
        let denom = num_traits::pow(BigInt::from(10), frac_len as usize);
        Ok(BigRational::new(numer, denom))
    }
}

/// The value of a polynomial that is a nonzero ħ-free multiple of `1`.
fn constant_of(poly: &NCPolynomial) -> Option<ExactComplex> {
    if !poly.is_central_scalar() || poly.num_terms() != 1 {
        return None;
    }
    let s = poly.coeff(&Word::identity());
    (s.degree() == Some(0)).then(|| s.coeff(0))
}

/// `(number of P, number of Q)` of a word, used to read classical monomials.
pub fn letter_counts(w: &Word) -> (usize, usize) {
    (w.count(Letter::P), w.count(Letter::Q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::scalar::{exact_int, rational};

    fn parse(s: &str) -> NCPolynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn prints_canonical_examples() {
        let bj = parse("q^2 p^2 - 2*i*h*q p - 2/3*h^2");
        assert_eq!(bj.to_string(), "q^2 p^2 - 2*i*h*q p - 2/3*h^2");
        assert_eq!(parse("-1/6*h^2").to_string(), "-1/6*h^2");
        assert_eq!(parse("q p^2 - i*h*p").to_string(), "q p^2 - i*h*p");
        assert_eq!(NCPolynomial::zero().to_string(), "0");
        assert_eq!(NCPolynomial::one().to_string(), "1");
    }

    #[test]
    fn mixed_complex_coefficient() {
        let c = ExactComplex::new(rational(1, 2), rational(-3, 1));
        let poly = NCPolynomial::scalar(HbarScalar::monomial(c, 1));
        assert_eq!(poly.to_string(), "(1/2 - 3*i)*h");
        assert_eq!(parse(&poly.to_string()), poly);
    }

    #[test]
    fn implicit_multiplication_keeps_word_order() {
        let pq = parse("p q");
        assert_eq!(pq, parse("p*q"));
        assert!(!pq.is_canonical());
        assert_eq!(pq.normal_order().to_string(), "q p - i*h");
    }

    #[test]
    fn division_and_decimals() {
        assert_eq!(parse("3/2*p^2"), parse("1.5 p^2"));
        assert_eq!(parse("q/4"), parse("0.25*q"));
        assert_eq!(parse("(q + p)^2").normal_order(), parse("q^2 + 2 q p + p^2 - i*h"));
        let two = NCPolynomial::scalar(HbarScalar::constant(exact_int(2)));
        assert_eq!(parse("4/(1+1)"), two);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_polynomial("q + * p") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_polynomial("q / p"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_polynomial("q / 0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("(q"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_polynomial("q^100"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("x"), Err(Error::Parse { pos: 0, .. })));
    }
}
