//! Dense univariate polynomials over the rationals.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{rat_string, Rat};
use super::surd::Surd;

/// Univariate polynomial in `x` with exact rational coefficients, indexed by
/// degree. Trailing zero coefficients are never stored, so the leading
/// coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rat::one())
    }

    /// The variable `x` itself.
    pub fn x() -> Self {
        UniPoly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rat, deg: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        UniPoly::from_coeffs(coeffs)
    }

    /// Builds a polynomial from coefficients indexed by degree.
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Convenience constructor from small integers, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` is the degree of the zero polynomial
    /// (a sentinel, never an ordinary integer).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// Coefficient of `x^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Exact derivative.
    pub fn diff(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_f64(&self, at: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * at + super::rat::rat_to_f64(c);
        }
        acc
    }

    /// Exact evaluation at a quadratic surd.
    pub fn eval_surd(&self, at: &Surd) -> Surd {
        let mut acc = Surd::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + &Surd::from_rat(c.clone());
        }
        acc
    }

    /// Field division: returns `(q, r)` with `self = q*divisor + r` and
    /// `deg r < deg divisor`. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let factor = rem[k].clone() / lead.clone();
            if !factor.is_zero() {
                quot[k - dd] = factor.clone();
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    let delta = c * &factor;
                    rem[k - dd + i] = &rem[k - dd + i] - &delta;
                }
            }
            rem.pop();
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    /// Monic GCD via the Euclidean algorithm; the GCD of two zero
    /// polynomials is zero. Remainders are renormalised to primitive form
    /// each step to keep coefficient growth polynomial.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_pos();
        }
        a.monic()
    }

    /// Scales so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Scales to coprime integer coefficients with the lowest-degree nonzero
    /// coefficient positive. Used as the canonical representative of a
    /// rational-function denominator.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut p = self.primitive_pos();
        let first = p.coeffs.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            p = p.scale(&-Rat::one());
        }
        p
    }

    /// Scales by a positive rational to coprime integer coefficients,
    /// preserving every coefficient sign (safe inside Sturm sequences).
    pub fn primitive_pos(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
        self.scale(&Rat::new(den_lcm, num_gcd))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push('-');
            } else {
                out.push('+');
            }
            let unit_coeff = mag.is_one() && k > 0;
            if !unit_coeff {
                out.push_str(&rat_string(&mag));
            }
            if k >= 1 {
                out.push('x');
            }
            if k >= 2 {
                out.push('^');
                out.push_str(itoa(k).as_str());
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

fn itoa(mut k: usize) -> String {
    if k == 0 {
        return String::from("0");
    }
    let mut digits = Vec::new();
    while k > 0 {
        digits.push(b'0' + (k % 10) as u8);
        k /= 10;
    }
    digits.reverse();
    String::from_utf8(digits).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn degree_sentinel_and_normalization() {
        assert_eq!(UniPoly::zero().degree(), None);
        let p = UniPoly::from_coeffs(vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(UniPoly::x().degree(), Some(1));
    }

    #[test]
    fn div_rem_exact() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let p = UniPoly::from_ints(&[-1, 0, 1]);
        let d = UniPoly::from_ints(&[-1, 1]);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q, UniPoly::from_ints(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_of_coprime_is_constant() {
        let p = UniPoly::from_ints(&[-3, 0, 4]); // 4x^2 - 3
        let q = UniPoly::from_ints(&[0, 1]);
        let g = UniPoly::gcd(&p, &q);
        assert_eq!(g.degree(), Some(0));
    }

    #[test]
    fn display_style() {
        let p = UniPoly::from_ints(&[0, -3, 0, 4]); // 4x^3 - 3x
        assert_eq!(p.to_string(), "4x^3-3x");
        let q = UniPoly::from_ints(&[1, 0, -1]);
        assert_eq!(q.to_string(), "-x^2+1");
        assert_eq!(UniPoly::zero().to_string(), "0");
    }

    #[test]
    fn primitive_canonical_form() {
        let p = UniPoly::from_coeffs(vec![rat(-1, 2), rat(0, 1), rat(-3, 2)]);
        // primitive rescaling keeps first nonzero coefficient positive
        assert_eq!(p.primitive(), UniPoly::from_ints(&[1, 0, 3]));
    }
}
