//! Quadratic surds `a + b·√d` with exact sign decisions.
//!
//! Critical points of the family systems have coordinates that are either
//! rational or quadratic over the rationals (roots of a quadratic with
//! rational coefficients). Representing them exactly keeps every saddle/node
//! decision a sign test on rationals instead of a float comparison.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rat::{rat_string, rat_to_f64, Rat};

/// The exact value `a + b·√d` with `a, b, d` rational and `d ≥ 0`.
/// Normalised so that a rational value always has `b = 0, d = 0`
/// (perfect-square radicands are folded into `a`).
#[derive(Clone, PartialEq, Eq)]
pub struct Surd {
    a: Rat,
    b: Rat,
    d: Rat,
}

/// Exact square root of a nonnegative rational if it is a perfect square.
fn exact_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rat::new(ns, ds))
    } else {
        None
    }
}

impl Surd {
    pub fn zero() -> Self {
        Surd::from_rat(Rat::zero())
    }

    pub fn from_rat(a: Rat) -> Self {
        Surd { a, b: Rat::zero(), d: Rat::zero() }
    }

    pub fn from_i64(a: i64) -> Self {
        Surd::from_rat(Rat::from_integer(BigInt::from(a)))
    }

    /// Builds `a + b·√d`. Panics if `d < 0`; normalises perfect squares.
    pub fn new(a: Rat, b: Rat, d: Rat) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        if b.is_zero() || d.is_zero() {
            return Surd::from_rat(a);
        }
        if let Some(s) = exact_sqrt(&d) {
            return Surd::from_rat(a + b * s);
        }
        Surd { a, b, d }
    }

    /// `√r` for `r ≥ 0`, exact when `r` is a perfect square.
    pub fn sqrt_of_rat(r: &Rat) -> Option<Surd> {
        if r.is_negative() {
            return None;
        }
        Some(Surd::new(Rat::zero(), Rat::from_integer(BigInt::from(1)), r.clone()))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Whether the two values live in a common quadratic field (arithmetic
    /// between them is defined).
    pub fn compatible(&self, other: &Surd) -> bool {
        self.b.is_zero() || other.b.is_zero() || self.d == other.d
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_zero_value(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Radicands must agree (or one side be rational) for arithmetic.
    fn same_field(&self, rhs: &Surd) -> Rat {
        if self.b.is_zero() {
            rhs.d.clone()
        } else if rhs.b.is_zero() {
            self.d.clone()
        } else {
            assert_eq!(self.d, rhs.d, "incompatible radicands");
            self.d.clone()
        }
    }

    pub fn scale(&self, c: &Rat) -> Surd {
        Surd::new(&self.a * c, &self.b * c, self.d.clone())
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.b.is_zero() {
            return rat_sign(&self.a);
        }
        if self.a.is_zero() {
            return rat_sign(&self.b);
        }
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sa == sb {
            return sa;
        }
        // a and b·√d have opposite signs: compare a² against b²·d.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &self.d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * libm::sqrt(rat_to_f64(&self.d))
    }
}

fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let d = self.same_field(rhs);
        Surd::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let d = self.same_field(rhs);
        Surd::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let d = self.same_field(rhs);
        // (a + b√d)(a' + b'√d) = aa' + bb'd + (ab' + a'b)√d
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Surd::new(a, b, d)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", rat_string(&self.a));
        }
        let mut out = String::new();
        if !self.a.is_zero() {
            out.push_str(&rat_string(&self.a));
            if self.b.is_positive() {
                out.push('+');
            }
        }
        if self.b == Rat::from_integer(BigInt::from(-1)) {
            out.push('-');
        } else if self.b != Rat::from_integer(BigInt::from(1)) {
            out.push_str(&rat_string(&self.b));
            out.push('*');
        }
        out.push_str("sqrt(");
        out.push_str(&rat_string(&self.d));
        out.push(')');
        write!(f, "{out}")
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

/// Real roots of `a·t + b = 0` over the rationals.
pub fn solve_linear_rat(a: &Rat, b: &Rat) -> Vec<Surd> {
    if a.is_zero() {
        return Vec::new();
    }
    alloc::vec![Surd::from_rat(-(b / a))]
}

/// Real roots of `a·t² + b·t + c = 0` with rational coefficients, as exact
/// surds, ascending. Degenerates to the linear case when `a = 0`.
pub fn solve_quadratic_rat(a: &Rat, b: &Rat, c: &Rat) -> Vec<Surd> {
    if a.is_zero() {
        return solve_linear_rat(b, c);
    }
    let disc = b * b - Rat::from_integer(BigInt::from(4)) * a * c;
    if disc.is_negative() {
        return Vec::new();
    }
    let two_a = Rat::from_integer(BigInt::from(2)) * a;
    let mid = -(b / &two_a);
    if disc.is_zero() {
        return alloc::vec![Surd::from_rat(mid)];
    }
    let half = Rat::from_integer(BigInt::from(1)) / &two_a;
    let r1 = Surd::new(mid.clone(), -half.abs(), disc.clone());
    let r2 = Surd::new(mid, half.abs(), disc);
    alloc::vec![r1, r2]
}
