//! Sparse bivariate polynomials in `(v, x)` over the rationals.
//!
//! The family systems have at most a handful of terms, so a sorted map from
//! exponent pairs to coefficients keeps cofactor products readable in debug
//! output and makes iteration order (hence every printed artifact)
//! deterministic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{rat_string, rat_to_f64, Rat};
use super::surd::Surd;
use super::unipoly::UniPoly;

/// The two variables of a [`BiPoly`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    V,
    X,
}

/// Bivariate polynomial; keys are `(degree in v, degree in x)` and zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        BiPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn var(var: Var) -> Self {
        match var {
            Var::V => BiPoly::monomial(Rat::one(), 1, 0),
            Var::X => BiPoly::monomial(Rat::one(), 0, 1),
        }
    }

    pub fn monomial(c: Rat, v_deg: u32, x_deg: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((v_deg, x_deg), c);
        }
        BiPoly { terms }
    }

    /// Embeds a univariate polynomial in the `x` slot.
    pub fn from_unipoly_x(p: &UniPoly) -> Self {
        let mut out = BiPoly::zero();
        for (j, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert((0, j as u32), c.clone());
            }
        }
        out
    }

    /// Embeds a univariate polynomial in the `v` slot.
    pub fn from_unipoly_v(p: &UniPoly) -> Self {
        let mut out = BiPoly::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert((i as u32, 0), c.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v_deg: u32, x_deg: u32) -> Rat {
        self.terms.get(&(v_deg, x_deg)).cloned().unwrap_or_else(Rat::zero)
    }

    fn insert_add(&mut self, key: (u32, u32), c: Rat) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn deg_in(&self, var: Var) -> Option<u32> {
        match var {
            Var::V => self.terms.keys().map(|&(i, _)| i).max(),
            Var::X => self.terms.keys().map(|&(_, j)| j).max(),
        }
    }

    pub fn scale(&self, c: &Rat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> BiPoly {
        let mut acc = BiPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative.
    pub fn diff(&self, var: Var) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            match var {
                Var::V if i > 0 => out.insert_add((i - 1, j), c * Rat::from_integer(i.into())),
                Var::X if j > 0 => out.insert_add((i, j - 1), c * Rat::from_integer(j.into())),
                _ => {}
            }
        }
        out
    }

    pub fn eval_rat(&self, v: &Rat, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..i {
                term *= v;
            }
            for _ in 0..j {
                term *= x;
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, v: f64, x: f64) -> f64 {
        let mut acc = 0.0;
        for (&(i, j), c) in &self.terms {
            acc += rat_to_f64(c) * powi(v, i) * powi(x, j);
        }
        acc
    }

    /// Exact evaluation with both coordinates in the same quadratic field.
    pub fn eval_surd(&self, v: &Surd, x: &Surd) -> Surd {
        let mut acc = Surd::zero();
        for (&(i, j), c) in &self.terms {
            let mut term = Surd::from_rat(c.clone());
            for _ in 0..i {
                term = &term * v;
            }
            for _ in 0..j {
                term = &term * x;
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Collects the coefficient of `v^i` as a univariate polynomial in `x`.
    pub fn coeff_of_v_power(&self, v_deg: u32) -> UniPoly {
        let mut coeffs: Vec<Rat> = Vec::new();
        for (&(i, j), c) in &self.terms {
            if i == v_deg {
                let j = j as usize;
                if coeffs.len() <= j {
                    coeffs.resize(j + 1, Rat::zero());
                }
                coeffs[j] = c.clone();
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// The polynomial as univariate in `x`, if it does not involve `v`.
    pub fn as_unipoly_in_x(&self) -> Option<UniPoly> {
        if self.deg_in(Var::V).unwrap_or(0) > 0 {
            return None;
        }
        Some(self.coeff_of_v_power(0))
    }

    /// Terms of exact total degree `m`.
    pub fn homogeneous_part(&self, m: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == m)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// General polynomial substitution `self(sub_v, sub_x)`.
    pub fn substitute(&self, sub_v: &BiPoly, sub_x: &BiPoly) -> BiPoly {
        let max_i = self.deg_in(Var::V).unwrap_or(0) as usize;
        let max_j = self.deg_in(Var::X).unwrap_or(0) as usize;
        let mut pow_v = Vec::with_capacity(max_i + 1);
        let mut pow_x = Vec::with_capacity(max_j + 1);
        pow_v.push(BiPoly::one());
        pow_x.push(BiPoly::one());
        for i in 1..=max_i {
            let next = &pow_v[i - 1] * sub_v;
            pow_v.push(next);
        }
        for j in 1..=max_j {
            let next = &pow_x[j - 1] * sub_x;
            pow_x.push(next);
        }
        let mut acc = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let term = &pow_v[i as usize] * &pow_x[j as usize];
            acc = &acc + &term.scale(c);
        }
        acc
    }

    /// Substitutes `v -> v + v0`, `x -> x + x0`.
    pub fn translate(&self, v0: &Rat, x0: &Rat) -> BiPoly {
        let sv = &BiPoly::var(Var::V) + &BiPoly::constant(v0.clone());
        let sx = &BiPoly::var(Var::X) + &BiPoly::constant(x0.clone());
        self.substitute(&sv, &sx)
    }

    /// Substitutes `(v, x) = M·(v', x')` for a 2×2 rational matrix `M`.
    pub fn linear_change(&self, m: &[[Rat; 2]; 2]) -> BiPoly {
        let sv = &BiPoly::monomial(m[0][0].clone(), 1, 0) + &BiPoly::monomial(m[0][1].clone(), 0, 1);
        let sx = &BiPoly::monomial(m[1][0].clone(), 1, 0) + &BiPoly::monomial(m[1][1].clone(), 0, 1);
        self.substitute(&sv, &sx)
    }

    fn leading_lex(&self) -> Option<(&(u32, u32), &Rat)> {
        self.terms.iter().next_back()
    }

    /// Division with remainder by a single divisor in the lex order `v > x`.
    /// Returns `(q, r)` with `self = q·divisor + r` where no monomial of `r`
    /// is divisible by the leading monomial of `divisor`.
    pub fn div_rem_lex(&self, divisor: &BiPoly) -> (BiPoly, BiPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (&(di, dj), dc) = divisor.leading_lex().unwrap();
        let dc = dc.clone();
        let mut work = self.clone();
        let mut quot = BiPoly::zero();
        let mut rem = BiPoly::zero();
        while let Some((&(i, j), c)) = work.leading_lex() {
            if i >= di && j >= dj {
                let factor = BiPoly::monomial(c / &dc, i - di, j - dj);
                let sub = &factor * divisor;
                work = &work - &sub;
                quot = &quot + &factor;
            } else {
                let lead = BiPoly::monomial(c.clone(), i, j);
                work = &work - &lead;
                rem = &rem + &lead;
            }
        }
        (quot, rem)
    }

    /// Exact quotient `self / f` if `f` divides `self`, else `None`.
    /// For a single divisor, lex division is a complete divisibility test.
    pub fn divide_exact(&self, f: &BiPoly) -> Option<BiPoly> {
        let (q, r) = self.div_rem_lex(f);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

fn powi(base: f64, exp: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.insert_add(k, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&k, c)
        in &rhs.terms {
            out.insert_add(k, -c);
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.insert_add((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // total degree descending, then v-degree descending
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by_key(|k| core::cmp::Reverse((k.0 + k.1, k.0)));
        let mut out = String::new();
        for (i, j) in keys {
            let c = &self.terms[&(i, j)];
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
            let has_var = i > 0 || j > 0;
            if !(mag.is_one() && has_var) {
                out.push_str(&rat_string(&mag));
            }
            push_var(&mut out, 'v', i);
            push_var(&mut out, 'x', j);
        }
        write!(f, "{out}")
    }
}

fn push_var(out: &mut String, name: char, exp: u32) {
    if exp == 0 {
        return;
    }
    out.push(name);
    if exp > 1 {
        out.push('^');
        let mut digits = alloc::vec::Vec::new();
        let mut e = exp;
        while e > 0 {
            digits.push(b'0' + (e % 10) as u8);
            e /= 10;
        }
        digits.reverse();
        out.push_str(core::str::from_utf8(&digits).unwrap());
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}
