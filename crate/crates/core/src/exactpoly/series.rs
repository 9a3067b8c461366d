//! Truncated formal power series in one variable over the rationals.
//!
//! These carry the local expansions `y = f(x) = aₘxᵐ + o(xᵐ)` consumed by the
//! semi-hyperbolic and nilpotent classification procedures. Arithmetic on two
//! series truncated at order N yields a series truncated at N; coefficients
//! beyond the truncation order are never reported.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::bipoly::{BiPoly, Var};
use super::rat::Rat;

/// Default truncation order for classification series.
pub const DEFAULT_SERIES_ORDER: usize = 12;
/// Hard ceiling before a classification reports itself inconclusive.
pub const MAX_SERIES_ORDER: usize = 24;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SeriesError {
    /// A leading-term query could not be decided at the current truncation.
    TruncationTooLow,
    /// The implicit equation's perturbation carries constant or linear terms.
    PreconditionViolated(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::TruncationTooLow => write!(f, "series truncation order too low"),
            SeriesError::PreconditionViolated(msg) => write!(f, "series precondition violated: {msg}"),
        }
    }
}

/// Power series truncated at `trunc`: coefficients for orders `0..=trunc`.
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries1 {
    coeffs: Vec<Rat>,
    trunc: usize,
}

impl PowerSeries1 {
    pub fn zero(trunc: usize) -> Self {
        PowerSeries1 { coeffs: vec![Rat::zero(); trunc + 1], trunc }
    }

    /// Builds from coefficients indexed by power, padding or cutting to the
    /// truncation order.
    pub fn from_coeffs(mut coeffs: Vec<Rat>, trunc: usize) -> Self {
        coeffs.resize(trunc + 1, Rat::zero());
        PowerSeries1 { coeffs, trunc }
    }

    pub fn monomial(c: Rat, power: usize, trunc: usize) -> Self {
        let mut s = PowerSeries1::zero(trunc);
        if power <= trunc {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// First nonzero coefficient as `(order, coefficient)`.
    pub fn leading_term(&self) -> Option<(usize, &Rat)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    /// Leading term, or `TruncationTooLow` when the series vanishes through
    /// its truncation order (so the extraction is not decidable at this N).
    pub fn leading_term_checked(&self) -> Result<(usize, &Rat), SeriesError> {
        self.leading_term().ok_or(SeriesError::TruncationTooLow)
    }

    pub fn add(&self, rhs: &PowerSeries1) -> PowerSeries1 {
        let trunc = self.trunc.min(rhs.trunc);
        let mut coeffs = Vec::with_capacity(trunc + 1);
        for k in 0..=trunc {
            coeffs.push(&self.coeffs[k] + &rhs.coeffs[k]);
        }
        PowerSeries1 { coeffs, trunc }
    }

    pub fn scale(&self, c: &Rat) -> PowerSeries1 {
        PowerSeries1 { coeffs: self.coeffs.iter().map(|a| a * c).collect(), trunc: self.trunc }
    }

    pub fn mul(&self, rhs: &PowerSeries1) -> PowerSeries1 {
        let trunc = self.trunc.min(rhs.trunc);
        let mut coeffs = vec![Rat::zero(); trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(trunc + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        PowerSeries1 { coeffs, trunc }
    }

    pub fn pow(&self, n: usize) -> PowerSeries1 {
        let mut acc = PowerSeries1::monomial(num_traits::One::one(), 0, self.trunc);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Debug for PowerSeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " {c}·s^{k}")?;
            }
        }
        write!(f, " + O(s^{})]", self.trunc + 1)
    }
}

/// Substitutes `inner` into the chosen slot of `outer`, the remaining slot
/// becoming the series variable. The result is exact up to the truncation
/// order of `inner`.
pub fn compose_series(outer: &BiPoly, inner: &PowerSeries1, into: Var) -> PowerSeries1 {
    let trunc = inner.truncation_order();
    let max_pow = match into {
        Var::X => outer.deg_in(Var::X).unwrap_or(0),
        Var::V => outer.deg_in(Var::V).unwrap_or(0),
    } as usize;
    let mut powers = Vec::with_capacity(max_pow + 1);
    powers.push(PowerSeries1::monomial(num_traits::One::one(), 0, trunc));
    for k in 1..=max_pow {
        let next = powers[k - 1].mul(inner);
        powers.push(next);
    }
    let mut acc = PowerSeries1::zero(trunc);
    for (&(i, j), c) in outer.terms() {
        let (s_exp, inner_pow) = match into {
            Var::X => (i as usize, j as usize),
            Var::V => (j as usize, i as usize),
        };
        if s_exp > trunc {
            continue;
        }
        let term = powers[inner_pow].clone();
        for (k, a) in term.coeffs.iter().enumerate() {
            if k + s_exp > trunc || a.is_zero() {
                continue;
            }
            acc.coeffs[k + s_exp] = &acc.coeffs[k + s_exp] + &(a * c);
        }
    }
    acc
}

/// Solves `lin·f(s) + b(s, f(s)) = 0` for the unique formal series `f` with
/// `f(0) = 0`, by undetermined coefficients, exact mod `s^(trunc+1)`.
///
/// The `v` slot of `b` carries the series variable `s`; the `x` slot carries
/// the unknown `f`. Requires `lin ≠ 0` and that `b` has no constant or
/// linear terms.
pub fn solve_implicit_series(lin: &Rat, b: &BiPoly, trunc: usize) -> Result<PowerSeries1, SeriesError> {
    if lin.is_zero() {
        return Err(SeriesError::PreconditionViolated(String::from("linear coefficient is zero")));
    }
    for (&(i, j), _) in b.terms() {
        if i + j < 2 {
            return Err(SeriesError::PreconditionViolated(String::from(
                "perturbation has constant or linear terms",
            )));
        }
    }
    let mut f = PowerSeries1::zero(trunc);
    for k in 1..=trunc {
        // b(s, f) of order k depends only on f-coefficients below k.
        let g = compose_series(b, &f, Var::X);
        let correction = -(&g.coeffs[k] / lin);
        f.coeffs[k] = correction;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, rat_i};

    #[test]
    fn implicit_jacobi_type_center_manifold() {
        // lin = -2, perturbation -s²: f = -½s² (the translated system of the
        // ρ = 1-x² family at its semi-hyperbolic point)
        let b = BiPoly::monomial(rat_i(-1), 2, 0);
        let f = solve_implicit_series(&rat_i(-2), &b, 8).unwrap();
        assert_eq!(f.leading_term(), Some((2, &rat(-1, 2))));
        for k in 3..=8 {
            assert!(f.coeff(k).is_zero());
        }
    }

    #[test]
    fn implicit_trivial_cases() {
        // lin = 1, b = 0 -> f ≡ 0
        let f = solve_implicit_series(&rat_i(1), &BiPoly::zero(), 6).unwrap();
        assert!(f.is_zero());
        // lin = 1, b = s·y -> f = -s·f ⇒ f ≡ 0 through any order
        let b = BiPoly::monomial(rat_i(1), 1, 1);
        let f = solve_implicit_series(&rat_i(1), &b, 12).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn implicit_rejects_low_order_terms() {
        let b = BiPoly::monomial(rat_i(1), 0, 1);
        assert!(matches!(
            solve_implicit_series(&rat_i(1), &b, 4),
            Err(SeriesError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn implicit_self_consistency() {
        // lin·f + b(s, f) ≡ 0 mod s^(N+1), assertable exactly
        let lin = rat_i(3);
        let mut b = BiPoly::monomial(rat_i(2), 2, 0); // 2s²
        b = &b + &BiPoly::monomial(rat(-1, 2), 1, 1); // -½ s·y
        b = &b + &BiPoly::monomial(rat_i(1), 0, 2); // y²
        let n = 10;
        let f = solve_implicit_series(&lin, &b, n).unwrap();
        let residual = compose_series(&b, &f, Var::X).add(&f.scale(&lin));
        assert!(residual.is_zero(), "residual {residual:?}");
    }

    #[test]
    fn compose_quadratic_leading_term() {
        // A(s, y) = μs² (+ cross terms vanishing faster), f = -½s²:
        // g = A(s, f(s)) has leading term μs²
        let mu = rat_i(3);
        let mut a = BiPoly::monomial(mu.clone(), 2, 0);
        a = &a + &BiPoly::monomial(rat_i(4), 1, 1);
        a = &a + &BiPoly::monomial(rat_i(5), 0, 2);
        let f = PowerSeries1::monomial(rat(-1, 2), 2, 10);
        let g = compose_series(&a, &f, Var::X);
        assert_eq!(g.leading_term(), Some((2, &mu)));
    }

    #[test]
    fn compose_zero_inner() {
        let outer = BiPoly::var(Var::X);
        let inner = PowerSeries1::zero(6);
        let composed = compose_series(&outer, &inner, Var::X);
        assert!(composed.is_zero());
        assert_eq!(composed.leading_term_checked(), Err(SeriesError::TruncationTooLow));
    }

    #[test]
    fn compose_quartic_from_square() {
        // B(s, z) = -z², f = (1-λ-a)s² with λ=2, a=0: F = -(1-λ-a)²s⁴ = -s⁴
        let b = BiPoly::monomial(rat_i(-1), 0, 2);
        let coeff = rat_i(1 - 2 - 0);
        let f = PowerSeries1::monomial(coeff, 2, 10);
        let g = compose_series(&b, &f, Var::X);
        assert_eq!(g.leading_term(), Some((4, &rat_i(-1))));
    }
}
