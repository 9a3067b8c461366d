//! Planar polynomial systems (v̇ = P, ẋ = Q) and their invariant algebraic
//! curves.
//!
//! The family systems are
//!
//! ```text
//!     v̇ = (λₙ/μ)ρ + (ρ′ − τ)v + μv²,    ẋ = ρ(x),
//! ```
//!
//! and each carries the invariant algebraic curve f = μvPₙ + ρPₙ′ with
//! cofactor K = ρ′ + μv − τ. The identity Xf = Kf is proven coefficient-wise
//! at construction time, never sampled.

use alloc::string::String;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::exactpoly::{BiPoly, Rat, Surd, UniPoly, Var};
use crate::families::{poly_of, FamilyError, FamilyId, FamilySpec};

#[derive(Clone, PartialEq, Debug)]
pub enum VFieldError {
    ZeroMu,
    NonpositiveLambda,
    DegenerateQ,
    IdentityFailed,
    Family(FamilyError),
}

impl fmt::Display for VFieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VFieldError::ZeroMu => write!(f, "mu must be nonzero"),
            VFieldError::NonpositiveLambda => write!(f, "lambda must be positive"),
            VFieldError::DegenerateQ => write!(f, "Q is identically zero"),
            VFieldError::IdentityFailed => write!(f, "invariant-curve identity failed"),
            VFieldError::Family(e) => write!(f, "{e}"),
        }
    }
}

impl From<FamilyError> for VFieldError {
    fn from(e: FamilyError) -> Self {
        VFieldError::Family(e)
    }
}

/// Where a system came from, for reporting.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Provenance {
    pub family: Option<FamilyId>,
    pub shape: Option<&'static str>,
    pub n: Option<u32>,
    pub mu: Option<Rat>,
    pub a: Option<Rat>,
    pub b: Option<Rat>,
    pub lambda: Option<Rat>,
    pub alpha: Option<Rat>,
    pub beta: Option<Rat>,
}

/// A planar polynomial system v̇ = P(v,x), ẋ = Q(v,x).
///
/// Family-generated systems are quadratic; the type itself carries any
/// degree (Poincaré chart systems are cubic, the reduced Chebyshev carrier
/// is sextic).
#[derive(Clone, PartialEq, Debug)]
pub struct QuadSystem {
    pub p: BiPoly,
    pub q: BiPoly,
    pub provenance: Option<Provenance>,
}

impl QuadSystem {
    pub fn new(p: BiPoly, q: BiPoly) -> Self {
        QuadSystem { p, q, provenance: None }
    }

    /// m = max(deg P, deg Q); zero for the zero system.
    pub fn degree(&self) -> u32 {
        self.p
            .total_degree()
            .unwrap_or(0)
            .max(self.q.total_degree().unwrap_or(0))
    }

    /// Right-hand side at a float point.
    pub fn eval_f64(&self, v: f64, x: f64) -> (f64, f64) {
        (self.p.eval_f64(v, x), self.q.eval_f64(v, x))
    }

    /// Time-reversed system (−P, −Q).
    pub fn time_reversed(&self) -> QuadSystem {
        QuadSystem { p: -&self.p, q: -&self.q, provenance: self.provenance.clone() }
    }
}

fn check_mu(mu: &Rat) -> Result<(), VFieldError> {
    if mu.is_zero() {
        Err(VFieldError::ZeroMu)
    } else {
        Ok(())
    }
}

fn check_lambda(lambda: &Rat) -> Result<(), VFieldError> {
    if lambda.is_positive() {
        Ok(())
    } else {
        Err(VFieldError::NonpositiveLambda)
    }
}

/// The family system v̇ = (λₙ/μ)ρ + (ρ′−τ)v + μv², ẋ = ρ, exactly.
pub fn build_family_system(spec: &FamilySpec, n: u32, mu: &Rat) -> Result<QuadSystem, VFieldError> {
    check_mu(mu)?;
    let lambda = spec.lambda_n(n);
    let rho = BiPoly::from_unipoly_x(&spec.rho);
    let coupling = &spec.rho.diff() - &spec.tau; // ρ′ − τ
    let mut p = rho.scale(&(&lambda / mu));
    p = &p + &(&BiPoly::from_unipoly_x(&coupling) * &BiPoly::var(Var::V));
    p = &p + &BiPoly::monomial(mu.clone(), 2, 0);
    let prov = Provenance {
        family: Some(spec.id),
        n: Some(n),
        mu: Some(mu.clone()),
        lambda: Some(lambda),
        alpha: spec.alpha.clone(),
        beta: spec.beta.clone(),
        ..Provenance::default()
    };
    Ok(QuadSystem { p, q: rho, provenance: Some(prov) })
}

/// v̇ = (λₙ/μ)(1−x²) + avx + μv², ẋ = 1−x² (the ρ = 1−x² parametric shape).
pub fn build_parametric_a(lambda: &Rat, mu: &Rat, a: &Rat) -> Result<QuadSystem, VFieldError> {
    build_parametric_a_with_b(lambda, mu, a, &Rat::zero())
}

/// The parametric A shape extended with an additive b·v term:
/// v̇ = (λₙ/μ)(1−x²) + avx + bv + μv², ẋ = 1−x².
pub fn build_parametric_a_with_b(
    lambda: &Rat,
    mu: &Rat,
    a: &Rat,
    b: &Rat,
) -> Result<QuadSystem, VFieldError> {
    check_mu(mu)?;
    check_lambda(lambda)?;
    let rho = BiPoly::from_unipoly_x(&UniPoly::from_ints(&[1, 0, -1]));
    let mut p = rho.scale(&(lambda / mu));
    p = &p + &BiPoly::monomial(a.clone(), 1, 1);
    p = &p + &BiPoly::monomial(b.clone(), 1, 0);
    p = &p + &BiPoly::monomial(mu.clone(), 2, 0);
    let prov = Provenance {
        shape: Some("parametric-a"),
        lambda: Some(lambda.clone()),
        mu: Some(mu.clone()),
        a: Some(a.clone()),
        b: Some(b.clone()),
        ..Provenance::default()
    };
    Ok(QuadSystem { p, q: rho, provenance: Some(prov) })
}

/// v̇ = (λₙ/μ)x + av + bvx + μv², ẋ = x (the ρ = x parametric shape).
pub fn build_parametric_b(lambda: &Rat, mu: &Rat, a: &Rat, b: &Rat) -> Result<QuadSystem, VFieldError> {
    check_mu(mu)?;
    check_lambda(lambda)?;
    let x = BiPoly::var(Var::X);
    let mut p = x.scale(&(lambda / mu));
    p = &p + &BiPoly::monomial(a.clone(), 1, 0);
    p = &p + &BiPoly::monomial(b.clone(), 1, 1);
    p = &p + &BiPoly::monomial(mu.clone(), 2, 0);
    let prov = Provenance {
        shape: Some("parametric-b"),
        lambda: Some(lambda.clone()),
        mu: Some(mu.clone()),
        a: Some(a.clone()),
        b: Some(b.clone()),
        ..Provenance::default()
    };
    Ok(QuadSystem { p, q: x, provenance: Some(prov) })
}

/// The foliation dv/dx = P/Q as a pair (numerator, denominator) with common
/// polynomial content cancelled. Proportional P and Q reduce to constants.
pub fn foliation(sys: &QuadSystem) -> Result<(BiPoly, BiPoly), VFieldError> {
    if sys.q.is_zero() {
        return Err(VFieldError::DegenerateQ);
    }
    if sys.p.is_zero() {
        return Ok((BiPoly::zero(), BiPoly::one()));
    }
    let mut p = sys.p.clone();
    let mut q = sys.q.clone();
    // x-content: gcd over all v-slice coefficients of both components
    let mut content = UniPoly::zero();
    for poly in [&p, &q] {
        let max_v = poly.deg_in(Var::V).unwrap_or(0);
        for i in 0..=max_v {
            content = UniPoly::gcd(&content, &poly.coeff_of_v_power(i));
        }
    }
    if content.degree().is_some_and(|d| d > 0) {
        let div = BiPoly::from_unipoly_x(&content);
        p = p.divide_exact(&div).expect("content divides");
        q = q.divide_exact(&div).expect("content divides");
    }
    // proportional components reduce fully
    if let Some(ratio) = proportion(&p, &q) {
        return Ok((BiPoly::constant(ratio), BiPoly::one()));
    }
    Ok((p, q))
}

/// If `p = c·q` for a rational constant c, returns c.
fn proportion(p: &BiPoly, q: &BiPoly) -> Option<Rat> {
    let (&key, qc) = q.terms().next()?;
    let pc = p.coeff(key.0, key.1);
    if pc.is_zero() {
        return None;
    }
    let c = pc / qc;
    if p == &q.scale(&c) {
        Some(c)
    } else {
        None
    }
}

/// An invariant algebraic curve f = 0 with its polynomial cofactor:
/// Xf = K·f exactly, deg K ≤ deg(system) − 1.
#[derive(Clone, PartialEq, Debug)]
pub struct InvariantCurve {
    pub f: BiPoly,
    pub cofactor: BiPoly,
}

/// Lie derivative along the field: Xf = P·∂f/∂v + Q·∂f/∂x, exact.
pub fn lie_derivative(sys: &QuadSystem, f: &BiPoly) -> BiPoly {
    let t = &sys.p * &f.diff(Var::V);
    &t + &(&sys.q * &f.diff(Var::X))
}

/// Outcome of an invariance check: either the exact cofactor, or the
/// nonzero remainder witnessing non-invariance.
#[derive(Clone, PartialEq, Debug)]
pub enum InvarianceCheck {
    Invariant { cofactor: BiPoly },
    NotInvariant { remainder: BiPoly },
}

/// Decides whether f = 0 is invariant by exact division of Xf by f in the
/// lex order v > x. Single-divisor lex division is a complete divisibility
/// test, so absence of a cofactor is a result, not an approximation.
pub fn verify_invariant(sys: &QuadSystem, f: &BiPoly) -> Option<InvarianceCheck> {
    if f.is_zero() {
        return None;
    }
    let xf = lie_derivative(sys, f);
    let (q, r) = xf.div_rem_lex(f);
    Some(if r.is_zero() {
        InvarianceCheck::Invariant { cofactor: q }
    } else {
        InvarianceCheck::NotInvariant { remainder: r }
    })
}

/// The family invariant curve f = μvPₙ + ρPₙ′ with cofactor ρ′ + μv − τ.
/// The identity Xf = Kf is re-proven exactly before returning.
pub fn invariant_curve(spec: &FamilySpec, n: u32, mu: &Rat) -> Result<InvariantCurve, VFieldError> {
    check_mu(mu)?;
    let op = poly_of(spec, n)?;
    let v = BiPoly::var(Var::V);
    let f = &(&v.scale(mu) * &BiPoly::from_unipoly_x(&op.poly))
        + &BiPoly::from_unipoly_x(&(&spec.rho * &op.derivative));
    let cofactor = cofactor_of(spec, mu);
    let sys = build_family_system(spec, n, mu)?;
    let residual = &lie_derivative(&sys, &f) - &(&cofactor * &f);
    if !residual.is_zero() {
        return Err(VFieldError::IdentityFailed);
    }
    Ok(InvariantCurve { f, cofactor })
}

/// K = ρ′ + μv − τ.
pub fn cofactor_of(spec: &FamilySpec, mu: &Rat) -> BiPoly {
    let k = &spec.rho.diff() - &spec.tau;
    &BiPoly::from_unipoly_x(&k) + &BiPoly::monomial(mu.clone(), 1, 0)
}

/// Entrywise-exact Jacobian [[∂P/∂v, ∂P/∂x], [∂Q/∂v, ∂Q/∂x]].
pub fn jacobian_symbolic(sys: &QuadSystem) -> [[BiPoly; 2]; 2] {
    [
        [sys.p.diff(Var::V), sys.p.diff(Var::X)],
        [sys.q.diff(Var::V), sys.q.diff(Var::X)],
    ]
}

/// Jacobian evaluated at a float point.
pub fn jacobian_at_f64(sys: &QuadSystem, v: f64, x: f64) -> [[f64; 2]; 2] {
    let j = jacobian_symbolic(sys);
    [
        [j[0][0].eval_f64(v, x), j[0][1].eval_f64(v, x)],
        [j[1][0].eval_f64(v, x), j[1][1].eval_f64(v, x)],
    ]
}

/// Jacobian evaluated exactly at a point with quadratic-surd coordinates.
pub fn jacobian_at_surd(sys: &QuadSystem, v: &Surd, x: &Surd) -> [[Surd; 2]; 2] {
    let j = jacobian_symbolic(sys);
    [
        [j[0][0].eval_surd(v, x), j[0][1].eval_surd(v, x)],
        [j[1][0].eval_surd(v, x), j[1][1].eval_surd(v, x)],
    ]
}

/// Compact description of a system for error messages and provenance dumps.
pub fn describe(sys: &QuadSystem) -> String {
    use alloc::format;
    format!("v' = {}, x' = {}", sys.p, sys.q)
}
