//! The eight classical orthogonal-polynomial families.
//!
//! Each family is a row (ρ, τ, λₙ) of hypergeometric type: deg ρ ≤ 2,
//! deg τ ≤ 1, and every Pₙ satisfies ρPₙ″ + τPₙ′ + λₙPₙ = 0 exactly.
//! Polynomials are generated by their standard three-term recurrences with
//! exact rational coefficients; the recurrences avoid any symbolic
//! differentiation of weight functions and pin a concrete normalization
//! (the invariant algebraic curves downstream are scale-invariant in Pₙ,
//! so any fixed normalization is valid).

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_traits::Zero;

use crate::exactpoly::{rat, rat_i, Rat, UniPoly};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilyId {
    Jacobi,
    Legendre,
    ChebyshevT,
    ChebyshevU,
    Gegenbauer,
    LaguerreAssoc,
    Laguerre,
    Hermite,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::Jacobi,
        FamilyId::Legendre,
        FamilyId::ChebyshevT,
        FamilyId::ChebyshevU,
        FamilyId::Gegenbauer,
        FamilyId::LaguerreAssoc,
        FamilyId::Laguerre,
        FamilyId::Hermite,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::Jacobi => "jacobi",
            FamilyId::Legendre => "legendre",
            FamilyId::ChebyshevT => "chebyshev-t",
            FamilyId::ChebyshevU => "chebyshev-u",
            FamilyId::Gegenbauer => "gegenbauer",
            FamilyId::LaguerreAssoc => "laguerre-assoc",
            FamilyId::Laguerre => "laguerre",
            FamilyId::Hermite => "hermite",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyId> {
        let s = s.to_ascii_lowercase();
        Some(match s.as_str() {
            "jacobi" => FamilyId::Jacobi,
            "legendre" => FamilyId::Legendre,
            "chebyshev-t" | "chebyshevt" | "t" => FamilyId::ChebyshevT,
            "chebyshev-u" | "chebyshevu" | "u" => FamilyId::ChebyshevU,
            "gegenbauer" => FamilyId::Gegenbauer,
            "laguerre-assoc" | "laguerre-associated" | "associated-laguerre" => FamilyId::LaguerreAssoc,
            "laguerre" => FamilyId::Laguerre,
            "hermite" => FamilyId::Hermite,
            _ => return None,
        })
    }

    /// Which of α, β the family uses.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            FamilyId::Jacobi => &["alpha", "beta"],
            FamilyId::Gegenbauer | FamilyId::LaguerreAssoc => &["alpha"],
            _ => &[],
        }
    }

    /// Human-readable λₙ rule for the registry listing.
    pub fn lambda_rule(&self) -> &'static str {
        match self {
            FamilyId::Jacobi => "n*(n+1+alpha+beta)",
            FamilyId::Legendre => "n*(n+1)",
            FamilyId::ChebyshevT => "n^2",
            FamilyId::ChebyshevU => "n*(n+2)",
            FamilyId::Gegenbauer => "n*(n+2*alpha)",
            FamilyId::LaguerreAssoc | FamilyId::Laguerre => "n",
            FamilyId::Hermite => "2*n",
        }
    }

    pub fn rho_str(&self) -> &'static str {
        match self {
            FamilyId::Jacobi
            | FamilyId::Legendre
            | FamilyId::ChebyshevT
            | FamilyId::ChebyshevU
            | FamilyId::Gegenbauer => "1-x^2",
            FamilyId::LaguerreAssoc | FamilyId::Laguerre => "x",
            FamilyId::Hermite => "1",
        }
    }

    pub fn tau_str(&self) -> &'static str {
        match self {
            FamilyId::Jacobi => "beta-alpha-(alpha+beta+2)x",
            FamilyId::Legendre => "-2x",
            FamilyId::ChebyshevT => "-x",
            FamilyId::ChebyshevU => "-3x",
            FamilyId::Gegenbauer => "-(2*alpha+1)x",
            FamilyId::LaguerreAssoc => "alpha+1-x",
            FamilyId::Laguerre => "1-x",
            FamilyId::Hermite => "-2x",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// One end of the orthogonality interval.
#[derive(Clone, PartialEq, Debug)]
pub enum Endpoint {
    Finite(Rat),
    NegInf,
    PosInf,
}

impl Endpoint {
    pub fn to_f64(&self) -> f64 {
        match self {
            Endpoint::Finite(r) => crate::exactpoly::rat_to_f64(r),
            Endpoint::NegInf => f64::NEG_INFINITY,
            Endpoint::PosInf => f64::INFINITY,
        }
    }

    pub fn display(&self) -> String {
        match self {
            Endpoint::Finite(r) => crate::exactpoly::rat_string(r),
            Endpoint::NegInf => String::from("-inf"),
            Endpoint::PosInf => String::from("inf"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum FamilyError {
    UnsupportedParams(String),
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::UnsupportedParams(msg) => write!(f, "unsupported parameters: {msg}"),
        }
    }
}

/// A concrete family instance: (ρ, τ) with parameters bound.
#[derive(Clone, PartialEq, Debug)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub rho: UniPoly,
    pub tau: UniPoly,
    pub alpha: Option<Rat>,
    pub beta: Option<Rat>,
    pub interval: (Endpoint, Endpoint),
}

fn one_minus_x2() -> UniPoly {
    UniPoly::from_ints(&[1, 0, -1])
}

/// Builds a family instance, validating the classical parameter constraints
/// (Jacobi α, β > −1; Gegenbauer α > −1/2; associated Laguerre α > −1).
pub fn family(id: FamilyId, alpha: Option<Rat>, beta: Option<Rat>) -> Result<FamilySpec, FamilyError> {
    let need = |name: &str, p: &Option<Rat>| -> Result<Rat, FamilyError> {
        p.clone().ok_or_else(|| FamilyError::UnsupportedParams(format!("{} requires {name}", id.name())))
    };
    let no_params = alpha.is_none() && beta.is_none();
    let reject_params = |id: FamilyId| -> Result<(), FamilyError> {
        if no_params {
            Ok(())
        } else {
            Err(FamilyError::UnsupportedParams(format!("{} takes no parameters", id.name())))
        }
    };
    let finite = |lo: i64, hi: i64| (Endpoint::Finite(rat_i(lo)), Endpoint::Finite(rat_i(hi)));
    match id {
        FamilyId::Jacobi => {
            let a = need("alpha", &alpha)?;
            let b = need("beta", &beta)?;
            if a <= rat_i(-1) || b <= rat_i(-1) {
                return Err(FamilyError::UnsupportedParams(String::from("jacobi needs alpha, beta > -1")));
            }
            // τ = β - α - (α+β+2)x
            let tau = UniPoly::from_coeffs(alloc::vec![&b - &a, -(&a + &b + rat_i(2))]);
            Ok(FamilySpec { id, rho: one_minus_x2(), tau, alpha: Some(a), beta: Some(b), interval: finite(-1, 1) })
        }
        FamilyId::Legendre => {
            reject_params(id)?;
            Ok(FamilySpec {
                id,
                rho: one_minus_x2(),
                tau: UniPoly::from_ints(&[0, -2]),
                alpha: None,
                beta: None,
                interval: finite(-1, 1),
            })
        }
        FamilyId::ChebyshevT => {
            reject_params(id)?;
            Ok(FamilySpec {
                id,
                rho: one_minus_x2(),
                tau: UniPoly::from_ints(&[0, -1]),
                alpha: None,
                beta: None,
                interval: finite(-1, 1),
            })
        }
        FamilyId::ChebyshevU => {
            reject_params(id)?;
            Ok(FamilySpec {
                id,
                rho: one_minus_x2(),
                tau: UniPoly::from_ints(&[0, -3]),
                alpha: None,
                beta: None,
                interval: finite(-1, 1),
            })
        }
        FamilyId::Gegenbauer => {
            let a = need("alpha", &alpha)?;
            if beta.is_some() {
                return Err(FamilyError::UnsupportedParams(String::from("gegenbauer takes alpha only")));
            }
            if a <= rat(-1, 2) {
                return Err(FamilyError::UnsupportedParams(String::from("gegenbauer needs alpha > -1/2")));
            }
            // τ = -(2α+1)x
            let tau = UniPoly::from_coeffs(alloc::vec![Rat::zero(), -(rat_i(2) * &a + rat_i(1))]);
            Ok(FamilySpec { id, rho: one_minus_x2(), tau, alpha: Some(a), beta: None, interval: finite(-1, 1) })
        }
        FamilyId::LaguerreAssoc => {
            let a = need("alpha", &alpha)?;
            if beta.is_some() {
                return Err(FamilyError::UnsupportedParams(String::from(
                    "associated laguerre takes alpha only",
                )));
            }
            if a <= rat_i(-1) {
                return Err(FamilyError::UnsupportedParams(String::from(
                    "associated laguerre needs alpha > -1",
                )));
            }
            // τ = α + 1 - x
            let tau = UniPoly::from_coeffs(alloc::vec![&a + rat_i(1), rat_i(-1)]);
            Ok(FamilySpec {
                id,
                rho: UniPoly::x(),
                tau,
                alpha: Some(a),
                beta: None,
                interval: (Endpoint::Finite(Rat::zero()), Endpoint::PosInf),
            })
        }
        FamilyId::Laguerre => {
            reject_params(id)?;
            Ok(FamilySpec {
                id,
                rho: UniPoly::x(),
                tau: UniPoly::from_ints(&[1, -1]),
                alpha: None,
                beta: None,
                interval: (Endpoint::Finite(Rat::zero()), Endpoint::PosInf),
            })
        }
        FamilyId::Hermite => {
            reject_params(id)?;
            Ok(FamilySpec {
                id,
                rho: UniPoly::one(),
                tau: UniPoly::from_ints(&[0, -2]),
                alpha: None,
                beta: None,
                interval: (Endpoint::NegInf, Endpoint::PosInf),
            })
        }
    }
}

impl FamilySpec {
    /// λₙ = −n(τ′ + ((n−1)/2)ρ″), exact.
    pub fn lambda_n(&self, n: u32) -> Rat {
        let tau1 = self.tau.coeff(1);
        let rho2 = self.rho.coeff(2) * rat_i(2); // ρ″ for deg ≤ 2
        let n_r = rat_i(n as i64);
        let half = (&n_r - rat_i(1)) / rat_i(2);
        -(&n_r * (tau1 + half * rho2))
    }
}

/// An exact orthogonal polynomial with its derivative.
#[derive(Clone, Debug)]
pub struct OrthoPoly {
    pub spec: FamilySpec,
    pub n: u32,
    pub poly: UniPoly,
    pub derivative: UniPoly,
}

/// Generates Pₙ by the family's three-term recurrence.
///
/// Gegenbauer with α = 0 is degenerate under the standard normalization
/// (Cₙ⁰ ≡ 0 for n ≥ 1); the renormalized limit (2/n)Tₙ is used instead so
/// the row still carries a degree-n solution of its ODE.
pub fn poly_of(spec: &FamilySpec, n: u32) -> Result<OrthoPoly, FamilyError> {
    let poly = generate(spec, n)?;
    debug_assert_eq!(poly.degree(), Some(n as usize));
    let derivative = poly.diff();
    Ok(OrthoPoly { spec: spec.clone(), n, poly, derivative })
}

fn generate(spec: &FamilySpec, n: u32) -> Result<UniPoly, FamilyError> {
    let x = UniPoly::x();
    let two_x = UniPoly::from_ints(&[0, 2]);
    match spec.id {
        FamilyId::ChebyshevT => Ok(recurrence(n, UniPoly::one(), x, |_, pk, pk1| {
            let two_x = UniPoly::from_ints(&[0, 2]);
            &(&two_x * pk) - pk1
        })),
        FamilyId::ChebyshevU => Ok(recurrence(n, UniPoly::one(), two_x, |_, pk, pk1| {
            let two_x = UniPoly::from_ints(&[0, 2]);
            &(&two_x * pk) - pk1
        })),
        FamilyId::Legendre => Ok(recurrence(n, UniPoly::one(), x, |k, pk, pk1| {
            // (k+1)·P_{k+1} = (2k+1)x·P_k − k·P_{k−1}
            let k = k as i64;
            let t = &UniPoly::x().scale(&rat(2 * k + 1, k + 1)) * pk;
            &t - &pk1.scale(&rat(k, k + 1))
        })),
        FamilyId::Hermite => Ok(recurrence(n, UniPoly::one(), two_x, |k, pk, pk1| {
            let k = k as i64;
            let two_x = UniPoly::from_ints(&[0, 2]);
            &(&two_x * pk) - &pk1.scale(&rat_i(2 * k))
        })),
        FamilyId::Laguerre => Ok(recurrence(n, UniPoly::one(), UniPoly::from_ints(&[1, -1]), |k, pk, pk1| {
            // (k+1)·L_{k+1} = (2k+1−x)·L_k − k·L_{k−1}
            let k = k as i64;
            let lin = UniPoly::from_ints(&[2 * k + 1, -1]);
            let t = &lin * pk;
            (&t - &pk1.scale(&rat_i(k))).scale(&rat(1, k + 1))
        })),
        FamilyId::LaguerreAssoc => {
            let a = spec.alpha.clone().expect("validated");
            let p1 = UniPoly::from_coeffs(alloc::vec![&a + rat_i(1), rat_i(-1)]);
            Ok(recurrence(n, UniPoly::one(), p1, move |k, pk, pk1| {
                // (k+1)·L_{k+1} = (2k+1+α−x)·L_k − (k+α)·L_{k−1}
                let kr = rat_i(k as i64);
                let lin = UniPoly::from_coeffs(alloc::vec![&kr * rat_i(2) + rat_i(1) + &a, rat_i(-1)]);
                let t = &lin * pk;
                let s = &t - &pk1.scale(&(&kr + &a));
                s.scale(&(rat_i(1) / (kr + rat_i(1))))
            }))
        }
        FamilyId::Gegenbauer => {
            let a = spec.alpha.clone().expect("validated");
            if a.is_zero() {
                // renormalized limit: C_0 = 1, C_n = (2/n)·T_n for n ≥ 1
                if n == 0 {
                    return Ok(UniPoly::one());
                }
                let cheb = family(FamilyId::ChebyshevT, None, None).unwrap();
                let t = generate(&cheb, n)?;
                return Ok(t.scale(&rat(2, n as i64)));
            }
            let p1 = UniPoly::from_coeffs(alloc::vec![Rat::zero(), rat_i(2) * &a]);
            Ok(recurrence(n, UniPoly::one(), p1, move |k, pk, pk1| {
                // (k+1)·C_{k+1} = 2(k+α)x·C_k − (k+2α−1)·C_{k−1}
                let kr = rat_i(k as i64);
                let t = &UniPoly::x().scale(&(rat_i(2) * (&kr + &a))) * pk;
                let s = &t - &pk1.scale(&(&kr + rat_i(2) * &a - rat_i(1)));
                s.scale(&(rat_i(1) / (kr + rat_i(1))))
            }))
        }
        FamilyId::Jacobi => {
            let a = spec.alpha.clone().expect("validated");
            let b = spec.beta.clone().expect("validated");
            let p1 = UniPoly::from_coeffs(alloc::vec![(&a - &b) / rat_i(2), (&a + &b + rat_i(2)) / rat_i(2)]);
            Ok(recurrence(n, UniPoly::one(), p1, move |k, pk, pk1| {
                // 2(k+1)(k+α+β+1)(2k+α+β)·P_{k+1} =
                //   (2k+α+β+1)[(2k+α+β)(2k+α+β+2)x + α²−β²]·P_k
                //   − 2(k+α)(k+β)(2k+α+β+2)·P_{k−1}
                let kr = rat_i(k as i64);
                let s = &a + &b;
                let c = rat_i(2) * &kr + &s; // 2k+α+β
                let c1 = &c + rat_i(1);
                let c2 = &c + rat_i(2);
                let lin = UniPoly::from_coeffs(alloc::vec![&a * &a - &b * &b, &c * &c2]);
                let t = (&lin * pk).scale(&c1);
                let back = pk1.scale(&(rat_i(2) * (&kr + &a) * (&kr + &b) * &c2));
                let den = rat_i(2) * (&kr + rat_i(1)) * (&kr + &s + rat_i(1)) * &c;
                (&t - &back).scale(&den.recip())
            }))
        }
    }
}

fn recurrence<F>(n: u32, p0: UniPoly, p1: UniPoly, step: F) -> UniPoly
where
    F: Fn(u32, &UniPoly, &UniPoly) -> UniPoly,
{
    match n {
        0 => p0,
        1 => p1,
        _ => {
            let mut prev = p0;
            let mut cur = p1;
            for k in 1..n {
                let next = step(k, &cur, &prev);
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// ρPₙ″ + τPₙ′ + λₙPₙ — identically zero for every family polynomial.
pub fn ode_residual(p: &OrthoPoly) -> UniPoly {
    let lam = p.spec.lambda_n(p.n);
    let d2 = p.derivative.diff();
    let t = &(&p.spec.rho * &d2) + &(&p.spec.tau * &p.derivative);
    &t + &p.poly.scale(&lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::real_roots;

    fn plain(id: FamilyId) -> FamilySpec {
        family(id, None, None).unwrap()
    }

    fn sample_specs() -> Vec<FamilySpec> {
        let mut out = Vec::new();
        let grid = [rat(-1, 2), Rat::zero(), rat(1, 2), rat_i(1), rat(3, 2)];
        for a in &grid {
            for b in &grid {
                out.push(family(FamilyId::Jacobi, Some(a.clone()), Some(b.clone())).unwrap());
            }
        }
        for a in &grid {
            if *a > rat(-1, 2) {
                out.push(family(FamilyId::Gegenbauer, Some(a.clone()), None).unwrap());
            }
            out.push(family(FamilyId::LaguerreAssoc, Some(a.clone()), None).unwrap());
        }
        for id in [FamilyId::Legendre, FamilyId::ChebyshevT, FamilyId::ChebyshevU, FamilyId::Laguerre, FamilyId::Hermite]
        {
            out.push(plain(id));
        }
        out
    }

    #[test]
    fn lambda_examples() {
        let h = plain(FamilyId::Hermite);
        for n in 0..8 {
            assert_eq!(h.lambda_n(n), rat_i(2 * n as i64));
        }
        for spec in sample_specs() {
            assert_eq!(spec.lambda_n(0), Rat::zero());
        }
        let j = family(FamilyId::Jacobi, Some(rat(1, 2)), Some(rat_i(1))).unwrap();
        for n in 0..6i64 {
            let nr = rat_i(n);
            assert_eq!(j.lambda_n(n as u32), &nr * (&nr + rat_i(1) + rat(1, 2) + rat_i(1)));
        }
    }

    #[test]
    fn lambda_formula_matches_table_columns() {
        for spec in sample_specs() {
            for n in 0..=12u32 {
                let nr = rat_i(n as i64);
                let expected = match spec.id {
                    FamilyId::Jacobi => {
                        let s = spec.alpha.clone().unwrap() + spec.beta.clone().unwrap();
                        &nr * (&nr + rat_i(1) + s)
                    }
                    FamilyId::Legendre => &nr * (&nr + rat_i(1)),
                    FamilyId::ChebyshevT => &nr * &nr,
                    FamilyId::ChebyshevU => &nr * (&nr + rat_i(2)),
                    FamilyId::Gegenbauer => {
                        let a = spec.alpha.clone().unwrap();
                        &nr * (&nr + rat_i(2) * a)
                    }
                    FamilyId::LaguerreAssoc | FamilyId::Laguerre => nr.clone(),
                    FamilyId::Hermite => rat_i(2) * &nr,
                };
                assert_eq!(spec.lambda_n(n), expected, "{:?} n={n}", spec.id);
            }
        }
    }

    #[test]
    fn frozen_low_order_polynomials() {
        // T3 = 4x³ − 3x
        let t3 = poly_of(&plain(FamilyId::ChebyshevT), 3).unwrap();
        assert_eq!(t3.poly, UniPoly::from_ints(&[0, -3, 0, 4]));
        // U2 = 4x² − 1
        let u2 = poly_of(&plain(FamilyId::ChebyshevU), 2).unwrap();
        assert_eq!(u2.poly, UniPoly::from_ints(&[-1, 0, 4]));
        // H2 = 4x² − 2
        let h2 = poly_of(&plain(FamilyId::Hermite), 2).unwrap();
        assert_eq!(h2.poly, UniPoly::from_ints(&[-2, 0, 4]));
        // Legendre P3 = (5x³ − 3x)/2
        let p3 = poly_of(&plain(FamilyId::Legendre), 3).unwrap();
        assert_eq!(p3.poly, UniPoly::from_ints(&[0, -3, 0, 5]).scale(&rat(1, 2)));
        // Laguerre L2 = (x² − 4x + 2)/2
        let l2 = poly_of(&plain(FamilyId::Laguerre), 2).unwrap();
        assert_eq!(l2.poly, UniPoly::from_ints(&[2, -4, 1]).scale(&rat(1, 2)));
        // any family, n = 0 is the constant 1
        for spec in sample_specs() {
            assert_eq!(poly_of(&spec, 0).unwrap().poly, UniPoly::one());
        }
    }

    #[test]
    fn hermite_n2_residual_expansion() {
        // 1·8 + (−2x)(8x) + 4(4x²−2) = 0
        let h2 = poly_of(&plain(FamilyId::Hermite), 2).unwrap();
        assert!(ode_residual(&h2).is_zero());
        let l3 = poly_of(&plain(FamilyId::Legendre), 3).unwrap();
        assert!(ode_residual(&l3).is_zero());
    }

    #[test]
    fn ode_residual_full_sweep() {
        for spec in sample_specs() {
            for n in 0..=12 {
                let p = poly_of(&spec, n).unwrap();
                assert_eq!(p.poly.degree(), Some(n as usize), "{:?} n={n}", spec.id);
                assert_eq!(p.derivative, p.poly.diff());
                assert!(ode_residual(&p).is_zero(), "{:?} n={n}", spec.id);
            }
        }
    }

    #[test]
    fn parameter_constraints_enforced() {
        assert!(family(FamilyId::Jacobi, Some(rat_i(-1)), Some(Rat::zero())).is_err());
        assert!(family(FamilyId::Gegenbauer, Some(rat(-1, 2)), None).is_err());
        assert!(family(FamilyId::LaguerreAssoc, Some(rat_i(-2)), None).is_err());
        assert!(family(FamilyId::Jacobi, Some(Rat::zero()), None).is_err());
        assert!(family(FamilyId::Hermite, Some(Rat::zero()), None).is_err());
    }

    #[test]
    fn gegenbauer_zero_alpha_uses_limit_normalization() {
        let g = family(FamilyId::Gegenbauer, Some(Rat::zero()), None).unwrap();
        let c3 = poly_of(&g, 3).unwrap();
        // (2/3)·T3
        assert_eq!(c3.poly, UniPoly::from_ints(&[0, -3, 0, 4]).scale(&rat(2, 3)));
        assert!(ode_residual(&c3).is_zero());
    }

    #[test]
    fn roots_inside_interval_and_simple() {
        // one representative instance per family keeps the Sturm sweep quick
        let specs = alloc::vec![
            family(FamilyId::Jacobi, Some(rat(1, 2)), Some(rat(-1, 2))).unwrap(),
            family(FamilyId::Gegenbauer, Some(rat(1, 2)), None).unwrap(),
            family(FamilyId::LaguerreAssoc, Some(rat(1, 2)), None).unwrap(),
            plain(FamilyId::Legendre),
            plain(FamilyId::ChebyshevT),
            plain(FamilyId::ChebyshevU),
            plain(FamilyId::Laguerre),
            plain(FamilyId::Hermite),
        ];
        for spec in specs {
            let (lo, hi) = (spec.interval.0.to_f64(), spec.interval.1.to_f64());
            for n in 1..=12 {
                let p = poly_of(&spec, n).unwrap();
                // simplicity is exact: gcd(P, P') must be constant
                let g = UniPoly::gcd(&p.poly, &p.derivative);
                assert_eq!(g.degree(), Some(0), "{:?} n={n}", spec.id);
                let roots = real_roots(&p.poly);
                assert_eq!(roots.len(), n as usize, "{:?} n={n}", spec.id);
                for r in &roots {
                    assert!(*r > lo && *r < hi, "{:?} n={n} root {r} outside ({lo}, {hi})", spec.id);
                }
                for w in roots.windows(2) {
                    assert!(w[1] - w[0] > 1e-9, "{:?} n={n} root gap too small", spec.id);
                }
            }
        }
    }
}
