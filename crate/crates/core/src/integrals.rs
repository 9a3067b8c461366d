//! Riccati ↔ linear-ODE transformations and the Chebyshev first integrals.
//!
//! The family foliations dv/dx = λₙ/μ + ((ρ′−τ)/ρ)v + (μ/ρ)v² linearise to
//! hypergeometric-type equations via w = μv = −ρy′/y. For the Chebyshev row
//! (ρ = 1−x², τ = −x, λₙ = n²) both closed-form first integrals are built
//! from Tₙ and Uₙ₋₁:
//!
//! ```text
//!   I(w,x) = √ρ·(2ρU′ − 3xU − 2ρUw) / (2ρT′ − xT − 2ρTw)
//!   I(v,x) = √ρ·(U′ρ + U(μv − x)) / (T′ρ + μTv)
//! ```
//!
//! related by the bridge w = −x/(2ρ) − μv/ρ. The bridge pullback of the
//! reduced foliation onto the family foliation is proven as an exact
//! polynomial identity; constancy along trajectories is then confirmed
//! numerically.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::exactpoly::{rat_i, rat_to_f64, BiPoly, Rat, UniPoly, Var};
use crate::families::{family, poly_of, FamilyId};
use crate::portrait::{integrate, IntegrateOpts, Termination};
use crate::vfield::{build_family_system, QuadSystem};

#[derive(Clone, PartialEq, Debug)]
pub enum IntegralsError {
    ZeroMu,
    DegenerateC2,
    NotFamilyShape(String),
    SingularSamplePoint(f64),
    TrajectoryLeftDomain,
    IntegrationFailure,
}

impl fmt::Display for IntegralsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralsError::ZeroMu => write!(f, "mu must be nonzero"),
            IntegralsError::DegenerateC2 => write!(f, "c2 vanishes: not a Riccati equation"),
            IntegralsError::NotFamilyShape(msg) => write!(f, "not of family shape: {msg}"),
            IntegralsError::SingularSamplePoint(x) => write!(f, "sample point x = {x} is singular"),
            IntegralsError::TrajectoryLeftDomain => write!(f, "trajectory left the integral's domain"),
            IntegralsError::IntegrationFailure => write!(f, "trajectory integration failed"),
        }
    }
}

/// A rational function num/den of one variable, reduced, with the
/// denominator scaled to coprime integer coefficients whose lowest-degree
/// nonzero coefficient is positive.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        RatFunc { num, den }.reduce()
    }

    pub fn from_poly(p: UniPoly) -> RatFunc {
        RatFunc { num: p, den: UniPoly::one() }
    }

    fn reduce(self) -> RatFunc {
        let g = UniPoly::gcd(&self.num, &self.den);
        let (num, den) = if g.degree().is_some_and(|d| d > 0) {
            (self.num.div_rem(&g).0, self.den.div_rem(&g).0)
        } else {
            (self.num, self.den)
        };
        let canonical = den.primitive();
        // keep num/den equal: num scales by den_canonical/den
        let lead = den.coeff(first_nonzero(&den));
        let lead_c = canonical.coeff(first_nonzero(&canonical));
        let scale = lead_c / lead;
        RatFunc { num: num.scale(&scale), den: canonical }
    }

    pub fn is_constant(&self) -> Option<Rat> {
        if self.num.is_zero() {
            return Some(Rat::zero());
        }
        if self.num.degree() == Some(0) && self.den.degree() == Some(0) {
            return Some(self.num.coeff(0) / self.den.coeff(0));
        }
        None
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }
}

fn first_nonzero(p: &UniPoly) -> usize {
    p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0)
}

/// dv/dx = c0 + c1·v + c2·v².
#[derive(Clone, PartialEq, Debug)]
pub struct RiccatiForm {
    pub c0: RatFunc,
    pub c1: RatFunc,
    pub c2: RatFunc,
}

/// Extracts the Riccati foliation of a system with v-free Q and P quadratic
/// in v.
pub fn riccati_of(sys: &QuadSystem) -> Result<RiccatiForm, IntegralsError> {
    let q = sys
        .q
        .as_unipoly_in_x()
        .ok_or_else(|| IntegralsError::NotFamilyShape(String::from("Q depends on v")))?;
    if q.is_zero() {
        return Err(IntegralsError::NotFamilyShape(String::from("Q is zero")));
    }
    if sys.p.deg_in(Var::V).unwrap_or(0) > 2 {
        return Err(IntegralsError::NotFamilyShape(String::from("P has degree > 2 in v")));
    }
    Ok(RiccatiForm {
        c0: RatFunc::new(sys.p.coeff_of_v_power(0), q.clone()),
        c1: RatFunc::new(sys.p.coeff_of_v_power(1), q.clone()),
        c2: RatFunc::new(sys.p.coeff_of_v_power(2), q),
    })
}

/// The hypergeometric data recovered from a Riccati foliation.
#[derive(Clone, PartialEq, Debug)]
pub struct LinearOde {
    pub rho: UniPoly,
    pub tau: UniPoly,
    pub lambda: Rat,
    pub mu: Rat,
}

/// Transforms a family Riccati equation into its hypergeometric-type linear
/// equation ρy″ + τy′ + λy = 0; solutions correspond under w = μv = −ρy′/y.
pub fn riccati_to_linear(r: &RiccatiForm) -> Result<LinearOde, IntegralsError> {
    if r.c2.num.is_zero() {
        return Err(IntegralsError::DegenerateC2);
    }
    // c2 = μ/ρ with μ constant fixes ρ up to the canonical denominator scale
    let mu = match r.c2.num.degree() {
        Some(0) => r.c2.num.coeff(0),
        _ => return Err(IntegralsError::NotFamilyShape(String::from("c2 numerator is not constant"))),
    };
    let rho = r.c2.den.clone();
    if rho.degree().is_none_or(|d| d > 2) {
        return Err(IntegralsError::NotFamilyShape(String::from("deg rho > 2")));
    }
    // c0 = λ/μ constant
    let lambda = match r.c0.is_constant() {
        Some(c) => c * &mu,
        None => return Err(IntegralsError::NotFamilyShape(String::from("c0 is not constant"))),
    };
    // c1 = (ρ′ − τ)/ρ, so τ = ρ′ − c1·ρ must divide out exactly
    let prod = &r.c1.num * &rho;
    let (quotient, rem) = prod.div_rem(&r.c1.den);
    if !rem.is_zero() {
        return Err(IntegralsError::NotFamilyShape(String::from("c1 denominator does not divide rho")));
    }
    let tau = &rho.diff() - &quotient;
    if tau.degree().is_some_and(|d| d > 1) {
        return Err(IntegralsError::NotFamilyShape(String::from("deg tau > 1")));
    }
    Ok(LinearOde { rho, tau, lambda, mu })
}

/// The inverse construction: the Riccati foliation of (ρ, τ, λ) at a given μ.
pub fn linear_to_riccati(ode: &LinearOde) -> RiccatiForm {
    let coupling = &ode.rho.diff() - &ode.tau;
    RiccatiForm {
        c0: RatFunc::new(UniPoly::constant(&ode.lambda / &ode.mu), UniPoly::one()),
        c1: RatFunc::new(coupling, ode.rho.clone()),
        c2: RatFunc::new(UniPoly::constant(ode.mu.clone()), ode.rho.clone()),
    }
}

fn lambda_cheb(n: u32) -> Rat {
    rat_i((n as i64) * (n as i64))
}

/// q(x) = (−2 − x² − 4λₙ(1−x²)) / (4(1−x²)²) with λₙ = n², kept verbatim:
/// numerator (−2−4λₙ) + (4λₙ−1)x² over denominator 4(1−x²)².
pub fn reduced_equation(n: u32) -> RatFunc {
    let lam = lambda_cheb(n);
    let num = UniPoly::from_coeffs(alloc::vec![
        -rat_i(2) - rat_i(4) * &lam,
        Rat::zero(),
        rat_i(4) * &lam - Rat::one(),
    ]);
    let rho = UniPoly::from_ints(&[1, 0, -1]);
    let den = (&rho * &rho).scale(&rat_i(4));
    RatFunc { num, den }
}

/// The carrier system of the reduced equation:
/// ẇ = −2−4λₙ+(4λₙ−1)x² − 4(1−x²)²w², ẋ = 4(1−x²)².
pub fn reduced_system(n: u32) -> QuadSystem {
    let q = reduced_equation(n);
    let den_b = BiPoly::from_unipoly_x(&q.den);
    let p = &BiPoly::from_unipoly_x(&q.num) - &(&den_b * &BiPoly::monomial(Rat::one(), 2, 0));
    QuadSystem::new(p, den_b)
}

/// Residuals of the Chebyshev equation (1−x²)y″ − xy′ + n²y = 0 for the
/// solution pair y₁ = Tₙ (exact, as a polynomial identity) and
/// y₂ = Uₙ₋₁√(1−x²) (numeric at the sample points).
pub struct SolutionResiduals {
    /// (1−x²)Tₙ″ − xTₙ′ + n²Tₙ — must be the zero polynomial.
    pub t_residual: UniPoly,
    pub max_residual_t: f64,
    pub max_residual_u: f64,
}

pub fn chebyshev_solutions_residual(n: u32, sample_pts: &[f64]) -> Result<SolutionResiduals, IntegralsError> {
    assert!(n >= 1, "n must be positive");
    let (t, u) = chebyshev_pair(n);
    let rho = UniPoly::from_ints(&[1, 0, -1]);
    let minus_x = UniPoly::from_ints(&[0, -1]);
    let lam = lambda_cheb(n);
    let t_residual =
        &(&(&rho * &t.diff().diff()) + &(&minus_x * &t.diff())) + &t.scale(&lam);
    let mut max_u = 0.0f64;
    for &x in sample_pts {
        let rho_v = 1.0 - x * x;
        if rho_v.abs() < 1e-12 {
            return Err(IntegralsError::SingularSamplePoint(x));
        }
        let sq = libm::sqrt(rho_v.abs());
        let (uv, du, ddu) = (u.eval_f64(x), u.diff().eval_f64(x), u.diff().diff().eval_f64(x));
        // y₂ = U√ρ, y₂′ = U′√ρ − Ux/√ρ, y₂″ = U″√ρ − 2U′x/√ρ − U/ρ^{3/2}
        let y = uv * sq;
        let dy = du * sq - uv * x / sq;
        let ddy = ddu * sq - 2.0 * du * x / sq - uv / (sq * rho_v);
        let res = rho_v * ddy - x * dy + rat_to_f64(&lam) * y;
        max_u = max_u.max(res.abs());
    }
    Ok(SolutionResiduals { t_residual: t_residual.clone(), max_residual_t: 0.0, max_residual_u: max_u })
        .map(|mut r| {
            r.max_residual_t = if t_residual.is_zero() { 0.0 } else { f64::INFINITY };
            r
        })
}

fn chebyshev_pair(n: u32) -> (UniPoly, UniPoly) {
    let t_spec = family(FamilyId::ChebyshevT, None, None).unwrap();
    let u_spec = family(FamilyId::ChebyshevU, None, None).unwrap();
    let t = poly_of(&t_spec, n).unwrap().poly;
    let u = poly_of(&u_spec, n - 1).unwrap().poly;
    (t, u)
}

/// Which variable the closed-form first integral takes alongside x.
#[derive(Clone, PartialEq, Debug)]
pub enum IntegralForm {
    /// I(w, x) on the reduced carrier system.
    W { n: u32 },
    /// I(v, x) on the Chebyshev family system at a given μ.
    V { n: u32, mu: Rat },
}

/// A closed-form first integral, evaluated through cleared numerator and
/// denominator polynomials (poles are exactly the denominator's zeros).
#[derive(Clone, Debug)]
pub struct FirstIntegral {
    pub form: IntegralForm,
    t: UniPoly,
    dt: UniPoly,
    u: UniPoly,
    du: UniPoly,
}

/// One evaluation: the (possibly complex) value plus the cleared numerator
/// and denominator magnitudes used for pole tracking.
#[derive(Clone, Copy, Debug)]
pub struct IntegralEval {
    pub value: Complex64,
    pub num_abs: f64,
    pub den_abs: f64,
}

pub fn first_integral_w(n: u32) -> FirstIntegral {
    assert!(n >= 1);
    let (t, u) = chebyshev_pair(n);
    FirstIntegral { form: IntegralForm::W { n }, dt: t.diff(), du: u.diff(), t, u }
}

pub fn first_integral_v(n: u32, mu: &Rat) -> Result<FirstIntegral, IntegralsError> {
    if mu.is_zero() {
        return Err(IntegralsError::ZeroMu);
    }
    assert!(n >= 1);
    let (t, u) = chebyshev_pair(n);
    Ok(FirstIntegral { form: IntegralForm::V { n, mu: mu.clone() }, dt: t.diff(), du: u.diff(), t, u })
}

impl FirstIntegral {
    /// Human-readable closed form.
    pub fn describe(&self) -> String {
        match &self.form {
            IntegralForm::W { .. } => format!(
                "sqrt(1-x^2)*(2*(1-x^2)*({du}) - 3x*({u}) - 2*(1-x^2)*({u})*w) / (2*(1-x^2)*({dt}) - x*({t}) - 2*(1-x^2)*({t})*w)",
                du = self.du, u = self.u, dt = self.dt, t = self.t
            ),
            IntegralForm::V { mu, .. } => format!(
                "sqrt(1-x^2)*(({du})*(1-x^2) + ({u})*({mu}*v-x)) / (({dt})*(1-x^2) + {mu}*({t})*v)",
                du = self.du, u = self.u, dt = self.dt, t = self.t,
                mu = crate::exactpoly::rat_string(mu)
            ),
        }
    }

    /// Evaluates at (w, x) or (v, x) according to the form. √(1−x²) takes its
    /// principal branch, so the value is purely imaginary scaled for |x| > 1.
    pub fn eval(&self, first: f64, x: f64) -> IntegralEval {
        let rho = 1.0 - x * x;
        let (num, den) = match &self.form {
            IntegralForm::W { .. } => {
                let w = first;
                let num =
                    2.0 * rho * self.du.eval_f64(x) - 3.0 * x * self.u.eval_f64(x) - 2.0 * rho * self.u.eval_f64(x) * w;
                let den =
                    2.0 * rho * self.dt.eval_f64(x) - x * self.t.eval_f64(x) - 2.0 * rho * self.t.eval_f64(x) * w;
                (num, den)
            }
            IntegralForm::V { mu, .. } => {
                let v = first;
                let m = rat_to_f64(mu);
                let num = self.du.eval_f64(x) * rho + self.u.eval_f64(x) * (m * v - x);
                let den = self.dt.eval_f64(x) * rho + m * self.t.eval_f64(x) * v;
                (num, den)
            }
        };
        let sqrt_rho = if rho >= 0.0 {
            Complex64::new(libm::sqrt(rho), 0.0)
        } else {
            Complex64::new(0.0, libm::sqrt(-rho))
        };
        IntegralEval {
            value: sqrt_rho * Complex64::new(num / den, 0.0),
            num_abs: num.abs(),
            den_abs: den.abs(),
        }
    }
}

/// The coordinate change w = −x/(2(1−x²)) − μv/(1−x²) tying the reduced
/// foliation to the family foliation, with its inverse.
#[derive(Clone, Debug)]
pub struct BridgeWV {
    pub mu: Rat,
}

impl BridgeWV {
    pub fn new(mu: &Rat) -> Result<BridgeWV, IntegralsError> {
        if mu.is_zero() {
            return Err(IntegralsError::ZeroMu);
        }
        Ok(BridgeWV { mu: mu.clone() })
    }

    pub fn w_of(&self, v: f64, x: f64) -> Result<f64, IntegralsError> {
        let rho = 1.0 - x * x;
        if rho == 0.0 {
            return Err(IntegralsError::SingularSamplePoint(x));
        }
        let m = rat_to_f64(&self.mu);
        Ok(-x / (2.0 * rho) - m * v / rho)
    }

    pub fn v_of(&self, w: f64, x: f64) -> Result<f64, IntegralsError> {
        let rho = 1.0 - x * x;
        if rho == 0.0 {
            return Err(IntegralsError::SingularSamplePoint(x));
        }
        let m = rat_to_f64(&self.mu);
        Ok(-(rho * w) / m - x / (2.0 * m))
    }
}

/// The exact pullback identity: substituting the bridge into the reduced
/// foliation w′ = q(x) − w² must reproduce the Chebyshev family foliation.
/// Returns the cleared residual 4(−ρ/2 + 2xN_w) − 4μP − N_q + 4N_w², which
/// is the zero polynomial exactly when the identity holds.
pub fn bridge_pullback_residual(lambda: &Rat, mu: &Rat) -> BiPoly {
    let rho = BiPoly::from_unipoly_x(&UniPoly::from_ints(&[1, 0, -1]));
    let x = BiPoly::var(Var::X);
    let v = BiPoly::var(Var::V);
    // N_w = −x/2 − μv  (w = N_w/ρ)
    let n_w = &x.scale(&-Rat::new(1.into(), 2.into())) - &v.scale(mu);
    // family numerator P = (λ/μ)ρ − xv + μv²
    let p = &(&rho.scale(&(lambda / mu)) - &(&x * &v)) + &v.pow(2).scale(mu);
    // reduced numerator N_q = (−2−4λ) + (4λ−1)x²
    let n_q = &BiPoly::constant(-rat_i(2) - rat_i(4) * lambda)
        + &x.pow(2).scale(&(rat_i(4) * lambda - Rat::one()));
    let term1 = (&rho.scale(&Rat::new((-1i64).into(), 2.into())) + &(&x * &n_w).scale(&rat_i(2))).scale(&rat_i(4));
    let term2 = p.scale(&(rat_i(4) * mu));
    let term3 = n_w.pow(2).scale(&rat_i(4));
    &(&(&term1 - &term2) - &n_q) + &term3
}

#[derive(Clone, Debug)]
pub struct IntegralFlowReport {
    pub samples: usize,
    pub max_drift: f64,
    pub tol: f64,
    pub passed: bool,
    /// The trajectory ran along the integral's pole locus (the invariant
    /// curve): constancy is checked on the cleared denominator instead.
    pub on_pole_locus: bool,
    /// The drift was measured on 1/I after a pole approach was detected.
    pub used_reciprocal: bool,
}

/// Constancy check of a closed-form first integral along an integrated
/// trajectory. When the cleared denominator dips below 1e−8 the check
/// switches to the reciprocal integral 1/I (also a first integral); a
/// trajectory that starts on the pole locus is checked to stay there.
pub fn check_first_integral_flow(
    expr: &FirstIntegral,
    sys: &QuadSystem,
    start: (f64, f64),
    t_end: f64,
    tol: f64,
    integrator_tol: f64,
) -> Result<IntegralFlowReport, IntegralsError> {
    let opts = IntegrateOpts {
        tol: integrator_tol,
        max_step: t_end.abs() / 128.0,
        window: Some([-1e6, 1e6, -1e6, 1e6]),
        x_line_guards: crate::portrait::invariant_x_lines(sys),
        ..IntegrateOpts::default()
    };
    let trajectory = integrate(sys, start, t_end, &opts);
    match trajectory.termination {
        Termination::HorizonReached => {}
        Termination::LeftWindow | Termination::NearSingularity => {
            return Err(IntegralsError::TrajectoryLeftDomain)
        }
        Termination::StepFailure => return Err(IntegralsError::IntegrationFailure),
    }
    let evals: Vec<IntegralEval> =
        trajectory.samples.iter().map(|&(_, v, x)| expr.eval(v, x)).collect();
    let scale = evals.iter().map(|e| e.num_abs.max(e.den_abs)).fold(0.0, f64::max).max(1e-300);
    // trajectory pinned to the pole locus (= the invariant algebraic curve)
    if evals[0].den_abs < 1e-8 * scale {
        let max_den = evals.iter().map(|e| e.den_abs).fold(0.0, f64::max);
        return Ok(IntegralFlowReport {
            samples: evals.len(),
            max_drift: max_den / scale,
            tol,
            passed: max_den < 1e-6 * scale,
            on_pole_locus: true,
            used_reciprocal: false,
        });
    }
    let pole_approach = evals.iter().any(|e| e.den_abs < 1e-8 * scale);
    let series: Vec<f64> = if pole_approach {
        evals.iter().map(|e| 1.0 / e.value.norm()).collect()
    } else {
        evals.iter().map(|e| e.value.norm()).collect()
    };
    let max = series.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = series.iter().cloned().fold(f64::INFINITY, f64::min);
    let drift = if max > 0.0 { (max - min) / max } else { 0.0 };
    Ok(IntegralFlowReport {
        samples: series.len(),
        max_drift: drift,
        tol,
        passed: drift < tol,
        on_pole_locus: false,
        used_reciprocal: pole_approach,
    })
}

/// The Chebyshev family system (sis asociado tchebichef) at (n, μ).
pub fn chebyshev_system(n: u32, mu: &Rat) -> Result<QuadSystem, IntegralsError> {
    let spec = family(FamilyId::ChebyshevT, None, None).unwrap();
    build_family_system(&spec, n, mu).map_err(|_| IntegralsError::ZeroMu)
}
