//! Darboux invariants from cofactor linear algebra.
//!
//! Given invariant algebraic curves fᵢ = 0 with cofactors Kᵢ (and optionally
//! exponential factors exp(gⱼ/hⱼ) with cofactors Lⱼ), exponents solving
//!
//! ```text
//!     Σ λᵢKᵢ + Σ μⱼLⱼ = −s,      s ≠ 0,
//! ```
//!
//! make f₁^λ¹···e^{st} constant along the flow. The relation is solved
//! exactly by matching polynomial coefficients over the rationals; the
//! invariance of the resulting function is then confirmed numerically along
//! integrated trajectories.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::exactpoly::{rat_string, rat_to_f64, BiPoly, Rat};
use crate::portrait::{integrate, IntegrateOpts, Termination};
use crate::vfield::{lie_derivative, QuadSystem};

#[derive(Clone, PartialEq, Debug)]
pub enum DarbouxError {
    /// A supplied (f, K) fails Xf = K·f exactly.
    InvalidCofactor { index: usize },
    /// A supplied exponential factor fails X(g/h) = L.
    InvalidExpFactor { index: usize },
    /// s = 0 or an all-zero exponent vector cannot certify an invariant.
    DegenerateCertificate,
    PoleAtPoint,
    TrajectoryLeftDomain,
    IntegrationFailure,
}

impl fmt::Display for DarbouxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DarbouxError::InvalidCofactor { index } => {
                write!(f, "curve {index}: Xf != K*f")
            }
            DarbouxError::InvalidExpFactor { index } => {
                write!(f, "exponential factor {index}: X(g/h) != L")
            }
            DarbouxError::DegenerateCertificate => {
                write!(f, "degenerate certificate (s = 0 or all exponents zero)")
            }
            DarbouxError::PoleAtPoint => write!(f, "evaluation point is a pole of the invariant"),
            DarbouxError::TrajectoryLeftDomain => write!(f, "trajectory left the invariant's domain"),
            DarbouxError::IntegrationFailure => write!(f, "trajectory integration failed"),
        }
    }
}

/// An exponential factor exp(g/h) with polynomial cofactor L.
#[derive(Clone, PartialEq, Debug)]
pub struct ExpFactor {
    pub g: BiPoly,
    pub h: BiPoly,
    pub cofactor: BiPoly,
}

#[derive(Clone, Debug)]
pub struct DarbouxProblem {
    pub system: QuadSystem,
    /// (f, K) pairs with Xf = K·f.
    pub curves: Vec<(BiPoly, BiPoly)>,
    pub exp_factors: Vec<ExpFactor>,
}

impl DarbouxProblem {
    /// Checks every supplied cofactor identity exactly.
    pub fn validate(&self) -> Result<(), DarbouxError> {
        for (i, (f, k)) in self.curves.iter().enumerate() {
            let residual = &lie_derivative(&self.system, f) - &(k * f);
            if !residual.is_zero() {
                return Err(DarbouxError::InvalidCofactor { index: i });
            }
        }
        for (i, ef) in self.exp_factors.iter().enumerate() {
            // X(g/h) = L cleared by h²: X(g)·h − g·X(h) = L·h²
            let lhs = &(&lie_derivative(&self.system, &ef.g) * &ef.h)
                - &(&ef.g * &lie_derivative(&self.system, &ef.h));
            let rhs = &(&ef.cofactor * &ef.h) * &ef.h;
            if lhs != rhs {
                return Err(DarbouxError::InvalidExpFactor { index: i });
            }
        }
        Ok(())
    }
}

/// Exponents certifying a Darboux invariant f₁^λ¹···F₁^μ¹···e^{st}.
#[derive(Clone, Debug)]
pub struct DarbouxCertificate {
    pub lambdas: Vec<Rat>,
    pub mus: Vec<Rat>,
    pub s: Rat,
    pub curves: Vec<(BiPoly, BiPoly)>,
    pub exp_factors: Vec<ExpFactor>,
    /// Basis of the homogeneous solution space when underdetermined.
    pub nullspace: Vec<Vec<Rat>>,
}

impl DarbouxCertificate {
    /// Human-readable closed form, e.g. `sqrt(x-1)/sqrt(x+1)*exp(t)`.
    pub fn description(&self) -> String {
        let mut num = Vec::new();
        let mut den = Vec::new();
        let half = Rat::new(1.into(), 2.into());
        for ((f, _), lam) in self.curves.iter().zip(&self.lambdas) {
            if lam.is_zero() {
                continue;
            }
            let mag = lam.abs();
            let part = if mag == half {
                format!("sqrt({f})")
            } else if mag.is_one() {
                format!("({f})")
            } else {
                format!("({f})^({})", rat_string(&mag))
            };
            if lam.is_positive() {
                num.push(part);
            } else {
                den.push(part);
            }
        }
        for (ef, mu) in self.exp_factors.iter().zip(&self.mus) {
            if mu.is_zero() {
                continue;
            }
            num.push(format!("exp({}*({})/({}))", rat_string(mu), ef.g, ef.h));
        }
        let exp_part = if self.s.is_one() {
            String::from("exp(t)")
        } else {
            format!("exp({}t)", rat_string(&self.s))
        };
        let mut out = if num.is_empty() { String::from("1") } else { num.join("*") };
        if !den.is_empty() {
            out.push('/');
            out.push_str(&den.join("/"));
        }
        out.push('*');
        out.push_str(&exp_part);
        out
    }

    /// The exact certificate identity Σ λᵢKᵢ + Σ μⱼLⱼ + s, which must be the
    /// zero polynomial.
    pub fn identity_residual(&self) -> BiPoly {
        let mut acc = BiPoly::constant(self.s.clone());
        for ((_, k), lam) in self.curves.iter().zip(&self.lambdas) {
            acc = &acc + &k.scale(lam);
        }
        for (ef, mu) in self.exp_factors.iter().zip(&self.mus) {
            acc = &acc + &ef.cofactor.scale(mu);
        }
        acc
    }
}

/// Solves Σ λᵢKᵢ + Σ μⱼLⱼ = −s by exact coefficient matching. Returns
/// `None` when infeasible. Underdetermined systems yield the canonical
/// particular solution (free unknowns zero) with the homogeneous basis
/// attached; each basis vector is normalised so its earliest nonzero entry
/// is one.
pub fn solve_cofactor_relation(
    problem: &DarbouxProblem,
    s: &Rat,
) -> Result<Option<DarbouxCertificate>, DarbouxError> {
    if s.is_zero() {
        return Err(DarbouxError::DegenerateCertificate);
    }
    problem.validate()?;
    // collect the union of monomials across all cofactors
    let mut monomials: Vec<(u32, u32)> = Vec::new();
    let cofactors: Vec<&BiPoly> = problem
        .curves
        .iter()
        .map(|(_, k)| k)
        .chain(problem.exp_factors.iter().map(|ef| &ef.cofactor))
        .collect();
    for k in &cofactors {
        for (&key, _) in k.terms() {
            if !monomials.contains(&key) {
                monomials.push(key);
            }
        }
    }
    if !monomials.contains(&(0, 0)) {
        monomials.push((0, 0));
    }
    monomials.sort();
    let ncols = cofactors.len();
    let mut matrix: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for &(i, j) in &monomials {
        matrix.push(cofactors.iter().map(|k| k.coeff(i, j)).collect());
        rhs.push(if (i, j) == (0, 0) { -s.clone() } else { Rat::zero() });
    }
    let solution = match solve_exact(matrix, rhs, ncols) {
        None => return Ok(None),
        Some(sol) => sol,
    };
    let (particular, nullspace) = solution;
    if particular.iter().all(|c| c.is_zero()) {
        return Err(DarbouxError::DegenerateCertificate);
    }
    let p = problem.curves.len();
    Ok(Some(DarbouxCertificate {
        lambdas: particular[..p].to_vec(),
        mus: particular[p..].to_vec(),
        s: s.clone(),
        curves: problem.curves.clone(),
        exp_factors: problem.exp_factors.clone(),
        nullspace,
    }))
}

/// Gaussian elimination over the rationals: returns the particular solution
/// with free variables zero, plus a normalised nullspace basis, or `None`
/// when inconsistent.
fn solve_exact(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>, ncols: usize) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    let nrows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let pivot_row = (row..nrows).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot_row else { continue };
        m.swap(row, pr);
        rhs.swap(row, pr);
        let inv = m[row][col].clone().recip();
        for entry in m[row][col..].iter_mut() {
            *entry = &*entry * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
        let pivot = m[row].clone();
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for (entry, pv) in m[r][col..].iter_mut().zip(&pivot[col..]) {
                    *entry = &*entry - &(&factor * pv);
                }
                rhs[r] = &rhs[r] - &(&factor * &rhs[row]);
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // consistency: zero rows must have zero rhs
    if rhs[row..].iter().any(|r| !r.is_zero()) {
        return None;
    }
    let mut particular = alloc::vec![Rat::zero(); ncols];
    for (r, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = rhs[r].clone();
    }
    let mut nullspace = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut basis = alloc::vec![Rat::zero(); ncols];
        basis[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            basis[pc] = -&m[r][free];
        }
        // earliest nonzero entry normalised to one
        if let Some(first) = basis.iter().find(|c| !c.is_zero()).cloned() {
            for c in basis.iter_mut() {
                *c = &*c / &first;
            }
        }
        nullspace.push(basis);
    }
    Some((particular, nullspace))
}

/// Numeric value of Π fᵢ^λᵢ · Π exp(gⱼ/hⱼ)^μⱼ · e^{st}, principal branch for
/// fractional powers of negative reals (hence complex-valued).
pub fn invariant_value(cert: &DarbouxCertificate, v: f64, x: f64, t: f64) -> Result<Complex64, DarbouxError> {
    let mut acc = Complex64::new(libm::exp(rat_to_f64(&cert.s) * t), 0.0);
    for ((f, _), lam) in cert.curves.iter().zip(&cert.lambdas) {
        if lam.is_zero() {
            continue;
        }
        let val = f.eval_f64(v, x);
        let lam_f = rat_to_f64(lam);
        if val == 0.0 {
            if lam.is_positive() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            return Err(DarbouxError::PoleAtPoint);
        }
        let magnitude = libm::pow(val.abs(), lam_f);
        let factor = if val > 0.0 {
            Complex64::new(magnitude, 0.0)
        } else {
            // principal branch: (−r)^λ = r^λ e^{iπλ}
            let phase = core::f64::consts::PI * lam_f;
            Complex64::new(magnitude * libm::cos(phase), magnitude * libm::sin(phase))
        };
        acc *= factor;
    }
    for (ef, mu) in cert.exp_factors.iter().zip(&cert.mus) {
        if mu.is_zero() {
            continue;
        }
        let h = ef.h.eval_f64(v, x);
        if h == 0.0 {
            return Err(DarbouxError::PoleAtPoint);
        }
        let ratio = ef.g.eval_f64(v, x) / h;
        acc *= Complex64::new(libm::exp(rat_to_f64(mu) * ratio), 0.0);
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct FlowCheckReport {
    pub samples: usize,
    pub max_drift: f64,
    pub tol: f64,
    pub passed: bool,
    /// Set when the start lay on a zero curve of the invariant, where
    /// constancy means staying at zero.
    pub on_zero_locus: bool,
}

/// Integrates the system from `start` and measures the relative drift of
/// |I| over at least 100 samples. The modulus sidesteps branch cuts of the
/// fractional powers.
pub fn check_invariant_along_flow(
    cert: &DarbouxCertificate,
    sys: &QuadSystem,
    start: (f64, f64),
    t_end: f64,
    tol: f64,
    integrator_tol: f64,
) -> Result<FlowCheckReport, DarbouxError> {
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
            return Err(DarbouxError::TrajectoryLeftDomain)
        }
        Termination::StepFailure => return Err(DarbouxError::IntegrationFailure),
    }
    let mut values = Vec::with_capacity(trajectory.samples.len());
    for &(t, v, x) in &trajectory.samples {
        values.push(invariant_value(cert, v, x, t)?.norm());
    }
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    // on a zero curve of the invariant, constancy means staying at zero
    let scale0 = 1.0 + start.0.abs() + start.1.abs();
    if max < 1e-10 * scale0 {
        return Ok(FlowCheckReport {
            samples: values.len(),
            max_drift: 0.0,
            tol,
            passed: true,
            on_zero_locus: true,
        });
    }
    let drift = (max - min) / max;
    Ok(FlowCheckReport {
        samples: values.len(),
        max_drift: drift,
        tol,
        passed: drift < tol,
        on_zero_locus: false,
    })
}

/// The (f₁, f₂) = (x+1, x−1) problem on the ρ = 1−x² family of systems.
pub fn vertical_line_problem(sys: &QuadSystem) -> DarbouxProblem {
    use crate::exactpoly::rat_i;
    let f1 = &BiPoly::var(crate::exactpoly::Var::X) + &BiPoly::one();
    let k1 = &BiPoly::one() - &BiPoly::var(crate::exactpoly::Var::X);
    let f2 = &BiPoly::var(crate::exactpoly::Var::X) - &BiPoly::one();
    let k2 = &BiPoly::constant(rat_i(-1)) - &BiPoly::var(crate::exactpoly::Var::X);
    DarbouxProblem {
        system: sys.clone(),
        curves: alloc::vec![(f1, k1), (f2, k2)],
        exp_factors: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, rat_i, Var};
    use crate::rng::SplitMix64;
    use crate::vfield::build_parametric_a_with_b;

    fn darboux_system() -> QuadSystem {
        build_parametric_a_with_b(&rat_i(2), &rat_i(1), &rat_i(0), &rat_i(0)).unwrap()
    }

    fn certificate() -> DarbouxCertificate {
        let problem = vertical_line_problem(&darboux_system());
        solve_cofactor_relation(&problem, &rat_i(1)).unwrap().unwrap()
    }

    #[test]
    fn exponents_solved_exactly() {
        let cert = certificate();
        assert_eq!(cert.lambdas, alloc::vec![rat(-1, 2), rat(1, 2)]);
        assert!(cert.identity_residual().is_zero());
        assert!(cert.nullspace.is_empty());
        assert_eq!(cert.description(), "sqrt(x-1)/sqrt(x+1)*exp(t)");
    }

    #[test]
    fn scaling_with_s() {
        let problem = vertical_line_problem(&darboux_system());
        let cert = solve_cofactor_relation(&problem, &rat_i(2)).unwrap().unwrap();
        assert_eq!(cert.lambdas, alloc::vec![rat_i(-1), rat_i(1)]);
        assert!(cert.identity_residual().is_zero());
    }

    #[test]
    fn infeasible_and_degenerate_cases() {
        // single curve with cofactor 0 cannot reach −s
        let sys = QuadSystem::new(BiPoly::var(Var::V), BiPoly::var(Var::X));
        let problem = DarbouxProblem {
            system: sys.clone(),
            curves: alloc::vec![(BiPoly::one(), BiPoly::zero())],
            exp_factors: Vec::new(),
        };
        assert!(solve_cofactor_relation(&problem, &rat_i(1)).unwrap().is_none());
        // s = 0 is rejected outright
        assert_eq!(
            solve_cofactor_relation(&problem, &Rat::zero()).unwrap_err(),
            DarbouxError::DegenerateCertificate
        );
        // a wrong cofactor is detected before solving
        let bad = DarbouxProblem {
            system: sys,
            curves: alloc::vec![(BiPoly::var(Var::V), BiPoly::zero())],
            exp_factors: Vec::new(),
        };
        assert_eq!(
            solve_cofactor_relation(&bad, &rat_i(1)).unwrap_err(),
            DarbouxError::InvalidCofactor { index: 0 }
        );
    }

    #[test]
    fn underdetermined_returns_basis() {
        // v̇ = v, ẋ = −x: curves v (K = 1) and x (K = −1); λ₁ − λ₂ = −1
        let sys = QuadSystem::new(BiPoly::var(Var::V), -&BiPoly::var(Var::X));
        let problem = DarbouxProblem {
            system: sys,
            curves: alloc::vec![
                (BiPoly::var(Var::V), BiPoly::one()),
                (BiPoly::var(Var::X), BiPoly::constant(rat_i(-1)))
            ],
            exp_factors: Vec::new(),
        };
        let cert = solve_cofactor_relation(&problem, &rat_i(1)).unwrap().unwrap();
        assert_eq!(cert.lambdas, alloc::vec![rat_i(-1), Rat::zero()]);
        assert_eq!(cert.nullspace, alloc::vec![alloc::vec![Rat::one(), Rat::one()]]);
        assert!(cert.identity_residual().is_zero());
    }

    #[test]
    fn exp_factor_self_consistency() {
        // on v̇ = v, ẋ = x: X(x/1) = x, so exp(x) has cofactor x
        let sys = QuadSystem::new(BiPoly::var(Var::V), BiPoly::var(Var::X));
        let good = DarbouxProblem {
            system: sys.clone(),
            curves: Vec::new(),
            exp_factors: alloc::vec![ExpFactor {
                g: BiPoly::var(Var::X),
                h: BiPoly::one(),
                cofactor: BiPoly::var(Var::X),
            }],
        };
        assert!(good.validate().is_ok());
        let bad = DarbouxProblem {
            system: sys,
            curves: Vec::new(),
            exp_factors: alloc::vec![ExpFactor {
                g: BiPoly::var(Var::X),
                h: BiPoly::one(),
                cofactor: BiPoly::one(),
            }],
        };
        assert_eq!(bad.validate().unwrap_err(), DarbouxError::InvalidExpFactor { index: 0 });
    }

    #[test]
    fn solve_with_exponential_factor() {
        // v̇ = v, ẋ = x: curve v (K = 1) and exp(x) (L = x);
        // λ·1 + μ·x = −1 forces μ = 0, λ = −1
        let sys = QuadSystem::new(BiPoly::var(Var::V), BiPoly::var(Var::X));
        let problem = DarbouxProblem {
            system: sys,
            curves: alloc::vec![(BiPoly::var(Var::V), BiPoly::one())],
            exp_factors: alloc::vec![ExpFactor {
                g: BiPoly::var(Var::X),
                h: BiPoly::one(),
                cofactor: BiPoly::var(Var::X),
            }],
        };
        let cert = solve_cofactor_relation(&problem, &rat_i(1)).unwrap().unwrap();
        assert_eq!(cert.lambdas, alloc::vec![rat_i(-1)]);
        assert_eq!(cert.mus, alloc::vec![Rat::zero()]);
        assert!(cert.identity_residual().is_zero());
    }

    #[test]
    fn invariant_value_examples() {
        let cert = certificate();
        // x = 3, t = 0: √2/√4 = √2/2
        let val = invariant_value(&cert, 0.0, 3.0, 0.0).unwrap();
        assert!((val.re - 2f64.sqrt() / 2.0).abs() < 1e-14);
        assert!(val.im.abs() < 1e-14);
        // t-shift law with s = 1
        let base = invariant_value(&cert, 0.2, 0.5, 0.0).unwrap();
        let shifted = invariant_value(&cert, 0.2, 0.5, 0.7).unwrap();
        assert!((shifted.norm() - base.norm() * libm::exp(0.7)).abs() < 1e-12);
        // zero of the positively-powered curve
        let val = invariant_value(&cert, 0.0, 1.0, 5.0).unwrap();
        assert_eq!(val.norm(), 0.0);
        // pole of the negatively-powered curve
        assert_eq!(invariant_value(&cert, 0.0, -1.0, 0.0).unwrap_err(), DarbouxError::PoleAtPoint);
    }

    #[test]
    fn flow_drift_example() {
        let cert = certificate();
        let sys = darboux_system();
        let report = check_invariant_along_flow(&cert, &sys, (0.1, 2.0), 1.0, 1e-6, 1e-10).unwrap();
        assert!(report.samples >= 100, "{} samples", report.samples);
        assert!(report.passed, "drift {}", report.max_drift);
    }

    #[test]
    fn flow_on_invariant_line_stays_zero() {
        let cert = certificate();
        let sys = darboux_system();
        let report = check_invariant_along_flow(&cert, &sys, (0.4, 1.0), 1.0, 1e-6, 1e-10).unwrap();
        assert!(report.on_zero_locus);
        assert!(report.passed);
    }

    #[test]
    fn flow_drift_random_starts() {
        let cert = certificate();
        let sys = darboux_system();
        let mut rng = SplitMix64::new(0xda3b0);
        for i in 0..10 {
            let start = if i < 6 {
                (rng.next_range(-0.6, 0.2), rng.next_range(-0.85, 0.85))
            } else {
                (rng.next_range(-0.5, 0.3), rng.next_range(1.15, 1.9))
            };
            let report = check_invariant_along_flow(&cert, &sys, start, 1.0, 1e-6, 1e-10).unwrap();
            assert!(report.passed, "start {start:?} drift {}", report.max_drift);
        }
    }

    #[test]
    fn log_derivative_vanishes() {
        // d/dt log I = Σ λᵢKᵢ + s ≡ 0: finite differences of log|I| along a
        // trajectory stay below 1e−5
        let cert = certificate();
        let sys = darboux_system();
        let opts = IntegrateOpts { tol: 1e-12, max_step: 1e-2, ..IntegrateOpts::default() };
        let tr = integrate(&sys, (0.1, 0.4), 1.0, &opts);
        let logs: Vec<(f64, f64)> = tr
            .samples
            .iter()
            .map(|&(t, v, x)| (t, libm::log(invariant_value(&cert, v, x, t).unwrap().norm())))
            .collect();
        for w in logs.windows(2) {
            let dt = w[1].0 - w[0].0;
            if dt > 1e-9 {
                let deriv = (w[1].1 - w[0].1) / dt;
                assert!(deriv.abs() < 1e-5, "d/dt log I = {deriv}");
            }
        }
    }
}
