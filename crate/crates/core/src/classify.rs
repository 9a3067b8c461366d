//! Classification of critical points.
//!
//! Three procedures, routed by the exact linear part at the point:
//!
//! * hyperbolic — eigenvalue sign pattern (saddle / node / focus / linear
//!   center), decided on exact rationals or quadratic surds;
//! * semi-hyperbolic — one zero eigenvalue; the center-manifold series
//!   g(s) = A(s, f(s)) = aₘsᵐ + o(sᵐ) decides by the parity of m and the
//!   sign of aₘ;
//! * nilpotent — both eigenvalues zero; the F and G series with the
//!   discriminant test b² + 4a(n+1) in the mixed case.
//!
//! Zero tests on series coefficients are exact rationals, so "first nonzero
//! coefficient" is unambiguous; this is why the classifiers consume exact
//! local systems, not floats.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::exactpoly::{
    compose_series, real_roots, solve_implicit_series, solve_quadratic_rat, BiPoly,
    Rat, SeriesError, Surd, UniPoly, Var, MAX_SERIES_ORDER,
};
use crate::vfield::{jacobian_at_f64, QuadSystem};

/// Poincaré-sphere chart of a critical point. `V1`/`V2` are the antipodal
/// representatives of `U1`/`U2`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Chart {
    Finite,
    U1,
    V1,
    U2,
    V2,
}

impl Chart {
    pub fn name(&self) -> &'static str {
        match self {
            Chart::Finite => "finite",
            Chart::U1 => "u1",
            Chart::V1 => "v1",
            Chart::U2 => "u2",
            Chart::V2 => "v2",
        }
    }

    pub fn antipode(&self) -> Chart {
        match self {
            Chart::Finite => Chart::Finite,
            Chart::U1 => Chart::V1,
            Chart::V1 => Chart::U1,
            Chart::U2 => Chart::V2,
            Chart::V2 => Chart::U2,
        }
    }
}

/// Exact-or-float coordinate.
#[derive(Clone, PartialEq, Debug)]
pub enum Coord {
    Exact(Surd),
    Approx(f64),
}

impl Coord {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coord::Exact(s) => s.to_f64(),
            Coord::Approx(f) => *f,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coord::Exact(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Coord::Exact(s) => s.as_rat(),
            Coord::Approx(_) => None,
        }
    }

    pub fn display(&self) -> String {
        match self {
            Coord::Exact(s) => format!("{s}"),
            Coord::Approx(f) => format!("{f:?}"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct CritPoint {
    pub v: Coord,
    pub x: Coord,
    pub chart: Chart,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Stability {
    Stable,
    Unstable,
}

/// Topological type of a critical point.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Saddle,
    NodeStable,
    NodeUnstable,
    FocusStable,
    FocusUnstable,
    CenterOrWeakFocus,
    SaddleNode,
    TopologicalSaddle,
    TopologicalNode,
    Cusp,
    EllipticHyperbolicSector,
    NilpotentNode,
    Degenerate,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Saddle => "saddle",
            Kind::NodeStable => "node-stable",
            Kind::NodeUnstable => "node-unstable",
            Kind::FocusStable => "focus-stable",
            Kind::FocusUnstable => "focus-unstable",
            Kind::CenterOrWeakFocus => "center-or-weak-focus",
            Kind::SaddleNode => "saddle-node",
            Kind::TopologicalSaddle => "topological-saddle",
            Kind::TopologicalNode => "topological-node",
            Kind::Cusp => "cusp",
            Kind::EllipticHyperbolicSector => "elliptic-hyperbolic-sector",
            Kind::NilpotentNode => "nilpotent-node",
            Kind::Degenerate => "degenerate",
        }
    }

    /// Saddles organise separatrices; the renderer seeds them specially.
    pub fn is_saddle_like(&self) -> bool {
        matches!(self, Kind::Saddle | Kind::TopologicalSaddle)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// The data the classification was decided from.
#[derive(Clone, PartialEq, Debug)]
pub enum Evidence {
    Eigenvalues { l1: (f64, f64), l2: (f64, f64), exact: bool },
    SemiHyperbolic { m: usize, a_m: Rat, lambda: Rat },
    Nilpotent { m: Option<usize>, a: Option<Rat>, n: Option<usize>, b: Option<Rat> },
    LinearPartZero,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Classification {
    pub kind: Kind,
    pub stability: Option<Stability>,
    pub evidence: Evidence,
}

#[derive(Clone, PartialEq, Debug)]
pub struct CritReport {
    pub point: CritPoint,
    pub classification: Classification,
}

#[derive(Clone, PartialEq, Debug)]
pub enum ClassifyError {
    /// P and Q share a zero curve; the critical set is not isolated.
    NonIsolatedCritSet,
    NotApplicable(&'static str),
    NotACriticalPoint,
    SeriesInconclusive,
    Unsupported(String),
    Series(SeriesError),
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::NonIsolatedCritSet => write!(f, "critical set is not isolated"),
            ClassifyError::NotApplicable(msg) => write!(f, "not applicable: {msg}"),
            ClassifyError::NotACriticalPoint => write!(f, "point is not a critical point"),
            ClassifyError::SeriesInconclusive => write!(f, "series inconclusive at maximum order"),
            ClassifyError::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            ClassifyError::Series(e) => write!(f, "{e}"),
        }
    }
}

impl From<SeriesError> for ClassifyError {
    fn from(e: SeriesError) -> Self {
        ClassifyError::Series(e)
    }
}

// ---------------------------------------------------------------------------
// Finite critical points

/// All real solutions of P = Q = 0.
///
/// For the family shapes (Q = ρ(x) of degree ≤ 2, P quadratic in v) the
/// points are solved exactly: roots of ρ, then the quadratic formula in v.
/// The generic fallback eliminates v by resultant and isolates real roots in
/// floats.
pub fn find_finite_crit_points(sys: &QuadSystem) -> Result<Vec<CritPoint>, ClassifyError> {
    if sys.q.is_zero() && sys.p.is_zero() {
        return Err(ClassifyError::NonIsolatedCritSet);
    }
    if let Some(q_uni) = sys.q.as_unipoly_in_x() {
        return structured_points(sys, &q_uni);
    }
    generic_points(sys)
}

fn structured_points(sys: &QuadSystem, q_uni: &UniPoly) -> Result<Vec<CritPoint>, ClassifyError> {
    let mut out = Vec::new();
    if q_uni.is_zero() {
        // ẋ ≡ 0: every zero of P is critical — isolated only if P has no
        // zero curve, which a nonzero bivariate P always has
        return Err(ClassifyError::NonIsolatedCritSet);
    }
    let deg = q_uni.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(out); // ẋ never vanishes: no critical points
    }
    if deg > 2 {
        return Err(ClassifyError::Unsupported(String::from("deg Q > 2 in the structured path")));
    }
    let x_roots = solve_quadratic_rat(&q_uni.coeff(2), &q_uni.coeff(1), &q_uni.coeff(0));
    for x0 in x_roots {
        if let Some(x0_rat) = x0.as_rat() {
            // exact slice: P(v, x0) as a univariate polynomial in v
            let max_v = sys.p.deg_in(Var::V).unwrap_or(0);
            let mut coeffs = Vec::new();
            for i in 0..=max_v {
                coeffs.push(sys.p.coeff_of_v_power(i).eval(x0_rat));
            }
            let pv = UniPoly::from_coeffs(coeffs);
            if pv.is_zero() {
                return Err(ClassifyError::NonIsolatedCritSet);
            }
            match pv.degree().unwrap_or(0) {
                0 => {} // no v solves it
                d if d <= 2 => {
                    for v0 in solve_quadratic_rat(&pv.coeff(2), &pv.coeff(1), &pv.coeff(0)) {
                        out.push(CritPoint {
                            v: Coord::Exact(v0),
                            x: Coord::Exact(x0.clone()),
                            chart: Chart::Finite,
                        });
                    }
                }
                _ => {
                    for v0 in real_roots(&pv) {
                        out.push(CritPoint {
                            v: Coord::Approx(v0),
                            x: Coord::Exact(x0.clone()),
                            chart: Chart::Finite,
                        });
                    }
                }
            }
        } else {
            // irrational root of ρ: solve the v-slice in floats
            let x0f = x0.to_f64();
            for v0 in float_v_roots(&sys.p, x0f) {
                out.push(CritPoint { v: Coord::Approx(v0), x: Coord::Exact(x0.clone()), chart: Chart::Finite });
            }
        }
    }
    sort_points(&mut out);
    Ok(out)
}

fn float_v_roots(p: &BiPoly, x0: f64) -> Vec<f64> {
    let max_v = p.deg_in(Var::V).unwrap_or(0);
    let mut c = Vec::new();
    for i in 0..=max_v {
        c.push(p.coeff_of_v_power(i).eval_f64(x0));
    }
    while c.last().is_some_and(|t| t.abs() < 1e-12) {
        c.pop();
    }
    match c.len() {
        0 | 1 => Vec::new(),
        2 => alloc::vec![-c[0] / c[1]],
        3 => {
            let disc = c[1] * c[1] - 4.0 * c[2] * c[0];
            if disc < 0.0 {
                Vec::new()
            } else if disc == 0.0 {
                alloc::vec![-c[1] / (2.0 * c[2])]
            } else {
                let s = libm::sqrt(disc);
                let mut r = alloc::vec![(-c[1] - s) / (2.0 * c[2]), (-c[1] + s) / (2.0 * c[2])];
                r.sort_by(|a, b| a.partial_cmp(b).unwrap());
                r
            }
        }
        _ => Vec::new(),
    }
}

fn generic_points(sys: &QuadSystem) -> Result<Vec<CritPoint>, ClassifyError> {
    // quadratic-in-v components only; enough for every quadratic system
    let (p2, p1, p0) =
        (sys.p.coeff_of_v_power(2), sys.p.coeff_of_v_power(1), sys.p.coeff_of_v_power(0));
    let (q2, q1, q0) =
        (sys.q.coeff_of_v_power(2), sys.q.coeff_of_v_power(1), sys.q.coeff_of_v_power(0));
    if sys.p.deg_in(Var::V).unwrap_or(0) > 2 || sys.q.deg_in(Var::V).unwrap_or(0) > 2 {
        return Err(ClassifyError::Unsupported(String::from("deg_v > 2 in the generic path")));
    }
    // Res_v(P, Q) for quadratics: (p2q0 − p0q2)² − (p1q0 − p0q1)(p2q1 − p1q2)
    let t1 = &(&p2 * &q0) - &(&p0 * &q2);
    let t2 = &(&p1 * &q0) - &(&p0 * &q1);
    let t3 = &(&p2 * &q1) - &(&p1 * &q2);
    let res = &(&t1 * &t1) - &(&t2 * &t3);
    if res.is_zero() {
        return Err(ClassifyError::NonIsolatedCritSet);
    }
    let mut out = Vec::new();
    for x0 in real_roots(&res) {
        for v0 in float_v_roots(&sys.q, x0) {
            let scale = 1.0 + v0.abs() + x0.abs();
            if sys.p.eval_f64(v0, x0).abs() < 1e-8 * scale {
                out.push(CritPoint { v: Coord::Approx(v0), x: Coord::Approx(x0), chart: Chart::Finite });
            }
        }
        // Q constant in v on this slice
        if sys.q.deg_in(Var::V).unwrap_or(0) == 0 {
            for v0 in float_v_roots(&sys.p, x0) {
                let scale = 1.0 + v0.abs() + x0.abs();
                if sys.q.eval_f64(v0, x0).abs() < 1e-8 * scale {
                    out.push(CritPoint { v: Coord::Approx(v0), x: Coord::Approx(x0), chart: Chart::Finite });
                }
            }
        }
    }
    dedupe_approx(&mut out);
    sort_points(&mut out);
    Ok(out)
}

fn dedupe_approx(points: &mut Vec<CritPoint>) {
    let mut i = 0;
    while i < points.len() {
        let mut j = i + 1;
        while j < points.len() {
            let dv = points[i].v.to_f64() - points[j].v.to_f64();
            let dx = points[i].x.to_f64() - points[j].x.to_f64();
            if libm::hypot(dv, dx) < 1e-9 {
                points.remove(j);
            } else {
                j += 1;
            }
        }
        i += 1;
    }
}

fn sort_points(points: &mut [CritPoint]) {
    points.sort_by(|a, b| {
        (a.x.to_f64(), a.v.to_f64())
            .partial_cmp(&(b.x.to_f64(), b.v.to_f64()))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
}

// ---------------------------------------------------------------------------
// Hyperbolic classification

/// Classifies from an eigenvalue pair (each as re, im). Errors with
/// `NotApplicable` when an eigenvalue vanishes — those points route to the
/// semi-hyperbolic or nilpotent procedures instead.
pub fn classify_hyperbolic(l1: (f64, f64), l2: (f64, f64)) -> Result<Classification, ClassifyError> {
    let zero = |l: (f64, f64)| l.0 == 0.0 && l.1 == 0.0;
    if zero(l1) || zero(l2) {
        return Err(ClassifyError::NotApplicable("zero eigenvalue"));
    }
    let evidence = Evidence::Eigenvalues { l1, l2, exact: false };
    if l1.1 == 0.0 && l2.1 == 0.0 {
        let prod = l1.0 * l2.0;
        if prod < 0.0 {
            return Ok(Classification { kind: Kind::Saddle, stability: None, evidence });
        }
        let stable = l1.0 < 0.0;
        return Ok(Classification {
            kind: if stable { Kind::NodeStable } else { Kind::NodeUnstable },
            stability: Some(if stable { Stability::Stable } else { Stability::Unstable }),
            evidence,
        });
    }
    // complex pair
    if l1.0 == 0.0 {
        return Ok(Classification { kind: Kind::CenterOrWeakFocus, stability: None, evidence });
    }
    let stable = l1.0 < 0.0;
    Ok(Classification {
        kind: if stable { Kind::FocusStable } else { Kind::FocusUnstable },
        stability: Some(if stable { Stability::Stable } else { Stability::Unstable }),
        evidence,
    })
}

/// What the exact linear part at a point says about which procedure applies.
pub enum LinearType {
    Hyperbolic(Classification),
    SemiHyperbolic,
    Nilpotent,
    Zero,
}

/// Exact routing decision from a 2×2 linear part with surd entries. All
/// saddle/node/focus decisions reduce to sign tests on trace, determinant
/// and discriminant — no float noise can flip them.
pub fn classify_linear_exact(j: &[[Surd; 2]; 2]) -> LinearType {
    let tr = &j[0][0] + &j[1][1];
    let det = &(&j[0][0] * &j[1][1]) - &(&j[0][1] * &j[1][0]);
    let det_sign = det.signum();
    let tr_sign = tr.signum();
    if det_sign == 0 {
        if tr_sign != 0 {
            return LinearType::SemiHyperbolic;
        }
        let all_zero = j.iter().flatten().all(|e| e.is_zero_value());
        return if all_zero { LinearType::Zero } else { LinearType::Nilpotent };
    }
    let four = Surd::from_i64(4);
    let disc = &(&tr * &tr) - &(&four * &det);
    let disc_sign = disc.signum();
    let (trf, discf) = (tr.to_f64(), disc.to_f64());
    let eigs_real = || {
        let s = libm::sqrt(discf.max(0.0));
        (((trf - s) / 2.0, 0.0), ((trf + s) / 2.0, 0.0))
    };
    let eigs_complex = || {
        let s = libm::sqrt((-discf).max(0.0));
        ((trf / 2.0, s / 2.0), (trf / 2.0, -s / 2.0))
    };
    let (kind, stability, (l1, l2)) = if det_sign < 0 {
        (Kind::Saddle, None, eigs_real())
    } else if disc_sign >= 0 {
        let stable = tr_sign < 0;
        (
            if stable { Kind::NodeStable } else { Kind::NodeUnstable },
            Some(if stable { Stability::Stable } else { Stability::Unstable }),
            eigs_real(),
        )
    } else if tr_sign == 0 {
        (Kind::CenterOrWeakFocus, None, eigs_complex())
    } else {
        let stable = tr_sign < 0;
        (
            if stable { Kind::FocusStable } else { Kind::FocusUnstable },
            Some(if stable { Stability::Stable } else { Stability::Unstable }),
            eigs_complex(),
        )
    };
    LinearType::Hyperbolic(Classification {
        kind,
        stability,
        evidence: Evidence::Eigenvalues { l1, l2, exact: true },
    })
}

// ---------------------------------------------------------------------------
// Normalization

/// The exact affine change that brought a point to a normal position.
#[derive(Clone, PartialEq, Debug)]
pub struct TransformRecord {
    pub translation: (Rat, Rat),
    pub matrix: [[Rat; 2]; 2],
}

#[derive(Clone, PartialEq, Debug)]
pub enum NormalForm {
    Hyperbolic,
    SemiHyperbolic { lambda: Rat },
    Nilpotent,
    LinearZero,
}

fn ident() -> [[Rat; 2]; 2] {
    [[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]]
}

use num_traits::One;

/// Translates a rational critical point to the origin and applies the exact
/// linear change putting the linear part into the normal position of the
/// applicable theorem: left alone for hyperbolic points (eigenvalues decide
/// there), diag(0, λ) for semi-hyperbolic, [0 1; 0 0] for nilpotent.
pub fn normalize_at_point(
    sys: &QuadSystem,
    v0: &Rat,
    x0: &Rat,
) -> Result<(QuadSystem, TransformRecord, NormalForm), ClassifyError> {
    let p = sys.p.translate(v0, x0);
    let q = sys.q.translate(v0, x0);
    if !p.coeff(0, 0).is_zero() || !q.coeff(0, 0).is_zero() {
        return Err(ClassifyError::NotACriticalPoint);
    }
    let l = [[p.coeff(1, 0), p.coeff(0, 1)], [q.coeff(1, 0), q.coeff(0, 1)]];
    let tr = &l[0][0] + &l[1][1];
    let det = &(&l[0][0] * &l[1][1]) - &(&l[0][1] * &l[1][0]);
    let record = |m: [[Rat; 2]; 2]| TransformRecord { translation: (v0.clone(), x0.clone()), matrix: m };

    if !det.is_zero() {
        let sys_t = QuadSystem { p, q, provenance: sys.provenance.clone() };
        return Ok((sys_t, record(ident()), NormalForm::Hyperbolic));
    }
    let all_zero = l.iter().flatten().all(|e| e.is_zero());
    if all_zero {
        let sys_t = QuadSystem { p, q, provenance: sys.provenance.clone() };
        return Ok((sys_t, record(ident()), NormalForm::LinearZero));
    }
    if !tr.is_zero() {
        // semi-hyperbolic: columns = [kernel vector | λ-eigenvector]
        let w0 = normalize_first(kernel_vector(&l));
        let shifted = [[&l[0][0] - &tr, l[0][1].clone()], [l[1][0].clone(), &l[1][1] - &tr]];
        let wl = normalize_last(kernel_vector(&shifted));
        let m = [[w0[0].clone(), wl[0].clone()], [w0[1].clone(), wl[1].clone()]];
        let (sys_n, rec) = apply_linear(&p, &q, &m, sys, v0, x0);
        debug_assert!(sys_n.p.coeff(1, 0).is_zero() && sys_n.p.coeff(0, 1).is_zero());
        debug_assert!(sys_n.q.coeff(1, 0).is_zero() && sys_n.q.coeff(0, 1) == tr);
        return Ok((sys_n, rec, NormalForm::SemiHyperbolic { lambda: tr }));
    }
    // nilpotent: w2 with L·w2 ≠ 0, w1 = L·w2, basis (w1, w2)
    let w2: [Rat; 2] = if !l[0][1].is_zero() || !l[1][1].is_zero() {
        [Rat::zero(), Rat::one()]
    } else {
        [Rat::one(), Rat::zero()]
    };
    let w1 = [
        &(&l[0][0] * &w2[0]) + &(&l[0][1] * &w2[1]),
        &(&l[1][0] * &w2[0]) + &(&l[1][1] * &w2[1]),
    ];
    let m = [[w1[0].clone(), w2[0].clone()], [w1[1].clone(), w2[1].clone()]];
    let (sys_n, rec) = apply_linear(&p, &q, &m, sys, v0, x0);
    debug_assert!(sys_n.p.coeff(0, 1).is_one() && sys_n.p.coeff(1, 0).is_zero());
    debug_assert!(sys_n.q.coeff(1, 0).is_zero() && sys_n.q.coeff(0, 1).is_zero());
    Ok((sys_n, rec, NormalForm::Nilpotent))
}

/// A nonzero kernel vector of a rank-one rational matrix.
fn kernel_vector(l: &[[Rat; 2]; 2]) -> [Rat; 2] {
    if !l[0][0].is_zero() || !l[0][1].is_zero() {
        [-&l[0][1], l[0][0].clone()]
    } else {
        [-&l[1][1], l[1][0].clone()]
    }
}

fn normalize_first(w: [Rat; 2]) -> [Rat; 2] {
    let pivot = if !w[0].is_zero() { w[0].clone() } else { w[1].clone() };
    [&w[0] / &pivot, &w[1] / &pivot]
}

fn normalize_last(w: [Rat; 2]) -> [Rat; 2] {
    let pivot = if !w[1].is_zero() { w[1].clone() } else { w[0].clone() };
    [&w[0] / &pivot, &w[1] / &pivot]
}

fn apply_linear(
    p: &BiPoly,
    q: &BiPoly,
    m: &[[Rat; 2]; 2],
    sys: &QuadSystem,
    v0: &Rat,
    x0: &Rat,
) -> (QuadSystem, TransformRecord) {
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let pm = p.linear_change(m);
    let qm = q.linear_change(m);
    // (ξ̇, η̇) = M⁻¹ (P∘M, Q∘M)
    let new_p = &(&pm.scale(&m[1][1]) - &qm.scale(&m[0][1])).scale(&det.recip()) + &BiPoly::zero();
    let new_q = &(&qm.scale(&m[0][0]) - &pm.scale(&m[1][0])).scale(&det.recip()) + &BiPoly::zero();
    (
        QuadSystem { p: new_p, q: new_q, provenance: sys.provenance.clone() },
        TransformRecord {
            translation: (v0.clone(), x0.clone()),
            matrix: [[m[0][0].clone(), m[0][1].clone()], [m[1][0].clone(), m[1][1].clone()]],
        },
    )
}

// ---------------------------------------------------------------------------
// Semi-hyperbolic classification

/// Classifies a system in the normal position v̇ = A(v, x), ẋ = λx + B(v, x)
/// (jets of A, B vanish to first order). Extracts (m, aₘ) from
/// g(s) = A(s, f(s)) where λf + B(s, f) = 0.
///
/// The theorem is stated for λ > 0; for λ < 0 it is applied to the
/// time-reversed system and the stability conclusion is swapped. Evidence
/// always reports the original (m, aₘ).
pub fn classify_semi_hyperbolic(
    sys_local: &QuadSystem,
    lambda: &Rat,
    order: usize,
) -> Result<Classification, ClassifyError> {
    if lambda.is_zero() {
        return Err(ClassifyError::NotApplicable("lambda must be nonzero"));
    }
    let a = sys_local.p.clone();
    let b = &sys_local.q - &BiPoly::monomial(lambda.clone(), 0, 1);
    for poly in [&a, &b] {
        for (&(i, j), _) in poly.terms() {
            if i + j < 2 {
                return Err(ClassifyError::NotApplicable("system not in semi-hyperbolic normal position"));
            }
        }
    }
    let mut n = order.max(2);
    loop {
        let f = solve_implicit_series(lambda, &b, n)?;
        let g = compose_series(&a, &f, Var::X);
        if let Some((m, a_m)) = g.leading_term() {
            let a_m = a_m.clone();
            let evidence = Evidence::SemiHyperbolic { m, a_m: a_m.clone(), lambda: lambda.clone() };
            if m % 2 == 0 {
                return Ok(Classification { kind: Kind::SaddleNode, stability: None, evidence });
            }
            let same_sign = a_m.is_positive() == lambda.is_positive();
            if same_sign {
                let stable = lambda.is_negative();
                return Ok(Classification {
                    kind: Kind::TopologicalNode,
                    stability: Some(if stable { Stability::Stable } else { Stability::Unstable }),
                    evidence,
                });
            }
            return Ok(Classification { kind: Kind::TopologicalSaddle, stability: None, evidence });
        }
        if n >= MAX_SERIES_ORDER {
            return Err(ClassifyError::SeriesInconclusive);
        }
        n = (n + 4).min(MAX_SERIES_ORDER);
    }
}

// ---------------------------------------------------------------------------
// Nilpotent classification

/// Classifies a system in the nilpotent normal position
/// v̇ = x + A(v, x), ẋ = B(v, x) with j₁A = j₁B = 0.
///
/// f solves x + A(v, f) = 0; F(s) = B(s, f(s)) carries (m, a) and
/// G(s) = (∂A/∂v + ∂B/∂x)(s, f(s)) carries (n, b). The full rule table
/// applies, including the discriminant test b² + 4a(n+1).
pub fn classify_nilpotent(sys_local: &QuadSystem, order: usize) -> Result<Classification, ClassifyError> {
    let a = &sys_local.p - &BiPoly::monomial(Rat::one(), 0, 1);
    let b = sys_local.q.clone();
    for poly in [&a, &b] {
        for (&(i, j), _) in poly.terms() {
            if i + j < 2 {
                return Err(ClassifyError::NotApplicable("system not in nilpotent normal position"));
            }
        }
    }
    let div = &a.diff(Var::V) + &b.diff(Var::X);
    let mut ord = order.max(4);
    loop {
        let f = solve_implicit_series(&Rat::one(), &a, ord)?;
        let big_f = compose_series(&b, &f, Var::X);
        let big_g = compose_series(&div, &f, Var::X);
        let lead_f = big_f.leading_term().map(|(m, c)| (m, c.clone()));
        let lead_g = big_g.leading_term().map(|(n, c)| (n, c.clone()));
        match (lead_f, lead_g) {
            (None, None) => {
                if ord >= MAX_SERIES_ORDER {
                    // case (i): F ≡ G ≡ 0 through the maximum order
                    return Ok(Classification {
                        kind: Kind::Degenerate,
                        stability: None,
                        evidence: Evidence::Nilpotent { m: None, a: None, n: None, b: None },
                    });
                }
            }
            (None, Some((n, bc))) => {
                if ord >= MAX_SERIES_ORDER {
                    // case (ii): a curve of equilibria through the origin
                    return Ok(Classification {
                        kind: Kind::Degenerate,
                        stability: None,
                        evidence: Evidence::Nilpotent { m: None, a: None, n: Some(n), b: Some(bc) },
                    });
                }
            }
            (Some((m, ac)), lead_g) => {
                let evidence = Evidence::Nilpotent {
                    m: Some(m),
                    a: Some(ac.clone()),
                    n: lead_g.as_ref().map(|(n, _)| *n),
                    b: lead_g.as_ref().map(|(_, c)| c.clone()),
                };
                return Ok(nilpotent_rules(m, &ac, lead_g, evidence));
            }
        }
        ord = (ord + 4).min(MAX_SERIES_ORDER + 1);
        if ord > MAX_SERIES_ORDER {
            // one final pass at the ceiling already happened
            return Err(ClassifyError::SeriesInconclusive);
        }
    }
}

fn nilpotent_rules(m: usize, a: &Rat, g: Option<(usize, Rat)>, evidence: Evidence) -> Classification {
    let mk = |kind, stability| Classification { kind, stability, evidence: evidence.clone() };
    match g {
        None => {
            // case (iii)
            if m.is_multiple_of(2) {
                mk(Kind::Cusp, None)
            } else if a.is_positive() {
                mk(Kind::TopologicalSaddle, None)
            } else {
                mk(Kind::CenterOrWeakFocus, None)
            }
        }
        Some((n, b)) => {
            // case (iv)
            if m.is_multiple_of(2) {
                return if m < 2 * n + 1 { mk(Kind::Cusp, None) } else { mk(Kind::SaddleNode, None) };
            }
            if a.is_positive() {
                return mk(Kind::TopologicalSaddle, None);
            }
            // m odd, a < 0: discriminant test on the boundary case
            let disc = &(&b * &b) + &(Rat::from_integer(4.into()) * a * Rat::from_integer(((n + 1) as i64).into()));
            let center = m < 2 * n + 1 || (m == 2 * n + 1 && disc.is_negative());
            if center {
                mk(Kind::CenterOrWeakFocus, None)
            } else if n % 2 == 1 {
                mk(Kind::EllipticHyperbolicSector, None)
            } else {
                let stable = b.is_negative();
                mk(
                    Kind::NilpotentNode,
                    Some(if stable { Stability::Stable } else { Stability::Unstable }),
                )
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Router

/// Classifies one critical point of `sys`, routing on the exact linear part.
pub fn classify_point(sys: &QuadSystem, pt: &CritPoint, order: usize) -> Result<Classification, ClassifyError> {
    match (&pt.v, &pt.x) {
        (Coord::Exact(sv), Coord::Exact(sx)) => {
            if let (Some(v0), Some(x0)) = (sv.as_rat(), sx.as_rat()) {
                let v0 = v0.clone();
                let x0 = x0.clone();
                let (local, _rec, form) = normalize_at_point(sys, &v0, &x0)?;
                return match form {
                    NormalForm::Hyperbolic => {
                        let l = [
                            [Surd::from_rat(local.p.coeff(1, 0)), Surd::from_rat(local.p.coeff(0, 1))],
                            [Surd::from_rat(local.q.coeff(1, 0)), Surd::from_rat(local.q.coeff(0, 1))],
                        ];
                        match classify_linear_exact(&l) {
                            LinearType::Hyperbolic(c) => Ok(c),
                            _ => unreachable!("det ≠ 0"),
                        }
                    }
                    NormalForm::SemiHyperbolic { lambda } => classify_semi_hyperbolic(&local, &lambda, order),
                    NormalForm::Nilpotent => classify_nilpotent(&local, order),
                    NormalForm::LinearZero => Ok(Classification {
                        kind: Kind::Degenerate,
                        stability: None,
                        evidence: Evidence::LinearPartZero,
                    }),
                };
            }
            // exact but irrational: decide from the exact linear part only
            if !sv.compatible(sx) {
                return Err(ClassifyError::Unsupported(String::from(
                    "coordinates lie in different quadratic fields",
                )));
            }
            let j = crate::vfield::jacobian_at_surd(sys, sv, sx);
            match classify_linear_exact(&j) {
                LinearType::Hyperbolic(c) => Ok(c),
                LinearType::Zero => Ok(Classification {
                    kind: Kind::Degenerate,
                    stability: None,
                    evidence: Evidence::LinearPartZero,
                }),
                _ => Err(ClassifyError::Unsupported(String::from(
                    "series classification at an irrational point",
                ))),
            }
        }
        _ => {
            // float path: tolerance-based routing, no series procedures
            let (v0, x0) = (pt.v.to_f64(), pt.x.to_f64());
            let j = jacobian_at_f64(sys, v0, x0);
            let tr = j[0][0] + j[1][1];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let scale = j.iter().flatten().fold(0.0f64, |m, e| m.max(e.abs())).max(1.0);
            let tol = 1e-9 * scale * scale;
            if det.abs() <= tol {
                return Err(ClassifyError::Unsupported(String::from(
                    "near-degenerate linear part at a float point",
                )));
            }
            let disc = tr * tr - 4.0 * det;
            let eigs = if disc >= 0.0 {
                let s = libm::sqrt(disc);
                (((tr - s) / 2.0, 0.0), ((tr + s) / 2.0, 0.0))
            } else {
                let s = libm::sqrt(-disc);
                ((tr / 2.0, s / 2.0), (tr / 2.0, -s / 2.0))
            };
            classify_hyperbolic(eigs.0, eigs.1)
        }
    }
}

/// Finds and classifies every finite critical point.
pub fn classify_system(sys: &QuadSystem, order: usize) -> Result<Vec<CritReport>, ClassifyError> {
    let points = find_finite_crit_points(sys)?;
    let mut out = Vec::new();
    for point in points {
        let classification = classify_point(sys, &point, order)?;
        out.push(CritReport { point, classification });
    }
    Ok(out)
}
