//! Poincaré compactification.
//!
//! Critical points at infinity of v̇ = P, ẋ = Q (degree m) sit on the
//! equator at directions (V : X) with V·Qₘ − X·Pₘ = 0. The two local charts
//!
//! * `U1` (x-direction infinity): u = v/x, z = 1/x,
//! * `U2` (v-direction infinity): u = x/v, z = 1/v,
//!
//! turn them into z = 0 equilibria of polynomial systems obtained by exact
//! monomial substitution and clearing of zᵐ, which module `classify` then
//! handles. The + sign variant of the chart flow is fixed throughout;
//! topological types on z = 0 are unaffected, stability labels are reported
//! per chart.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::classify::{classify_point, Chart, Classification, ClassifyError, Coord, CritPoint, CritReport};
use crate::exactpoly::{real_roots, solve_quadratic_rat, BiPoly, Rat, UniPoly, Var};
use crate::vfield::QuadSystem;

#[derive(Clone, PartialEq, Debug)]
pub enum CompactifyError {
    /// V·Qₘ − X·Pₘ ≡ 0: the whole equator is critical.
    IdenticallyZero,
    Classify(ClassifyError),
    Unsupported(alloc::string::String),
}

impl fmt::Display for CompactifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactifyError::IdenticallyZero => {
                write!(f, "degenerate equator: infinity is a line of critical points")
            }
            CompactifyError::Classify(e) => write!(f, "{e}"),
            CompactifyError::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl From<ClassifyError> for CompactifyError {
    fn from(e: ClassifyError) -> Self {
        CompactifyError::Classify(e)
    }
}

/// A chart system together with its provenance.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartSystem {
    pub chart: Chart,
    pub sys: QuadSystem,
    /// The fixed sign variant of the chart flow.
    pub sign: i8,
}

/// zᵐ·R(u/z, 1/z) as a polynomial: term c·vⁱxʲ ↦ c·uⁱz^(m−i−j).
fn clear_u1(poly: &BiPoly, m: u32) -> BiPoly {
    let mut out = BiPoly::zero();
    for (&(i, j), c) in poly.terms() {
        out = &out + &BiPoly::monomial(c.clone(), i, m - i - j);
    }
    out
}

/// zᵐ·R(1/z, u/z) as a polynomial: term c·vⁱxʲ ↦ c·uʲz^(m−i−j).
fn clear_u2(poly: &BiPoly, m: u32) -> BiPoly {
    let mut out = BiPoly::zero();
    for (&(i, j), c) in poly.terms() {
        out = &out + &BiPoly::monomial(c.clone(), j, m - i - j);
    }
    out
}

/// Chart at x-infinity: u̇ = zᵐ[P(u/z,1/z) − u·Q(u/z,1/z)], ż = −z·zᵐQ(u/z,1/z).
pub fn chart_u1(sys: &QuadSystem) -> ChartSystem {
    let m = sys.degree();
    let p_t = clear_u1(&sys.p, m);
    let q_t = clear_u1(&sys.q, m);
    let u = BiPoly::var(Var::V);
    let z = BiPoly::var(Var::X);
    let du = &p_t - &(&u * &q_t);
    let dz = -&(&z * &q_t);
    ChartSystem { chart: Chart::U1, sys: QuadSystem::new(du, dz), sign: 1 }
}

/// Chart at v-infinity: u̇ = zᵐ[Q(1/z,u/z) − u·P(1/z,u/z)], ż = −z·zᵐP(1/z,u/z).
pub fn chart_u2(sys: &QuadSystem) -> ChartSystem {
    let m = sys.degree();
    let p_t = clear_u2(&sys.p, m);
    let q_t = clear_u2(&sys.q, m);
    let u = BiPoly::var(Var::V);
    let z = BiPoly::var(Var::X);
    let du = &q_t - &(&u * &p_t);
    let dz = -&(&z * &p_t);
    ChartSystem { chart: Chart::U2, sys: QuadSystem::new(du, dz), sign: 1 }
}

/// Pulls a chart system back to the plane, as the exact identity test that
/// the chart transform reproduces the original field. For U1 the mapped
/// components must equal (x·P − v·Q, −Q); for U2, (v·Q − x·P, −P).
pub fn chart_consistency_residual(sys: &QuadSystem, chart: &ChartSystem) -> (BiPoly, BiPoly) {
    let m = sys.degree();
    let v = BiPoly::var(Var::V);
    let x = BiPoly::var(Var::X);
    let map_back = |poly: &BiPoly, swap: bool| {
        let mut out = BiPoly::zero();
        for (&(a, b), c) in poly.terms() {
            let rest = m + 1 - a - b;
            out = &out
                + &if swap {
                    BiPoly::monomial(c.clone(), rest, a)
                } else {
                    BiPoly::monomial(c.clone(), a, rest)
                };
        }
        out
    };
    match chart.chart {
        Chart::U1 | Chart::V1 => {
            let expected_du = &(&x * &sys.p) - &(&v * &sys.q);
            let r1 = &map_back(&chart.sys.p, false) - &expected_du;
            let r2 = &map_back(&chart.sys.q, false) - &-&sys.q;
            (r1, r2)
        }
        _ => {
            let expected_du = &(&v * &sys.q) - &(&x * &sys.p);
            let r1 = &map_back(&chart.sys.p, true) - &expected_du;
            let r2 = &map_back(&chart.sys.q, true) - &-&sys.p;
            (r1, r2)
        }
    }
}

/// The homogeneous equator polynomial V·Qₘ(V,X) − X·Pₘ(V,X); its real
/// projective roots (up to antipodal identification) are the directions of
/// the critical points at infinity.
pub fn infinity_equation(sys: &QuadSystem) -> Result<BiPoly, CompactifyError> {
    let m = sys.degree();
    let pm = sys.p.homogeneous_part(m);
    let qm = sys.q.homogeneous_part(m);
    let eq = &(&BiPoly::var(Var::V) * &qm) - &(&BiPoly::var(Var::X) * &pm);
    if eq.is_zero() {
        return Err(CompactifyError::IdenticallyZero);
    }
    Ok(eq)
}

/// A classified critical point at infinity: the chart-tagged report plus the
/// plane direction it sits at (unit vector, one representative of the
/// antipodal pair).
#[derive(Clone, Debug)]
pub struct InfinityReport {
    pub report: CritReport,
    pub antipode_chart: Chart,
    pub direction: (f64, f64),
}

/// Locates and classifies the critical points at infinity. Directions with a
/// nonzero x-component live in chart U1; the pure v-direction, when critical,
/// is the origin of chart U2.
pub fn infinity_crit_points(sys: &QuadSystem, order: usize) -> Result<Vec<InfinityReport>, CompactifyError> {
    infinity_equation(sys)?; // degenerate equator is an error, never classified
    let mut out = Vec::new();
    let u1 = chart_u1(sys);
    let phi = slice_at_z0(&u1.sys.p);
    match phi.degree() {
        None => {
            return Err(CompactifyError::Unsupported(alloc::string::String::from(
                "chart U1 is critical along all of z = 0",
            )))
        }
        Some(d) if d <= 2 => {
            for u0 in solve_quadratic_rat(&phi.coeff(2), &phi.coeff(1), &phi.coeff(0)) {
                let pt = CritPoint {
                    v: Coord::Exact(u0.clone()),
                    x: Coord::Exact(crate::exactpoly::Surd::zero()),
                    chart: Chart::U1,
                };
                let classification = classify_point(&u1.sys, &pt, order)?;
                out.push(wrap_u1(pt, classification));
            }
        }
        _ => {
            for u0 in real_roots(&phi) {
                let pt = CritPoint { v: Coord::Approx(u0), x: Coord::Approx(0.0), chart: Chart::U1 };
                let classification = classify_point(&u1.sys, &pt, order)?;
                out.push(wrap_u1(pt, classification));
            }
        }
    }
    // the v-direction (1 : 0) is covered only by chart U2, at its origin
    let u2 = chart_u2(sys);
    if u2.sys.p.coeff(0, 0).is_zero() && u2.sys.q.coeff(0, 0).is_zero() {
        let pt = CritPoint {
            v: Coord::Exact(crate::exactpoly::Surd::zero()),
            x: Coord::Exact(crate::exactpoly::Surd::zero()),
            chart: Chart::U2,
        };
        let classification = classify_point(&u2.sys, &pt, order)?;
        out.push(InfinityReport {
            report: CritReport { point: pt, classification },
            antipode_chart: Chart::V2,
            direction: (1.0, 0.0),
        });
    }
    Ok(out)
}

fn wrap_u1(pt: CritPoint, classification: Classification) -> InfinityReport {
    let u0 = pt.v.to_f64();
    let norm = libm::sqrt(u0 * u0 + 1.0);
    InfinityReport {
        report: CritReport { point: pt, classification },
        antipode_chart: Chart::V1,
        direction: (u0 / norm, 1.0 / norm),
    }
}

fn slice_at_z0(p: &BiPoly) -> UniPoly {
    let max_v = p.deg_in(Var::V).unwrap_or(0);
    let mut coeffs = Vec::new();
    for i in 0..=max_v {
        coeffs.push(p.coeff_of_v_power(i).coeff(0));
    }
    UniPoly::from_coeffs(coeffs)
}

/// Convenience: directions solving the equator equation, as chart-U1 slopes
/// u = v/x (for X-component tests) plus a flag for the pure v-direction.
pub fn equator_directions(sys: &QuadSystem) -> Result<(UniPoly, bool), CompactifyError> {
    let eq = infinity_equation(sys)?;
    // dehomogenize at x = 1: roots in u = v/x
    let m1 = sys.degree() + 1;
    let mut coeffs = alloc::vec![Rat::zero(); m1 as usize + 1];
    let mut has_v_direction = true; // x | eq ⟺ the (1:0) direction is critical
    for (&(i, j), c) in eq.terms() {
        coeffs[i as usize] = c.clone();
        if j == 0 {
            has_v_direction = false;
        }
    }
    Ok((UniPoly::from_coeffs(coeffs), has_v_direction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Kind;
    use crate::exactpoly::{rat, rat_i, DEFAULT_SERIES_ORDER};
    use crate::families::{family, FamilyId};
    use crate::vfield::{build_family_system, build_parametric_a, build_parametric_b};

    fn bp(terms: &[(i64, i64, u32, u32)]) -> BiPoly {
        let mut out = BiPoly::zero();
        for &(n, d, i, j) in terms {
            out = &out + &BiPoly::monomial(rat(n, d), i, j);
        }
        out
    }

    #[test]
    fn chart_u1_matches_proof_display_for_a_family() {
        // v̇ = −λ/μ + (a+1)v + μv² + (λ/μ)z² − vz², ż = −z³ + z
        let (lam, mu, a) = (rat_i(2), rat_i(1), rat_i(1));
        let sys = build_parametric_a(&lam, &mu, &a).unwrap();
        let chart = chart_u1(&sys);
        let expected_p = bp(&[(-2, 1, 0, 0), (2, 1, 1, 0), (1, 1, 2, 0), (2, 1, 0, 2), (-1, 1, 1, 2)]);
        let expected_q = bp(&[(1, 1, 0, 1), (-1, 1, 0, 3)]);
        assert_eq!(chart.sys.p, expected_p);
        assert_eq!(chart.sys.q, expected_q);
    }

    #[test]
    fn chart_u2_matches_proof_display_for_a_family() {
        // ẋ = −(λ/μ)xz² + (λ/μ)x³ − μx + z² − (a+1)x²,
        // ż = −(λ/μ)z³ + (λ/μ)x²z − axz − μz
        let (lam, mu, a) = (rat_i(6), rat_i(-1), rat_i(2));
        let sys = build_parametric_a(&lam, &mu, &a).unwrap();
        let chart = chart_u2(&sys);
        let lm = rat(-6, 1); // λ/μ
        let mut exp_p = BiPoly::monomial(-lm.clone(), 1, 2);
        exp_p = &exp_p + &BiPoly::monomial(lm.clone(), 3, 0);
        exp_p = &exp_p + &BiPoly::monomial(rat_i(1), 1, 0); // −μx with μ=−1
        exp_p = &exp_p + &BiPoly::monomial(rat_i(1), 0, 2);
        exp_p = &exp_p + &BiPoly::monomial(rat_i(-3), 2, 0); // −(a+1)x²
        let mut exp_q = BiPoly::monomial(-lm.clone(), 0, 3);
        exp_q = &exp_q + &BiPoly::monomial(lm.clone(), 2, 1);
        exp_q = &exp_q + &BiPoly::monomial(rat_i(-2), 1, 1); // −axz
        exp_q = &exp_q + &BiPoly::monomial(rat_i(1), 0, 1); // −μz
        assert_eq!(chart.sys.p, exp_p);
        assert_eq!(chart.sys.q, exp_q);
    }

    #[test]
    fn chart_u1_matches_proof_display_for_b_family() {
        // v̇ = (λ/μ)z + bv + (a−1)vz + μv², ż = −z²
        let (lam, mu, a, b) = (rat_i(2), rat_i(1), rat(1, 2), rat_i(1));
        let sys = build_parametric_b(&lam, &mu, &a, &b).unwrap();
        let chart = chart_u1(&sys);
        let expected_p = bp(&[(2, 1, 0, 1), (1, 1, 1, 0), (-1, 2, 1, 1), (1, 1, 2, 0)]);
        assert_eq!(chart.sys.p, expected_p);
        assert_eq!(chart.sys.q, BiPoly::monomial(rat_i(-1), 0, 2));
    }

    #[test]
    fn chart_transforms_are_exact_identities() {
        let systems = [
            build_parametric_a(&rat_i(2), &rat_i(1), &rat_i(0)).unwrap(),
            build_parametric_a(&rat_i(6), &rat(1, 3), &rat(-3, 2)).unwrap(),
            build_parametric_b(&rat_i(2), &rat_i(-1), &rat_i(1), &rat_i(1)).unwrap(),
            build_family_system(&family(FamilyId::Hermite, None, None).unwrap(), 3, &rat_i(2)).unwrap(),
            build_family_system(
                &family(FamilyId::Jacobi, Some(rat(1, 2)), Some(rat(-1, 2))).unwrap(),
                2,
                &rat_i(1),
            )
            .unwrap(),
        ];
        for sys in &systems {
            for chart in [chart_u1(sys), chart_u2(sys)] {
                let (r1, r2) = chart_consistency_residual(sys, &chart);
                assert!(r1.is_zero() && r2.is_zero(), "chart {:?} of {:?}", chart.chart, sys.provenance);
            }
        }
    }

    #[test]
    fn infinity_equation_factors_for_a_family() {
        // V·Q₂ − X·P₂ = (λ/μ)x³ − (a+1)vx² − μv²x
        let (lam, mu, a) = (rat_i(2), rat_i(1), rat_i(0));
        let sys = build_parametric_a(&lam, &mu, &a).unwrap();
        let eq = infinity_equation(&sys).unwrap();
        assert_eq!(eq, bp(&[(2, 1, 0, 3), (-1, 1, 1, 2), (-1, 1, 2, 1)]));
        let (slopes, v_dir) = equator_directions(&sys).unwrap();
        assert!(v_dir);
        // slopes: −μu² − (a+1)u + λ/μ, roots u = (−1±3)/2
        let roots = real_roots(&slopes);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 2.0).abs() < 1e-12 && (roots[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infinity_equation_hermite() {
        let sys =
            build_family_system(&family(FamilyId::Hermite, None, None).unwrap(), 2, &rat_i(1)).unwrap();
        // P₂ = 2xv + v², Q₂ = 0 ⇒ eq = −x(2xv + v²) = −2vx² − v²x
        let eq = infinity_equation(&sys).unwrap();
        assert_eq!(eq, bp(&[(-2, 1, 1, 2), (-1, 1, 2, 1)]));
        let (slopes, v_dir) = equator_directions(&sys).unwrap();
        assert!(v_dir); // the v = 0... the (1:0) direction is critical
        let roots = real_roots(&slopes);
        // directions u = v/x ∈ {0, −2}
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 2.0).abs() < 1e-12 && roots[1].abs() < 1e-12);
    }

    #[test]
    fn degenerate_equator_reported() {
        // linear system P = v, Q = x: VQ₁ − XP₁ = vx − xv = 0
        let sys = QuadSystem::new(BiPoly::var(Var::V), BiPoly::var(Var::X));
        assert_eq!(infinity_equation(&sys).unwrap_err(), CompactifyError::IdenticallyZero);
        assert!(matches!(
            infinity_crit_points(&sys, DEFAULT_SERIES_ORDER),
            Err(CompactifyError::IdenticallyZero)
        ));
    }

    #[test]
    fn a_family_infinity_classification() {
        // λ=2, μ=1, a=0: v₁ = 1 unstable node, v₂ = −2 saddle,
        // U2 origin a stable node (μ > 0)
        let sys = build_parametric_a(&rat_i(2), &rat_i(1), &rat_i(0)).unwrap();
        let reports = infinity_crit_points(&sys, DEFAULT_SERIES_ORDER).unwrap();
        assert_eq!(reports.len(), 3);
        let mut u1_points: Vec<(f64, Kind)> = reports
            .iter()
            .filter(|r| r.report.point.chart == Chart::U1)
            .map(|r| (r.report.point.v.to_f64(), r.report.classification.kind))
            .collect();
        u1_points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(u1_points, alloc::vec![(-2.0, Kind::Saddle), (1.0, Kind::NodeUnstable)]);
        let u2 = reports.iter().find(|r| r.report.point.chart == Chart::U2).unwrap();
        assert_eq!(u2.report.classification.kind, Kind::NodeStable);
        assert_eq!(u2.direction, (1.0, 0.0));
        // μ < 0 flips the U2 node's stability
        let sys = build_parametric_a(&rat_i(2), &rat_i(-1), &rat_i(0)).unwrap();
        let reports = infinity_crit_points(&sys, DEFAULT_SERIES_ORDER).unwrap();
        let u2 = reports.iter().find(|r| r.report.point.chart == Chart::U2).unwrap();
        assert_eq!(u2.report.classification.kind, Kind::NodeUnstable);
    }

    #[test]
    fn b_family_infinity_saddle_nodes() {
        // b ≠ 0: (0,0) and (−b/μ, 0) in chart U1 are both saddle-nodes
        let sys = build_parametric_b(&rat_i(2), &rat_i(1), &rat_i(1), &rat_i(1)).unwrap();
        let reports = infinity_crit_points(&sys, DEFAULT_SERIES_ORDER).unwrap();
        let u1: Vec<_> = reports.iter().filter(|r| r.report.point.chart == Chart::U1).collect();
        assert_eq!(u1.len(), 2);
        for r in &u1 {
            assert_eq!(r.report.classification.kind, Kind::SaddleNode, "at u={}", r.report.point.v.display());
        }
        let u2 = reports.iter().find(|r| r.report.point.chart == Chart::U2).unwrap();
        assert_eq!(u2.report.classification.kind, Kind::NodeStable);
    }

    #[test]
    fn b_family_nilpotent_infinity_point() {
        // b = 0: unique nilpotent point at the U1 origin; evidence (m, n) = (4, 1)
        // with G(s) = 2λs + o(s)
        for (lam, mu, a) in [(rat_i(2), rat_i(1), rat_i(1)), (rat_i(6), rat_i(-1), rat_i(0))] {
            let sys = build_parametric_b(&lam, &mu, &a, &rat_i(0)).unwrap();
            let reports = infinity_crit_points(&sys, DEFAULT_SERIES_ORDER).unwrap();
            let u1: Vec<_> = reports.iter().filter(|r| r.report.point.chart == Chart::U1).collect();
            assert_eq!(u1.len(), 1);
            let c = &u1[0].report.classification;
            assert_eq!(c.kind, Kind::SaddleNode);
            match &c.evidence {
                crate::classify::Evidence::Nilpotent { m, n, b, .. } => {
                    assert_eq!(*m, Some(4));
                    assert_eq!(*n, Some(1));
                    assert_eq!(b.clone().unwrap(), rat_i(2) * &lam, "lam={lam}");
                }
                other => panic!("expected nilpotent evidence, got {other:?}"),
            }
        }
    }

    #[test]
    fn equator_roots_match_chart_points() {
        for sys in [
            build_parametric_a(&rat_i(6), &rat_i(-1), &rat_i(2)).unwrap(),
            build_parametric_b(&rat_i(2), &rat_i(1), &rat_i(1), &rat_i(1)).unwrap(),
        ] {
            let (slopes, v_dir) = equator_directions(&sys).unwrap();
            let u1 = chart_u1(&sys);
            let phi = slice_at_z0(&u1.sys.p);
            for r in real_roots(&slopes) {
                assert!(phi.eval_f64(r).abs() < 1e-9, "slope {r}");
            }
            let u2 = chart_u2(&sys);
            assert_eq!(v_dir, u2.sys.p.coeff(0, 0).is_zero());
        }
    }
}
