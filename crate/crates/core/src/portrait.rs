//! Trajectory integration and phase-portrait rendering.
//!
//! The integrator is an embedded Dormand–Prince 5(4) pair with adaptive
//! steps; every accepted step is sampled, so a trajectory is a dense
//! polyline. Near designated invariant vertical lines (the 1−x² factors)
//! the step is capped proportionally to the distance so trajectories cannot
//! hop across. Rendering is a deterministic fold over trajectories sorted by
//! seed index: two runs with the same spec produce byte-identical SVG.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::{CritReport, Kind};
use crate::compactify::InfinityReport;
use crate::exactpoly::real_roots;
use crate::vfield::{jacobian_at_f64, QuadSystem};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Termination {
    HorizonReached,
    LeftWindow,
    NearSingularity,
    StepFailure,
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::HorizonReached => "horizon-reached",
            Termination::LeftWindow => "left-window",
            Termination::NearSingularity => "near-singularity",
            Termination::StepFailure => "step-failure",
        }
    }
}

/// A numerically integrated orbit: samples (t, v, x) at every accepted step.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<(f64, f64, f64)>,
    pub termination: Termination,
}

#[derive(Clone, Debug)]
pub struct IntegrateOpts {
    /// Local error tolerance (absolute and relative) per step.
    pub tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Integration stops when the state leaves this (vmin, vmax, xmin, xmax) box.
    pub window: Option<[f64; 4]>,
    /// Invariant vertical lines x = c; steps are capped near them.
    pub x_line_guards: Vec<f64>,
    pub max_steps: usize,
}

impl Default for IntegrateOpts {
    fn default() -> Self {
        IntegrateOpts {
            tol: 1e-10,
            max_step: 0.1,
            min_step: 1e-13,
            window: None,
            x_line_guards: Vec::new(),
            max_steps: 2_000_000,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates v̇ = P, ẋ = Q from `start` over `[0, t_end]`; a negative
/// `t_end` integrates backward in time. Samples every accepted step.
pub fn integrate(sys: &QuadSystem, start: (f64, f64), t_end: f64, opts: &IntegrateOpts) -> Trajectory {
    let dir = if t_end < 0.0 { -1.0 } else { 1.0 };
    let horizon = t_end.abs();
    let rhs = |v: f64, x: f64| -> (f64, f64) {
        let (dv, dx) = sys.eval_f64(v, x);
        (dir * dv, dir * dx)
    };
    let mut samples = Vec::new();
    let (mut v, mut x) = start;
    let mut t = 0.0f64;
    samples.push((0.0, v, x));
    let mut h = opts.max_step.min(horizon.max(1e-12) / 16.0).max(opts.min_step);
    let mut k1 = rhs(v, x);

    for _ in 0..opts.max_steps {
        if t >= horizon {
            return Trajectory { samples, termination: Termination::HorizonReached };
        }
        if let Some(w) = opts.window {
            if v < w[0] || v > w[1] || x < w[2] || x > w[3] {
                return Trajectory { samples, termination: Termination::LeftWindow };
            }
        }
        let speed = libm::hypot(k1.0, k1.1);
        if speed < 1e-13 * (1.0 + libm::hypot(v, x)) {
            return Trajectory { samples, termination: Termination::NearSingularity };
        }
        // cap near invariant lines so the step cannot cross them
        let mut cap = opts.max_step;
        for &line in &opts.x_line_guards {
            let dist = (x - line).abs();
            if dist < 0.1 {
                cap = cap.min((1e-3 * dist).max(5e-4));
            }
        }
        h = h.min(cap).min(horizon - t).max(opts.min_step);

        // one embedded step
        let mut k = [(0.0f64, 0.0f64); 7];
        k[0] = k1;
        for stage in 0..6 {
            let mut av = 0.0;
            let mut ax = 0.0;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                av += A[stage][j] * kj.0;
                ax += A[stage][j] * kj.1;
            }
            k[stage + 1] = rhs(v + h * av, x + h * ax);
        }
        let mut v5 = 0.0;
        let mut x5 = 0.0;
        let mut ev = 0.0;
        let mut ex = 0.0;
        for (j, kj) in k.iter().enumerate() {
            v5 += B5[j] * kj.0;
            x5 += B5[j] * kj.1;
            ev += (B5[j] - B4[j]) * kj.0;
            ex += (B5[j] - B4[j]) * kj.1;
        }
        let v_new = v + h * v5;
        let x_new = x + h * x5;
        let scale_v = opts.tol + opts.tol * v.abs().max(v_new.abs());
        let scale_x = opts.tol + opts.tol * x.abs().max(x_new.abs());
        let ev_n = h * ev / scale_v;
        let ex_n = h * ex / scale_x;
        let err = libm::sqrt(0.5 * (ev_n * ev_n + ex_n * ex_n));

        let accepted = err.is_finite() && err <= 1.0;
        if accepted || h <= opts.min_step * 1.0001 {
            if !accepted || !v_new.is_finite() || !x_new.is_finite() {
                return Trajectory { samples, termination: Termination::StepFailure };
            }
            t += h;
            v = v_new;
            x = x_new;
            samples.push((dir * t, v, x));
            k1 = k[6]; // FSAL
        }
        let factor = if err.is_finite() && err > 0.0 {
            0.9 * libm::pow(err, -0.2)
        } else if err == 0.0 {
            5.0
        } else {
            0.2 // non-finite error estimate: shrink hard
        };
        h = (h * factor.clamp(0.2, 5.0)).clamp(opts.min_step, opts.max_step);
    }
    Trajectory { samples, termination: Termination::StepFailure }
}

/// Central projection onto the Poincaré disk: the boundary is infinity.
pub fn disk_map(v: f64, x: f64) -> (f64, f64) {
    let r = libm::sqrt(1.0 + v * v + x * x);
    (v / (1.0 + r), x / (1.0 + r))
}

// ---------------------------------------------------------------------------
// Portrait rendering

#[derive(Clone, Debug)]
pub enum SeedStrategy {
    /// Uniform grid over the window, integrated both time directions.
    Grid { nv: usize, nx: usize },
    /// Four seeds near every finite saddle along its eigendirections,
    /// integrated both time directions.
    Separatrix,
    /// Seeds on the invariant vertical lines x = c (roots of a v-free Q).
    InvariantLines,
    User(Vec<(f64, f64)>),
}

#[derive(Clone, Debug)]
pub struct PortraitSpec {
    pub disk: bool,
    /// (vmin, vmax, xmin, xmax) integration and plane-view window.
    pub window: [f64; 4],
    pub seeds: Vec<SeedStrategy>,
    pub tol: f64,
    pub horizon: f64,
    pub max_trajectories: usize,
}

impl Default for PortraitSpec {
    fn default() -> Self {
        PortraitSpec {
            disk: true,
            window: [-4.0, 4.0, -4.0, 4.0],
            seeds: alloc::vec![
                SeedStrategy::Grid { nv: 6, nx: 6 },
                SeedStrategy::Separatrix,
                SeedStrategy::InvariantLines
            ],
            tol: 1e-8,
            horizon: 3.0,
            max_trajectories: 2000,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum PortraitError {
    InvalidSpec(String),
}

impl fmt::Display for PortraitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PortraitError::InvalidSpec(msg) => write!(f, "invalid portrait spec: {msg}"),
        }
    }
}

impl PortraitSpec {
    pub fn validate(&self) -> Result<(), PortraitError> {
        if !(1e-12..=1e-3).contains(&self.tol) {
            return Err(PortraitError::InvalidSpec(String::from("tolerance outside [1e-12, 1e-3]")));
        }
        if self.max_trajectories > 10_000 {
            return Err(PortraitError::InvalidSpec(String::from("more than 10^4 trajectories")));
        }
        if !(self.window[0] < self.window[1] && self.window[2] < self.window[3]) {
            return Err(PortraitError::InvalidSpec(String::from("empty window")));
        }
        Ok(())
    }
}

/// A rendered portrait: the SVG document, the CSV trajectory dump, and the
/// trajectories themselves for downstream checks.
#[derive(Clone, Debug)]
pub struct Portrait {
    pub svg: String,
    pub csv: String,
    pub trajectories: Vec<Trajectory>,
}

/// Invariant vertical lines x = c of the system (real roots of a v-free Q).
pub fn invariant_x_lines(sys: &QuadSystem) -> Vec<f64> {
    match sys.q.as_unipoly_in_x() {
        Some(q) if !q.is_zero() => real_roots(&q),
        _ => Vec::new(),
    }
}

fn seed_points(
    sys: &QuadSystem,
    spec: &PortraitSpec,
    finite: &[CritReport],
) -> Vec<((f64, f64), bool)> {
    // (seed, both_directions)
    let mut out = Vec::new();
    let w = spec.window;
    for strategy in &spec.seeds {
        match strategy {
            SeedStrategy::Grid { nv, nx } => {
                for i in 0..*nv {
                    for j in 0..*nx {
                        let v = w[0] + (w[1] - w[0]) * (i as f64 + 0.5) / (*nv as f64);
                        let x = w[2] + (w[3] - w[2]) * (j as f64 + 0.5) / (*nx as f64);
                        out.push(((v, x), true));
                    }
                }
            }
            SeedStrategy::Separatrix => {
                for report in finite {
                    if !report.classification.kind.is_saddle_like() {
                        continue;
                    }
                    let (pv, px) = (report.point.v.to_f64(), report.point.x.to_f64());
                    for (ev, ex) in eigen_directions(sys, pv, px) {
                        for sign in [1.0, -1.0] {
                            out.push(((pv + 1e-4 * sign * ev, px + 1e-4 * sign * ex), true));
                        }
                    }
                }
            }
            SeedStrategy::InvariantLines => {
                for line in invariant_x_lines(sys) {
                    if line < w[2] || line > w[3] {
                        continue;
                    }
                    for i in 0..5 {
                        let v = w[0] + (w[1] - w[0]) * (i as f64 + 0.5) / 5.0;
                        out.push(((v, line), true));
                    }
                }
            }
            SeedStrategy::User(points) => {
                for &p in points {
                    out.push((p, true));
                }
            }
        }
    }
    out.truncate(spec.max_trajectories / 2);
    out
}

/// Unit eigenvector directions of the float Jacobian at a point.
fn eigen_directions(sys: &QuadSystem, v: f64, x: f64) -> Vec<(f64, f64)> {
    let j = jacobian_at_f64(sys, v, x);
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = libm::sqrt(disc);
    let mut dirs = Vec::new();
    for lam in [(tr - s) / 2.0, (tr + s) / 2.0] {
        // kernel of J − λI
        let r1 = (j[0][0] - lam, j[0][1]);
        let r2 = (j[1][0], j[1][1] - lam);
        let (a, b) = if libm::hypot(r1.0, r1.1) >= libm::hypot(r2.0, r2.1) { r1 } else { r2 };
        let (ev, ex) = (-b, a);
        let n = libm::hypot(ev, ex);
        if n > 1e-12 {
            dirs.push((ev / n, ex / n));
        }
    }
    dirs
}

struct Screen {
    disk: bool,
    window: [f64; 4],
}

const VIEW: f64 = 800.0;
const MARGIN: f64 = 20.0;

impl Screen {
    fn map(&self, v: f64, x: f64) -> (f64, f64) {
        if self.disk {
            let (u1, u2) = disk_map(v, x);
            // unit disk to viewport, x-axis upward
            (
                MARGIN + (u1 + 1.0) * 0.5 * (VIEW - 2.0 * MARGIN),
                MARGIN + (1.0 - (u2 + 1.0) * 0.5) * (VIEW - 2.0 * MARGIN),
            )
        } else {
            let w = self.window;
            (
                MARGIN + (v - w[0]) / (w[1] - w[0]) * (VIEW - 2.0 * MARGIN),
                MARGIN + (1.0 - (x - w[2]) / (w[3] - w[2])) * (VIEW - 2.0 * MARGIN),
            )
        }
    }

    fn boundary_point(&self, dir: (f64, f64)) -> (f64, f64) {
        // direction on the disk boundary
        let (dv, dx) = dir;
        let n = libm::hypot(dv, dx);
        let (u1, u2) = (dv / n, dx / n);
        (
            MARGIN + (u1 + 1.0) * 0.5 * (VIEW - 2.0 * MARGIN),
            MARGIN + (1.0 - (u2 + 1.0) * 0.5) * (VIEW - 2.0 * MARGIN),
        )
    }
}

fn fmt2(x: f64) -> String {
    format!("{:.2}", x)
}

fn glyph(out: &mut String, kind: Kind, cx: f64, cy: f64, boundary: bool) {
    let class = if boundary { "cp cp-inf" } else { "cp" };
    let color = match kind {
        Kind::Saddle | Kind::TopologicalSaddle => "#c62828",
        Kind::NodeStable | Kind::FocusStable => "#1565c0",
        Kind::NodeUnstable | Kind::FocusUnstable | Kind::TopologicalNode => "#e65100",
        Kind::SaddleNode => "#6a1b9a",
        Kind::CenterOrWeakFocus => "#2e7d32",
        Kind::Cusp | Kind::EllipticHyperbolicSector | Kind::NilpotentNode => "#00838f",
        Kind::Degenerate => "#616161",
    };
    let (cx, cy) = (fmt2(cx), fmt2(cy));
    match kind {
        Kind::Saddle | Kind::TopologicalSaddle => {
            out.push_str(&format!(
                "<g class=\"{class} cp-{}\" transform=\"translate({cx},{cy})\"><path d=\"M-5,-5 L5,5 M-5,5 L5,-5\" stroke=\"{color}\" stroke-width=\"2.5\" fill=\"none\"/></g>\n",
                kind.name()
            ));
        }
        Kind::SaddleNode => {
            out.push_str(&format!(
                "<g class=\"{class} cp-{}\" transform=\"translate({cx},{cy})\"><path d=\"M-5,0 A5,5 0 0 1 5,0 Z\" fill=\"{color}\"/><path d=\"M-5,0 A5,5 0 0 0 5,0 Z\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/></g>\n",
                kind.name()
            ));
        }
        _ => {
            let fill = match kind {
                Kind::NodeStable | Kind::FocusStable => color,
                _ => "white",
            };
            out.push_str(&format!(
                "<g class=\"{class} cp-{}\" transform=\"translate({cx},{cy})\"><circle r=\"5\" fill=\"{fill}\" stroke=\"{color}\" stroke-width=\"2\"/></g>\n",
                kind.name()
            ));
        }
    }
}

/// Renders the phase portrait. Deterministic: the same system, spec and
/// reports always produce byte-identical output.
pub fn render_portrait(
    sys: &QuadSystem,
    spec: &PortraitSpec,
    finite: &[CritReport],
    infinity: &[InfinityReport],
) -> Result<Portrait, PortraitError> {
    spec.validate()?;
    let screen = Screen { disk: spec.disk, window: spec.window };
    let guards = invariant_x_lines(sys);
    let opts = IntegrateOpts {
        tol: spec.tol,
        max_step: 0.05,
        window: Some([
            spec.window[0] * 1.5 - 1.0,
            spec.window[1] * 1.5 + 1.0,
            spec.window[2] * 1.5 - 1.0,
            spec.window[3] * 1.5 + 1.0,
        ]),
        x_line_guards: guards.clone(),
        ..IntegrateOpts::default()
    };

    let seeds = seed_points(sys, spec, finite);
    let mut trajectories = Vec::new();
    for &(seed, both) in &seeds {
        trajectories.push(integrate(sys, seed, spec.horizon, &opts));
        if both {
            trajectories.push(integrate(sys, seed, -spec.horizon, &opts));
        }
        if trajectories.len() >= spec.max_trajectories {
            break;
        }
    }

    // CSV dump: trajectory_id,t,v,x
    let mut csv = String::from("trajectory_id,t,v,x\n");
    for (id, tr) in trajectories.iter().enumerate() {
        for &(t, v, x) in &tr.samples {
            csv.push_str(&format!("{id},{t:.9},{v:.9},{x:.9}\n"));
        }
    }

    // SVG document
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {v} {v}\" width=\"{v}\" height=\"{v}\">\n",
        v = VIEW
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if spec.disk {
        let c = VIEW / 2.0;
        let r = (VIEW - 2.0 * MARGIN) / 2.0;
        svg.push_str(&format!(
            "<circle class=\"disk-boundary\" cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n"
        ));
    }
    // invariant lines, highlighted
    for line in &guards {
        if spec.disk {
            let mut d = String::new();
            for i in 0..=160 {
                let v = -40.0 + 80.0 * (i as f64) / 160.0;
                let (px, py) = screen.map(v, *line);
                d.push_str(if i == 0 { "M" } else { " L" });
                d.push_str(&format!("{},{}", fmt2(px), fmt2(py)));
            }
            svg.push_str(&format!(
                "<path class=\"invariant-line\" d=\"{d}\" fill=\"none\" stroke=\"#9e9e9e\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/>\n"
            ));
        } else if *line >= spec.window[2] && *line <= spec.window[3] {
            let (x1, y1) = screen.map(spec.window[0], *line);
            let (x2, y2) = screen.map(spec.window[1], *line);
            svg.push_str(&format!(
                "<line class=\"invariant-line\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#9e9e9e\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/>\n",
                fmt2(x1), fmt2(y1), fmt2(x2), fmt2(y2)
            ));
        }
    }
    // trajectories
    for tr in &trajectories {
        if tr.samples.len() < 2 {
            continue;
        }
        let mut d = String::new();
        for (i, &(_, v, x)) in tr.samples.iter().enumerate() {
            let (px, py) = screen.map(v, x);
            if !px.is_finite() || !py.is_finite() {
                continue;
            }
            d.push_str(if i == 0 { "M" } else { " L" });
            d.push_str(&format!("{},{}", fmt2(px), fmt2(py)));
        }
        svg.push_str(&format!(
            "<path class=\"trajectory\" d=\"{d}\" fill=\"none\" stroke=\"#37474f\" stroke-width=\"0.8\" opacity=\"0.8\"/>\n"
        ));
    }
    // critical-point glyphs: finite in the interior, infinity on the boundary
    for report in finite {
        let (v, x) = (report.point.v.to_f64(), report.point.x.to_f64());
        if !spec.disk && (v < spec.window[0] || v > spec.window[1] || x < spec.window[2] || x > spec.window[3]) {
            continue;
        }
        let (px, py) = screen.map(v, x);
        glyph(&mut svg, report.classification.kind, px, py, false);
    }
    if spec.disk {
        for inf in infinity {
            for dir in [inf.direction, (-inf.direction.0, -inf.direction.1)] {
                let (px, py) = screen.boundary_point(dir);
                glyph(&mut svg, inf.report.classification.kind, px, py, true);
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(Portrait { svg, csv, trajectories })
}

/// Counts the critical-point glyphs in a rendered SVG, keyed by kind name.
pub fn count_glyphs(svg: &str, kind: Kind) -> usize {
    let needle = format!("cp-{}\"", kind.name());
    svg.matches(&needle).count()
}

pub fn count_boundary_glyphs(svg: &str) -> usize {
    svg.matches("cp cp-inf").count()
}

pub fn count_finite_glyphs(svg: &str) -> usize {
    svg.matches("class=\"cp ").count() - count_boundary_glyphs(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_system, Kind};
    use crate::compactify::infinity_crit_points;
    use crate::exactpoly::{rat_i, BiPoly, Var, DEFAULT_SERIES_ORDER};
    use crate::vfield::{build_parametric_a, build_parametric_a_with_b, build_parametric_b};

    #[test]
    fn linear_system_closed_form() {
        // v̇ = v, ẋ = −x from (1,1): endpoint (e, 1/e)
        let sys = QuadSystem::new(BiPoly::var(Var::V), -&BiPoly::var(Var::X));
        let opts = IntegrateOpts { tol: 1e-12, ..IntegrateOpts::default() };
        let tr = integrate(&sys, (1.0, 1.0), 1.0, &opts);
        assert_eq!(tr.termination, Termination::HorizonReached);
        let &(t, v, x) = tr.samples.last().unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        assert!((v - core::f64::consts::E).abs() < 1e-8, "v = {v}");
        assert!((x - 1.0 / core::f64::consts::E).abs() < 1e-8, "x = {x}");
    }

    #[test]
    fn invariant_line_is_respected() {
        // start on x = 1: x(t) ≡ 1
        let sys = build_parametric_a_with_b(&rat_i(2), &rat_i(1), &rat_i(0), &rat_i(0)).unwrap();
        let opts = IntegrateOpts {
            tol: 1e-10,
            x_line_guards: alloc::vec![1.0, -1.0],
            window: Some([-50.0, 50.0, -50.0, 50.0]),
            ..IntegrateOpts::default()
        };
        let tr = integrate(&sys, (0.3, 1.0), 1.0, &opts);
        for &(_, _, x) in &tr.samples {
            assert!((x - 1.0).abs() < 1e-9, "drifted to {x}");
        }
    }

    #[test]
    fn forward_backward_roundtrip() {
        let sys = build_parametric_a(&rat_i(2), &rat_i(1), &rat_i(1)).unwrap();
        let opts = IntegrateOpts { tol: 1e-10, ..IntegrateOpts::default() };
        let fwd = integrate(&sys, (0.1, 0.2), 0.8, &opts);
        assert_eq!(fwd.termination, Termination::HorizonReached);
        let &(_, v1, x1) = fwd.samples.last().unwrap();
        let back = integrate(&sys, (v1, x1), -0.8, &opts);
        let &(_, v0, x0) = back.samples.last().unwrap();
        assert!(libm::hypot(v0 - 0.1, x0 - 0.2) < 1e-6, "returned to ({v0}, {x0})");
    }

    #[test]
    fn disk_map_properties() {
        assert_eq!(disk_map(0.0, 0.0), (0.0, 0.0));
        let mut rng = crate::rng::SplitMix64::new(7);
        for _ in 0..200 {
            let p = (rng.next_range(-10.0, 10.0), rng.next_range(-10.0, 10.0));
            let q = (rng.next_range(-10.0, 10.0), rng.next_range(-10.0, 10.0));
            let np = libm::hypot(p.0, p.1);
            let nq = libm::hypot(q.0, q.1);
            let dp = disk_map(p.0, p.1);
            let dq = disk_map(q.0, q.1);
            let ndp = libm::hypot(dp.0, dp.1);
            let ndq = libm::hypot(dq.0, dq.1);
            assert!(ndp < 1.0);
            if np < nq {
                assert!(ndp < ndq);
            }
            // rays map to rays
            if np > 1e-9 {
                let t = 1e6;
                let far = disk_map(p.0 * t, p.1 * t);
                let nf = libm::hypot(far.0, far.1);
                assert!((far.0 / nf - p.0 / np).abs() < 1e-5);
                assert!((far.1 / nf - p.1 / np).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn portrait_glyph_counts_match_reports() {
        let sys = build_parametric_a(&rat_i(2), &rat_i(1), &rat_i(1)).unwrap();
        let finite = classify_system(&sys, DEFAULT_SERIES_ORDER).unwrap();
        let infinity = infinity_crit_points(&sys, DEFAULT_SERIES_ORDER).unwrap();
        let spec = PortraitSpec { horizon: 2.0, ..PortraitSpec::default() };
        let portrait = render_portrait(&sys, &spec, &finite, &infinity).unwrap();
        assert_eq!(count_finite_glyphs(&portrait.svg), 4);
        assert_eq!(count_boundary_glyphs(&portrait.svg), 2 * infinity.len());
        // per-kind totals: finite occurrences plus two per infinity report
        for kind in [Kind::Saddle, Kind::NodeStable, Kind::NodeUnstable] {
            let expected = finite.iter().filter(|r| r.classification.kind == kind).count()
                + 2 * infinity.iter().filter(|r| r.report.classification.kind == kind).count();
            assert_eq!(count_glyphs(&portrait.svg, kind), expected, "{kind}");
        }
    }

    #[test]
    fn portrait_empty_spec_has_glyphs_only() {
        let sys = build_parametric_b(&rat_i(2), &rat_i(1), &rat_i(0), &rat_i(1)).unwrap();
        let finite = classify_system(&sys, DEFAULT_SERIES_ORDER).unwrap();
        let spec = PortraitSpec { seeds: Vec::new(), ..PortraitSpec::default() };
        let portrait = render_portrait(&sys, &spec, &finite, &[]).unwrap();
        assert!(portrait.trajectories.is_empty());
        assert_eq!(count_finite_glyphs(&portrait.svg), 1);
        assert_eq!(count_glyphs(&portrait.svg, Kind::SaddleNode), 1);
        assert!(!portrait.svg.contains("class=\"trajectory\""));
    }

    #[test]
    fn portrait_is_deterministic() {
        let sys = build_parametric_a(&rat_i(2), &rat_i(1), &rat_i(0)).unwrap();
        let finite = classify_system(&sys, DEFAULT_SERIES_ORDER).unwrap();
        let infinity = infinity_crit_points(&sys, DEFAULT_SERIES_ORDER).unwrap();
        let spec = PortraitSpec {
            seeds: alloc::vec![SeedStrategy::Grid { nv: 4, nx: 4 }],
            horizon: 1.0,
            ..PortraitSpec::default()
        };
        let a = render_portrait(&sys, &spec, &finite, &infinity).unwrap();
        let b = render_portrait(&sys, &spec, &finite, &infinity).unwrap();
        assert_eq!(a.svg, b.svg);
        assert_eq!(a.csv, b.csv);
    }

    #[test]
    fn spec_validation() {
        let mut spec = PortraitSpec::default();
        spec.tol = 1.0;
        assert!(spec.validate().is_err());
        let mut spec = PortraitSpec::default();
        spec.max_trajectories = 20_000;
        assert!(spec.validate().is_err());
    }
}
