//! `opf` — analysis of the quadratic vector fields attached to classical
//! orthogonal polynomials: exact invariant curves, Darboux invariants,
//! critical-point classification on the Poincaré disk, Chebyshev first
//! integrals, and SVG phase portraits.

mod jsonio;
mod polyparse;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use opf_core::classify::classify_system;
use opf_core::compactify::infinity_crit_points;
use opf_core::darboux::{
    check_invariant_along_flow, solve_cofactor_relation, DarbouxProblem,
};
use opf_core::exactpoly::{
    parse_rat, rat_i, BiPoly, Rat, Var, DEFAULT_SERIES_ORDER, MAX_SERIES_ORDER,
};
use opf_core::families::{family, FamilyId};
use opf_core::integrals::{
    check_first_integral_flow, chebyshev_solutions_residual, chebyshev_system, first_integral_v,
    first_integral_w, reduced_system, BridgeWV,
};
use opf_core::portrait::{render_portrait, PortraitSpec, SeedStrategy};
use opf_core::selftest::Fault;
use opf_core::vfield::{
    build_family_system, build_parametric_a_with_b, build_parametric_b, invariant_curve,
    verify_invariant, InvarianceCheck, QuadSystem,
};

use jsonio::{crit_report_json, infinity_report_json, rat_json, system_json};
use polyparse::parse_bipoly;

/// Usage problems exit 2; verification failures (a claimed identity that
/// does not hold, a failed self-test, an infeasible certificate) exit 1.
enum CliError {
    Usage(String),
    Verification(String),
}

type CliResult = Result<(), CliError>;

fn usage<T: std::fmt::Display>(msg: T) -> CliError {
    CliError::Usage(msg.to_string())
}

#[derive(Parser)]
#[command(
    name = "opf",
    version,
    about = "Quadratic vector fields of classical orthogonal polynomials: exact invariants and phase portraits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Selector {
    /// Family name: jacobi | legendre | chebyshev-t | chebyshev-u |
    /// gegenbauer | laguerre-assoc | laguerre | hermite
    #[arg(long, group = "source")]
    family: Option<String>,
    /// The 1-x^2 parametric shape: v' = (lambda/mu)(1-x^2)+a v x+b v+mu v^2
    #[arg(long, group = "source")]
    jacobi_shape: bool,
    /// The x parametric shape: v' = (lambda/mu)x+a v+b v x+mu v^2
    #[arg(long, group = "source")]
    laguerre_shape: bool,
    /// A system as produced by `opf system` (path, `-` for stdin, or inline JSON)
    #[arg(long, group = "source")]
    system_json: Option<String>,
    /// Polynomial degree n (family mode)
    #[arg(long)]
    n: Option<u32>,
    /// Nonzero rational, e.g. 1, -1, 1/3
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Positive rational lambda (shape modes)
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
}

impl Selector {
    fn rat_flag(value: &Option<String>, name: &str, default: Option<Rat>) -> Result<Rat, CliError> {
        match value {
            Some(s) => parse_rat(s).ok_or_else(|| usage(format!("--{name}: not a rational: {s:?}"))),
            None => default.ok_or_else(|| usage(format!("--{name} is required"))),
        }
    }

    fn opt_rat_flag(value: &Option<String>, name: &str) -> Result<Option<Rat>, CliError> {
        match value {
            Some(s) => parse_rat(s)
                .map(Some)
                .ok_or_else(|| usage(format!("--{name}: not a rational: {s:?}"))),
            None => Ok(None),
        }
    }

    fn family_spec(&self) -> Result<Option<opf_core::families::FamilySpec>, CliError> {
        let Some(name) = &self.family else { return Ok(None) };
        let id = FamilyId::parse(name).ok_or_else(|| usage(format!("unknown family {name:?}")))?;
        let alpha = Self::opt_rat_flag(&self.alpha, "alpha")?;
        let beta = Self::opt_rat_flag(&self.beta, "beta")?;
        family(id, alpha, beta).map(Some).map_err(usage)
    }

    fn build(&self) -> Result<QuadSystem, CliError> {
        if let Some(spec) = self.family_spec()? {
            let n = self.n.ok_or_else(|| usage("--n is required with --family"))?;
            let mu = Self::rat_flag(&self.mu, "mu", None)?;
            return build_family_system(&spec, n, &mu).map_err(usage);
        }
        if self.jacobi_shape || self.laguerre_shape {
            let lambda = Self::rat_flag(&self.lambda, "lambda", None)?;
            let mu = Self::rat_flag(&self.mu, "mu", None)?;
            let a = Self::rat_flag(&self.a, "a", Some(Rat::from_integer(0.into())))?;
            let b = Self::rat_flag(&self.b, "b", Some(Rat::from_integer(0.into())))?;
            return if self.jacobi_shape {
                build_parametric_a_with_b(&lambda, &mu, &a, &b).map_err(usage)
            } else {
                build_parametric_b(&lambda, &mu, &a, &b).map_err(usage)
            };
        }
        if let Some(source) = &self.system_json {
            let text = if source.trim_start().starts_with('{') {
                source.clone()
            } else if source == "-" {
                use std::io::Read;
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf).map_err(usage)?;
                buf
            } else {
                fs::read_to_string(source).map_err(|e| usage(format!("{source}: {e}")))?
            };
            let value: Value = serde_json::from_str(&text).map_err(usage)?;
            return jsonio::system_from_json(&value).map_err(usage);
        }
        Err(usage("select a system: --family, --jacobi-shape, --laguerre-shape or --system-json"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the eight family rows (rho, tau, lambda rule, parameters, interval)
    Families,
    /// Print a system as JSON {P, Q, degree, provenance}
    System {
        #[command(flatten)]
        sel: Selector,
    },
    /// Verify an invariant algebraic curve: the family curve by default, or --f
    VerifyInvariant {
        #[command(flatten)]
        sel: Selector,
        /// Candidate curve polynomial, e.g. "2vx+2" (defaults to the family curve)
        #[arg(long)]
        f: Option<String>,
    },
    /// Solve the cofactor relation and report the Darboux invariant
    Darboux {
        #[command(flatten)]
        sel: Selector,
        /// Nonzero rational s in the relation sum(lambda_i K_i) = -s
        #[arg(long, default_value = "1")]
        s: String,
        /// Additional invariant-curve candidates (repeatable)
        #[arg(long)]
        curve: Vec<String>,
        /// Also integrate trajectories and report the invariant's drift
        #[arg(long)]
        check_flow: bool,
        /// Drift tolerance for --check-flow
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Time horizon for --check-flow
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
    },
    /// Find and classify critical points (finite; --include-infinity adds the equator)
    CriticalPoints {
        #[command(flatten)]
        sel: Selector,
        #[arg(long)]
        include_infinity: bool,
    },
    /// Render a phase portrait (SVG, plus optional CSV dump and JSON manifest)
    Portrait {
        #[command(flatten)]
        sel: Selector,
        /// Render in plane coordinates instead of the Poincaré disk
        #[arg(long)]
        plane: bool,
        /// Window vmin vmax xmin xmax
        #[arg(long, num_args = 4, allow_negative_numbers = true)]
        window: Option<Vec<f64>>,
        /// Comma-separated strategies: grid, separatrix, invariant-lines
        #[arg(long, default_value = "grid,separatrix,invariant-lines")]
        seeds: String,
        /// Integrator tolerance (within [1e-12, 1e-3])
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 3.0)]
        horizon: f64,
        #[arg(short = 'o', long = "out", default_value = "portrait.svg")]
        out: PathBuf,
        /// SVG output path (alias for -o/--out; takes precedence when given)
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also dump trajectories as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write a JSON manifest
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        max_trajectories: usize,
    },
    /// Chebyshev first integrals: exact residuals, bridge map, flow drift
    ChebyshevIntegral {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1")]
        mu: String,
        #[arg(long)]
        check_flow: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run the acceptance grid and print one pass/fail line per criterion
    Selftest {
        /// Machine-readable report
        #[arg(long)]
        json: bool,
        /// Corrupt a value to exercise the failure path (accepts: cofactor)
        #[arg(long)]
        inject_fault: Option<String>,
    },
}

fn series_order() -> usize {
    std::env::var("OPF_SERIES_ORDER")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .map(|n| n.clamp(4, MAX_SERIES_ORDER))
        .unwrap_or(DEFAULT_SERIES_ORDER)
}

fn emit(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Families => cmd_families(),
        Command::System { sel } => {
            let sys = sel.build()?;
            emit(&system_json(&sys));
            Ok(())
        }
        Command::VerifyInvariant { sel, f } => cmd_verify_invariant(sel, f),
        Command::Darboux { sel, s, curve, check_flow, tol, horizon } => {
            cmd_darboux(sel, s, curve, check_flow, tol, horizon)
        }
        Command::CriticalPoints { sel, include_infinity } => {
            cmd_critical_points(sel, include_infinity)
        }
        Command::Portrait { sel, plane, window, seeds, tol, horizon, out, svg, csv, json, max_trajectories } => {
            cmd_portrait(sel, plane, window, seeds, tol, horizon, svg.unwrap_or(out), csv, json, max_trajectories)
        }
        Command::ChebyshevIntegral { n, mu, check_flow, tol } => {
            cmd_chebyshev_integral(n, mu, check_flow, tol)
        }
        Command::Selftest { json, inject_fault } => cmd_selftest(json, inject_fault),
    }
}

fn cmd_families() -> CliResult {
    let rows: Vec<Value> = FamilyId::ALL
        .iter()
        .map(|id| {
            let interval = match id {
                FamilyId::LaguerreAssoc | FamilyId::Laguerre => json!(["0", "inf"]),
                FamilyId::Hermite => json!(["-inf", "inf"]),
                _ => json!(["-1", "1"]),
            };
            json!({
                "id": id.name(),
                "rho": id.rho_str(),
                "tau": id.tau_str(),
                "lambda_rule": id.lambda_rule(),
                "params": id.param_names(),
                "interval": interval,
            })
        })
        .collect();
    emit(&Value::Array(rows));
    Ok(())
}

fn cmd_verify_invariant(sel: Selector, f: Option<String>) -> CliResult {
    let sys = sel.build()?;
    let candidate = match &f {
        Some(text) => parse_bipoly(text).map_err(usage)?,
        None => {
            let spec = sel
                .family_spec()?
                .ok_or_else(|| usage("--f is required unless a --family is selected"))?;
            let n = sel.n.ok_or_else(|| usage("--n is required"))?;
            let mu = Selector::rat_flag(&sel.mu, "mu", None)?;
            invariant_curve(&spec, n, &mu).map_err(usage)?.f
        }
    };
    match verify_invariant(&sys, &candidate) {
        None => Err(usage("the zero polynomial is not a curve")),
        Some(InvarianceCheck::Invariant { cofactor }) => {
            emit(&json!({
                "f": candidate.to_string(),
                "cofactor": cofactor.to_string(),
                "exact": true,
                "remainder": Value::Null,
            }));
            Ok(())
        }
        Some(InvarianceCheck::NotInvariant { remainder }) => {
            emit(&json!({
                "f": candidate.to_string(),
                "cofactor": Value::Null,
                "exact": false,
                "remainder": remainder.to_string(),
            }));
            Err(CliError::Verification(format!(
                "Xf is not divisible by f (remainder {remainder})"
            )))
        }
    }
}

/// Invariant lines x = r for every rational root r of a v-free Q, with their
/// exact cofactors.
fn rational_line_curves(sys: &QuadSystem) -> Vec<(BiPoly, BiPoly)> {
    let mut out = Vec::new();
    let Some(q) = sys.q.as_unipoly_in_x() else { return out };
    if q.is_zero() || q.degree() == Some(0) {
        return out;
    }
    // rational roots of Q via exact quadratic/linear formulas
    let roots = opf_core::exactpoly::solve_quadratic_rat(&q.coeff(2), &q.coeff(1), &q.coeff(0));
    for root in roots {
        let Some(r) = root.as_rat() else { continue };
        let f = &BiPoly::var(Var::X) - &BiPoly::constant(r.clone());
        if let Some(InvarianceCheck::Invariant { cofactor }) = verify_invariant(sys, &f) {
            out.push((f, cofactor));
        }
    }
    out
}

fn cmd_darboux(
    sel: Selector,
    s: String,
    curve: Vec<String>,
    check_flow: bool,
    tol: f64,
    horizon: f64,
) -> CliResult {
    let sys = sel.build()?;
    let s = parse_rat(&s).ok_or_else(|| usage(format!("--s: not a rational: {s:?}")))?;
    let mut curves = rational_line_curves(&sys);
    if let Some(spec) = sel.family_spec()? {
        let n = sel.n.ok_or_else(|| usage("--n is required"))?;
        let mu = Selector::rat_flag(&sel.mu, "mu", None)?;
        let family_curve = invariant_curve(&spec, n, &mu).map_err(usage)?;
        curves.push((family_curve.f, family_curve.cofactor));
    }
    for text in &curve {
        let f = parse_bipoly(text).map_err(usage)?;
        match verify_invariant(&sys, &f) {
            Some(InvarianceCheck::Invariant { cofactor }) => curves.push((f, cofactor)),
            Some(InvarianceCheck::NotInvariant { remainder }) => {
                return Err(CliError::Verification(format!(
                    "candidate curve {text:?} is not invariant (remainder {remainder})"
                )))
            }
            None => return Err(usage("candidate curve is the zero polynomial")),
        }
    }
    if curves.is_empty() {
        return Err(CliError::Verification(String::from(
            "no invariant algebraic curves available for this system",
        )));
    }
    let problem = DarbouxProblem { system: sys.clone(), curves, exp_factors: Vec::new() };
    let cert = match solve_cofactor_relation(&problem, &s) {
        Ok(Some(cert)) => cert,
        Ok(None) => {
            emit(&json!({ "feasible": false, "s": rat_json(&s) }));
            return Err(CliError::Verification(String::from("cofactor relation is infeasible")));
        }
        Err(e) => return Err(usage(e)),
    };
    let mut flow_check = Value::Null;
    if check_flow {
        let mut max_drift = 0.0f64;
        let mut samples = 0usize;
        let mut rng = opf_core::rng::SplitMix64::new(0xda3b0);
        let mut checked = 0;
        let mut tries = 0;
        while checked < 10 && tries < 1000 {
            tries += 1;
            let start = (rng.next_range(-0.6, 0.2), rng.next_range(-0.85, 0.85));
            match check_invariant_along_flow(&cert, &sys, start, horizon, tol, 1e-10) {
                Ok(report) => {
                    if !report.passed {
                        return Err(CliError::Verification(format!(
                            "invariant drift {} exceeds {tol} from {start:?}",
                            report.max_drift
                        )));
                    }
                    max_drift = max_drift.max(report.max_drift);
                    samples += report.samples;
                    checked += 1;
                }
                Err(_) => continue, // start landed in a bad region; resample
            }
        }
        if checked < 10 {
            return Err(CliError::Verification(String::from(
                "could not find 10 admissible starts for the flow check",
            )));
        }
        flow_check = json!({ "max_drift": max_drift, "starts": checked, "samples": samples });
    }
    emit(&json!({
        "feasible": true,
        "lambdas": cert.lambdas.iter().map(rat_json).collect::<Vec<_>>(),
        "mus": cert.mus.iter().map(rat_json).collect::<Vec<_>>(),
        "s": rat_json(&cert.s),
        "curves": cert.curves.iter().map(|(f, k)| json!({
            "f": f.to_string(), "cofactor": k.to_string()
        })).collect::<Vec<_>>(),
        "invariant": cert.description(),
        "nullspace": cert.nullspace.iter()
            .map(|v| v.iter().map(rat_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "flow_check": flow_check,
    }));
    Ok(())
}

fn cmd_critical_points(sel: Selector, include_infinity: bool) -> CliResult {
    let sys = sel.build()?;
    let order = series_order();
    let finite = classify_system(&sys, order).map_err(usage)?;
    let mut rows: Vec<Value> = finite.iter().map(crit_report_json).collect();
    if include_infinity {
        // a degenerate equator is reported, never classified
        match infinity_crit_points(&sys, order) {
            Ok(infinity) => rows.extend(infinity.iter().map(infinity_report_json)),
            Err(opf_core::compactify::CompactifyError::IdenticallyZero) => {
                eprintln!("note: degenerate equator — infinity is a line of critical points");
            }
            Err(e) => return Err(usage(e)),
        }
    }
    emit(&Value::Array(rows));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_portrait(
    sel: Selector,
    plane: bool,
    window: Option<Vec<f64>>,
    seeds: String,
    tol: f64,
    horizon: f64,
    out: PathBuf,
    csv: Option<PathBuf>,
    json_path: Option<PathBuf>,
    max_trajectories: usize,
) -> CliResult {
    let sys = sel.build()?;
    let order = series_order();
    let finite = classify_system(&sys, order).map_err(usage)?;
    let infinity = infinity_crit_points(&sys, order).unwrap_or_default();
    let mut strategies = Vec::new();
    for word in seeds.split(',').map(str::trim).filter(|w| !w.is_empty()) {
        match word {
            "grid" => strategies.push(SeedStrategy::Grid { nv: 6, nx: 6 }),
            "separatrix" => strategies.push(SeedStrategy::Separatrix),
            "invariant-lines" => strategies.push(SeedStrategy::InvariantLines),
            "none" => {}
            other => return Err(usage(format!("unknown seed strategy {other:?}"))),
        }
    }
    let spec = PortraitSpec {
        disk: !plane,
        window: match &window {
            Some(w) => [w[0], w[1], w[2], w[3]],
            None => [-4.0, 4.0, -4.0, 4.0],
        },
        seeds: strategies,
        tol,
        horizon,
        max_trajectories,
    };
    let portrait = render_portrait(&sys, &spec, &finite, &infinity).map_err(usage)?;
    fs::write(&out, &portrait.svg).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    if let Some(path) = &csv {
        fs::write(path, &portrait.csv).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let manifest = json!({
        "spec": {
            "disk": spec.disk,
            "window": spec.window,
            "tol": spec.tol,
            "horizon": spec.horizon,
            "seeds": seeds,
            "max_trajectories": spec.max_trajectories,
        },
        "system": system_json(&sys),
        "critical_points": finite.iter().map(crit_report_json)
            .chain(infinity.iter().map(infinity_report_json))
            .collect::<Vec<_>>(),
        "trajectories": portrait.trajectories.len(),
        "files": {
            "svg": out.display().to_string(),
            "csv": csv.as_ref().map(|p| p.display().to_string()),
            "manifest": json_path.as_ref().map(|p| p.display().to_string()),
        },
    });
    if let Some(path) = &json_path {
        fs::write(path, serde_json::to_string_pretty(&manifest).unwrap())
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    emit(&manifest);
    Ok(())
}

fn cmd_chebyshev_integral(n: u32, mu: String, check_flow: bool, tol: f64) -> CliResult {
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    let mu = parse_rat(&mu).ok_or_else(|| usage("--mu: not a rational"))?;
    let residuals =
        chebyshev_solutions_residual(n, &[-0.7, -0.3, 0.1, 0.5, 0.9]).map_err(usage)?;
    let exact_t = residuals.t_residual.is_zero();
    let bridge = BridgeWV::new(&mu).map_err(usage)?;
    let mut rng = opf_core::rng::SplitMix64::new(0xc4eb);
    let mut roundtrip = 0.0f64;
    for _ in 0..100 {
        let v = rng.next_range(-3.0, 3.0);
        let x = rng.next_range(-0.95, 0.95);
        let w = bridge.w_of(v, x).map_err(usage)?;
        roundtrip = roundtrip.max((bridge.v_of(w, x).map_err(usage)? - v).abs());
    }
    let (mut drift_v, mut drift_w) = (Value::Null, Value::Null);
    if check_flow {
        let sys = chebyshev_system(n, &mu).map_err(usage)?;
        let iv = first_integral_v(n, &mu).map_err(usage)?;
        let mut worst = 0.0f64;
        for start in [(0.2, 0.5), (-0.3, -0.2), (0.1, 0.0)] {
            let report = check_first_integral_flow(&iv, &sys, start, 0.35, tol, 1e-10)
                .map_err(|e| CliError::Verification(e.to_string()))?;
            if !report.passed {
                return Err(CliError::Verification(format!(
                    "I(v,x) drift {} exceeds {tol} from {start:?}",
                    report.max_drift
                )));
            }
            worst = worst.max(report.max_drift);
        }
        drift_v = json!(worst);
        let carrier = reduced_system(n);
        let iw = first_integral_w(n);
        let mut worst_w = 0.0f64;
        for start in [(0.1, 0.15), (-0.2, -0.1), (0.25, 0.0)] {
            let report = check_first_integral_flow(&iw, &carrier, start, 0.2, tol, 1e-10)
                .map_err(|e| CliError::Verification(e.to_string()))?;
            if !report.passed {
                return Err(CliError::Verification(format!(
                    "I(w,x) drift {} exceeds {tol} from {start:?}",
                    report.max_drift
                )));
            }
            worst_w = worst_w.max(report.max_drift);
        }
        drift_w = json!(worst_w);
    }
    if !exact_t {
        return Err(CliError::Verification(String::from("T-solution residual is not the zero polynomial")));
    }
    emit(&json!({
        "n": n,
        "mu": rat_json(&mu),
        "lambda": rat_json(&rat_i((n as i64) * (n as i64))),
        "exact_residual_T": exact_t,
        "max_residual_u": residuals.max_residual_u,
        "bridge_roundtrip_err": roundtrip,
        "drift_v": drift_v,
        "drift_w": drift_w,
        "first_integral_v": first_integral_v(n, &mu).map_err(usage)?.describe(),
    }));
    Ok(())
}

fn cmd_selftest(as_json: bool, inject_fault: Option<String>) -> CliResult {
    let fault = match inject_fault.as_deref() {
        None => Fault::None,
        Some("cofactor") => Fault::CorruptCofactor,
        Some(other) => return Err(usage(format!("unknown fault {other:?}"))),
    };
    use opf_core::selftest as st;
    let criteria: Vec<Box<dyn FnOnce() -> st::CriterionResult>> = vec![
        Box::new(move || st::criterion_a1(fault)),
        Box::new(st::criterion_a2),
        Box::new(st::criterion_a3),
        Box::new(st::criterion_a4),
        Box::new(st::criterion_a5),
        Box::new(st::criterion_a6),
        Box::new(st::criterion_a7),
        Box::new(st::criterion_a8),
    ];
    let mut results = Vec::new();
    for criterion in criteria {
        let started = std::time::Instant::now();
        let result = criterion();
        results.push((result, started.elapsed().as_secs_f64()));
    }
    let all_passed = results.iter().all(|(r, _)| r.passed);
    if as_json {
        let rows: Vec<Value> = results
            .iter()
            .map(|(r, secs)| {
                json!({
                    "id": r.id,
                    "description": r.description,
                    "passed": r.passed,
                    "detail": r.detail,
                    "runtime_seconds": secs,
                })
            })
            .collect();
        emit(&json!({ "passed": all_passed, "criteria": rows }));
    } else {
        for (r, secs) in &results {
            println!(
                "[{}] {} — {} ({secs:.2}s): {}",
                r.id,
                if r.passed { "PASS" } else { "FAIL" },
                r.description,
                r.detail
            );
        }
        println!("{}", if all_passed { "all criteria passed" } else { "FAILURES PRESENT" });
    }
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Verification(String::from("self-test criteria failed")))
    }
}

