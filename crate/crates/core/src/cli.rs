//! The `srkit` command line: argument parsing, dispatch to the library, and
//! report output. Exit codes are 0 for success, 1 when the computation
//! succeeded but the mathematical answer is negative (an inconclusive
//! verdict, a Brunn-Minkowski inequality that holds, a failed invariant
//! check), and 2 for errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::grushin::{
    bm_violation_check, distance_numeric, geodesic_shoot, half_plane_probe, n_threshold, ricci_from_metric, ricci_nv,
    ricci_psd, GrushinError, NParam, DEFAULT_STEPS,
};
use crate::nilpotent::{
    adapted_weights, convergence_witness, nilpotent_approximation, stratified_algebra, verify_privileged, NilError,
    DEFAULT_MAX_STEP,
};
use crate::obstruction::{be_deficit, horizontal_symmetry_space, no_be_verdict, ObsError, Outcome};
use crate::plot::{emit_plot, PlotError};
use crate::report::{write_atomic, Check, Report};
use crate::selfcheck::selfcheck_structure;
use crate::srframe::{classify_point, filtration_at, FrameError};
use crate::structure::{bundled, parse_structure, Structure, StructureError, BUNDLED};
use crate::symcore::rational::{fmt_rational, parse_rational};
use crate::symcore::{parse_polynomial, Rational, SymError, WeightVector};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Nil(#[from] NilError),
    #[error(transparent)]
    Obs(#[from] ObsError),
    #[error(transparent)]
    Grushin(#[from] GrushinError),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "srkit", version, about = "Exact and numeric computations on polynomial sub-Riemannian structures")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the JSON report to this path (atomically).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Render the report's plottable series to this SVG path.
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Numeric tolerance (geodesic shooting residual).
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Maximal bracket depth for filtrations.
    #[arg(long, global = true, default_value_t = 8)]
    pub depth: usize,
    /// Largest weighted degree of the test monomials in the verdict search.
    #[arg(long, global = true, default_value_t = crate::obstruction::DEFAULT_BUDGET_DEGREE)]
    pub budget_degree: u32,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Structure file, or the name of a bundled structure.
    pub file: String,
    /// Base point as comma-separated rationals; defaults to the origin.
    #[arg(long, value_name = "X1,X2,..")]
    pub at: Option<String>,
}

#[derive(Debug, Args)]
pub struct WeightedArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Weights of privileged coordinates; defaults to the file at the origin, else to the flag at the point.
    #[arg(long, value_name = "W1,W2,..")]
    pub weights: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Flag of the distribution at a point.
    Filtration(PointArgs),
    /// Regular or singular point, by comparing with seeded nearby probes.
    Classify {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 16)]
        probes: usize,
        #[arg(long, default_value = "1/8")]
        radius: String,
    },
    /// Nilpotent approximation in privileged coordinates at a point.
    Nilpotentize(WeightedArgs),
    /// Strata of the tangent algebra and the isotropy strata.
    Strata(WeightedArgs),
    /// Exact Bakry-Emery deficit of a polynomial test function.
    BeDeficit {
        #[command(flatten)]
        point: PointArgs,
        /// Test polynomial in x, y, z (or z1, z2, .. above dimension 3).
        #[arg(long)]
        u: String,
        /// Ignore the file's density and use Lebesgue measure.
        #[arg(long)]
        lebesgue: bool,
    },
    /// No-Bakry-Emery verdict at a point with a replayable certificate.
    Verdict(WeightedArgs),
    /// Weighted Grushin plane computations.
    #[command(subcommand)]
    Grushin(GrushinCommand),
    /// Full invariant suite on structure files (the bundled gallery by default).
    Selfcheck {
        files: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GrushinCommand {
    /// Bakry-Emery Ricci tensor, from the closed form and from the metric.
    Ricci {
        #[arg(long)]
        p: String,
        #[arg(long = "N", value_name = "N")]
        n: String,
        /// Point x at which to evaluate eigenvalues.
        #[arg(long)]
        x: Option<String>,
    },
    /// Threshold N_p of the half-plane.
    Np {
        #[arg(long)]
        p: String,
    },
    /// Positive semidefiniteness of Ric_{N,V} at x.
    Psd {
        #[arg(long)]
        p: String,
        #[arg(long = "N", value_name = "N")]
        n: String,
        #[arg(long)]
        x: String,
    },
    /// Integrate the Hamiltonian flow from a point and covector.
    Geodesic {
        #[arg(long, value_name = "X,Y")]
        from: String,
        #[arg(long, value_name = "PX,PY")]
        cov: String,
        #[arg(long = "T", value_name = "T", default_value_t = 1.0)]
        t: f64,
        /// Step size; defaults to T / 2048.
        #[arg(long)]
        h: Option<f64>,
    },
    /// Numeric distance by multistart shooting.
    Distance {
        #[arg(long, value_name = "X,Y")]
        from: String,
        #[arg(long, value_name = "X,Y")]
        to: String,
    },
    /// Brunn-Minkowski violation for the boxes at distance l.
    Bm {
        #[arg(long, default_value = "1")]
        p: String,
        /// One or more values of l, comma-separated.
        #[arg(long, default_value = "50")]
        ell: String,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        /// Half-width excess of the midpoint box; defaults to 1/(2l).
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 1e-4)]
        tol_mid: f64,
    },
    /// Whether geodesics between points of {x > 0} stay in {x > 0}.
    HalfProbe {
        #[arg(long, value_name = "X,Y", default_value = "1/2,0")]
        lo: String,
        #[arg(long, value_name = "X,Y", default_value = "2,1")]
        hi: String,
        #[arg(long, default_value_t = 4)]
        grid: usize,
    },
}

/// A finished run: the report plus whether the mathematical answer was negative.
pub struct RunOutcome {
    pub report: Report,
    pub negative: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn rational(s: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(s.trim()).ok_or_else(|| usage(format!("{what}: {s:?} is not a rational")))
}

fn rational_list(s: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(|t| rational(t, what)).collect()
}

fn float_pair(s: &str, what: &str) -> Result<[f64; 2], CliError> {
    let v = rational_list(s, what)?;
    match v.as_slice() {
        [a, b] => Ok([crate::symcore::rational::to_f64(a), crate::symcore::rational::to_f64(b)]),
        _ => Err(usage(format!("{what}: expected two comma-separated numbers"))),
    }
}

fn n_param(s: &str) -> Result<NParam, CliError> {
    NParam::from_str(s).map_err(|_| usage(format!("N: {s:?} is neither a rational nor inf")))
}

fn load(file: &str) -> Result<Structure, CliError> {
    let path = Path::new(file);
    if path.exists() {
        return Ok(parse_structure(path)?);
    }
    bundled(file).ok_or_else(|| {
        let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
        usage(format!("{file}: no such file or bundled structure ({})", names.join(", ")))
    })
}

fn point(s: &Structure, at: &Option<String>) -> Result<Vec<Rational>, CliError> {
    let n = s.frame.dim();
    let x = match at {
        Some(a) => rational_list(a, "--at")?,
        None => vec![Rational::from_integer(0.into()); n],
    };
    if x.len() != n {
        return Err(usage(format!("--at has {} coordinates, dimension is {n}", x.len())));
    }
    Ok(x)
}

fn rationals_json(x: &[Rational]) -> Vec<String> {
    x.iter().map(fmt_rational).collect()
}

/// Weights from the flag, the file (at the origin only), or the flag dimensions at the point.
fn weights(s: &Structure, x: &[Rational], flag: &Option<String>, depth: usize) -> Result<(WeightVector, &'static str), CliError> {
    if let Some(w) = flag {
        let w: Vec<u32> = w
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| usage(format!("--weights: {t:?} is not a positive integer"))))
            .collect::<Result<_, _>>()?;
        if w.len() != s.frame.dim() {
            return Err(usage(format!("--weights has length {}, dimension is {}", w.len(), s.frame.dim())));
        }
        return Ok((WeightVector::new(w)?, "flag"));
    }
    if let (Some(w), true) = (&s.weights, is_origin(x)) {
        return Ok((w.clone(), "file"));
    }
    let f = filtration_at(&s.frame, x, depth, true)?;
    Ok((adapted_weights(&f)?, "adapted"))
}

fn is_origin(x: &[Rational]) -> bool {
    x.iter().all(|c| *c == Rational::from_integer(0.into()))
}

/// The frame written in coordinates centred at `x`.
fn centred(s: &Structure, x: &[Rational]) -> Result<crate::srframe::SRFrame, CliError> {
    Ok(if is_origin(x) { s.frame.clone() } else { s.frame.translated(x)? })
}

fn base_report(name: &str, g: &GlobalOpts) -> Report {
    let mut r = Report::new(name);
    r.seed = Some(g.seed);
    r.input("tol", g.tol).input("depth", g.depth).input("budget_degree", g.budget_degree);
    r
}

pub fn run(cli: &Cli) -> Result<RunOutcome, CliError> {
    let g = &cli.global;
    let mut negative = false;
    let report = match &cli.command {
        Command::Filtration(a) => {
            let s = load(&a.file)?;
            let x = point(&s, &a.at)?;
            let f = filtration_at(&s.frame, &x, g.depth, false)?;
            let mut r = base_report("filtration", g);
            r.input("structure", s.name()).input("at", rationals_json(&x));
            r.check(Check::new("dims non-decreasing", f.dims.windows(2).all(|w| w[0] <= w[1])));
            r.output("filtration", &f);
            r
        }
        Command::Classify { point: a, probes, radius } => {
            let s = load(&a.file)?;
            let x = point(&s, &a.at)?;
            let radius = rational(radius, "--radius")?;
            let c = classify_point(&s.frame, &x, &radius, *probes, g.depth, g.seed)?;
            let mut r = base_report("classify", g);
            r.input("structure", s.name())
                .input("at", rationals_json(&x))
                .input("probes", probes)
                .input("radius", fmt_rational(&radius));
            r.output("class", c.class).output("classification", &c);
            r
        }
        Command::Nilpotentize(a) => {
            let s = load(&a.point.file)?;
            let x = point(&s, &a.point.at)?;
            let (w, source) = weights(&s, &x, &a.weights, g.depth)?;
            let frame = centred(&s, &x)?;
            let mut r = base_report("nilpotentize", g);
            r.input("structure", s.name()).input("at", rationals_json(&x)).input("weights", w.as_slice());
            r.input("weights_source", source);
            let privileged = verify_privileged(&frame, &w)?;
            r.check(Check::new("coordinates privileged", privileged.privileged));
            r.output("privileged", &privileged);
            if privileged.privileged {
                let hat = nilpotent_approximation(&frame, &w)?;
                let fields: Vec<String> = hat.fields().iter().map(ToString::to_string).collect();
                r.output("fields", fields);
                for (i, x) in frame.fields().iter().enumerate() {
                    let c = convergence_witness(x, &w, i)?;
                    r.check(Check::with_detail(
                        format!("X{} rescaling remainder divisible by eps", i + 1),
                        c.remainder_divisible_by_eps,
                        c.remainder.to_string(),
                    ));
                }
            }
            r
        }
        Command::Strata(a) => {
            let s = load(&a.point.file)?;
            let x = point(&s, &a.point.at)?;
            let (w, source) = weights(&s, &x, &a.weights, g.depth)?;
            let frame = centred(&s, &x)?;
            let hat = nilpotent_approximation(&frame, &w)?;
            let strata = stratified_algebra(&hat, &w, DEFAULT_MAX_STEP)?;
            let sym = horizontal_symmetry_space(&hat, &strata)?;
            let mut r = base_report("strata", g);
            r.input("structure", s.name()).input("at", rationals_json(&x)).input("weights", w.as_slice());
            r.input("weights_source", source);
            for c in strata.checks() {
                r.check(c);
            }
            r.output("step", strata.step)
                .output("g_dims", strata.g_dims())
                .output("h_dims", strata.h_dims())
                .output("strata", &strata)
                .output("symmetry_space", &sym);
            r
        }
        Command::BeDeficit { point: a, u, lebesgue } => {
            let s = load(&a.file)?;
            let x = point(&s, &a.at)?;
            let u_poly = parse_polynomial(u, s.frame.dim())?;
            let density = if *lebesgue { None } else { s.density() };
            let d = be_deficit(&s.frame, density, &u_poly, Some(&x))?;
            let mut r = base_report("be-deficit", g);
            r.input("structure", s.name())
                .input("at", rationals_json(&x))
                .input("u", u_poly.to_string())
                .input("measure", if density.is_some() { "density" } else { "lebesgue" });
            if let Some(ok) = d.expansion_is_minus_a {
                r.check(Check::new("sum-of-squares expansion equals -A", ok));
            }
            r.output("deficit", &d);
            r
        }
        Command::Verdict(a) => {
            let s = load(&a.point.file)?;
            let x = point(&s, &a.point.at)?;
            let (w, source) = weights(&s, &x, &a.weights, g.depth)?;
            let v = no_be_verdict(&s.frame, &x, &w, g.budget_degree)?;
            let replay = v.replay()?;
            let mut r = base_report("verdict", g);
            r.input("structure", s.name()).input("at", rationals_json(&x)).input("weights", w.as_slice());
            r.input("weights_source", source);
            r.check(Check::with_detail("certificate replays", replay.reproduced, replay.outcome.to_string()));
            for c in replay.checks {
                r.check(c);
            }
            negative = v.outcome == Outcome::Inconclusive;
            r.output("outcome", v.outcome).output("verdict", &v);
            r
        }
        Command::Grushin(cmd) => {
            let (r, neg) = run_grushin(cmd, g)?;
            negative = neg;
            r
        }
        Command::Selfcheck { files } => {
            let structures: Vec<Structure> = if files.is_empty() {
                BUNDLED.iter().map(|(n, _)| bundled(n).expect("bundled structures parse")).collect()
            } else {
                files.iter().map(|f| load(f)).collect::<Result<_, _>>()?
            };
            let mut r = base_report("selfcheck", g);
            let names: Vec<&str> = structures.iter().map(|s| s.source.as_str()).collect();
            r.input("structures", names);
            let mut summaries = Vec::new();
            for s in &structures {
                let (summary, checks) = selfcheck_structure(s, g.seed, g.depth);
                for c in checks {
                    r.check(Check { name: format!("{}: {}", s.name(), c.name), ..c });
                }
                summaries.push(summary);
            }
            r.output("structures", summaries);
            r
        }
    };
    Ok(RunOutcome { report, negative })
}

fn run_grushin(cmd: &GrushinCommand, g: &GlobalOpts) -> Result<(Report, bool), CliError> {
    let mut negative = false;
    let r = match cmd {
        GrushinCommand::Ricci { p, n, x } => {
            let p = rational(p, "--p")?;
            let n = n_param(n)?;
            let closed = ricci_nv(&p, &n)?;
            let metric = ricci_from_metric(&p, &n)?;
            let mut r = base_report("grushin ricci", g);
            r.input("p", fmt_rational(&p)).input("N", n.to_string());
            r.check(Check::new("metric computation equals closed form", closed == metric));
            r.output("ricci", &closed);
            if let Some(x) = x {
                let x = rational(x, "--x")?;
                r.input("x", fmt_rational(&x));
                r.output("eigenvalues", closed.eigenvalues_at(&x)?).output("psd", closed.is_psd_at(&x)?);
            }
            r
        }
        GrushinCommand::Np { p } => {
            let p = rational(p, "--p")?;
            let np = n_threshold(&p)?;
            let mut r = base_report("grushin np", g);
            r.input("p", fmt_rational(&p));
            r.output("n_p", np.to_string());
            r
        }
        GrushinCommand::Psd { p, n, x } => {
            let (p, n, x) = (rational(p, "--p")?, n_param(n)?, rational(x, "--x")?);
            let psd = ricci_psd(&p, &n, &x)?;
            let mut r = base_report("grushin psd", g);
            r.input("p", fmt_rational(&p)).input("N", n.to_string()).input("x", fmt_rational(&x));
            r.output("psd", psd);
            r
        }
        GrushinCommand::Geodesic { from, cov, t, h } => {
            let q0 = float_pair(from, "--from")?;
            let l0 = float_pair(cov, "--cov")?;
            let h = h.unwrap_or(t / DEFAULT_STEPS as f64);
            let arc = geodesic_shoot(q0, l0, *t, h)?;
            let mut r = base_report("grushin geodesic", g);
            r.input("from", q0).input("cov", l0).input("T", t).input("h", h);
            r.output("end", arc.end()).output("energy", arc.energy).output("energy_drift", arc.energy_drift);
            r.output("length", arc.length).output("trajectory", &arc.trajectory);
            r
        }
        GrushinCommand::Distance { from, to } => {
            let (a, b) = (float_pair(from, "--from")?, float_pair(to, "--to")?);
            let cert = distance_numeric(a, b, g.tol)?;
            let arc = cert.arc();
            let mut r = base_report("grushin distance", g);
            r.input("from", a).input("to", b);
            r.check(Check::with_detail(
                "energy conserved",
                cert.energy_drift <= crate::grushin::ENERGY_TOL,
                format!("{:e}", cert.energy_drift),
            ));
            let within = cert.distance >= cert.bounds.lower - g.tol
                && cert.bounds.upper.is_none_or(|u| cert.distance <= u + g.tol);
            r.check(Check::new("distance within the a priori window", within));
            r.output("distance", cert.distance)
                .output("midpoint", cert.midpoint())
                .output("certificate", &cert)
                .output("trajectory", &arc.trajectory);
            r
        }
        GrushinCommand::Bm { p, ell, grid, eps, tol_mid } => {
            let p = rational(p, "--p")?;
            let ells = rational_list(ell, "--ell")?;
            let eps = eps.as_deref().map(|e| rational(e, "--eps")).transpose()?;
            let mut r = base_report("grushin bm", g);
            r.input("p", fmt_rational(&p))
                .input("ell", rationals_json(&ells))
                .input("grid", grid)
                .input("eps", eps.as_ref().map(fmt_rational))
                .input("tol_mid", tol_mid);
            let mut runs = Vec::new();
            let mut curve = Vec::new();
            let mut cloud = Vec::new();
            for l in &ells {
                let b = bm_violation_check(&p, l, *grid, eps.clone(), *tol_mid)?;
                negative |= b.violation != Some(true);
                curve.push([crate::symcore::rational::to_f64(l), b.margin]);
                if cloud.is_empty() {
                    cloud = b.midpoints.samples.iter().map(|s| s.midpoint).collect();
                }
                runs.push(json!({
                    "ell": fmt_rational(l),
                    "m_a0": b.m_a0,
                    "m_a1": b.m_a1,
                    "sqrt_product": b.sqrt_product,
                    "bound": b.bound,
                    "eps": fmt_rational(&b.eps),
                    "margin": b.margin,
                    "containment_certified": b.containment_certified,
                    "violation": b.violation,
                    "crude_bound_insufficient": b.crude_bound_insufficient,
                    "midpoint_box": {
                        "x_range": b.midpoints.x_range,
                        "y_range": b.midpoints.y_range,
                        "max_abs_x": b.midpoints.max_abs_x,
                        "eps_analytic": fmt_rational(&b.midpoints.eps_analytic),
                        "pairs": b.midpoints.samples.len(),
                        "rejected": b.midpoints.rejected,
                        "strip_ok": b.midpoints.strip_ok,
                    },
                }));
            }
            r.output("runs", runs);
            if ells.len() > 1 {
                r.output("margin_curve", curve);
            } else {
                r.output("midpoints", cloud);
            }
            r
        }
        GrushinCommand::HalfProbe { lo, hi, grid } => {
            let (lo, hi) = (float_pair(lo, "--lo")?, float_pair(hi, "--hi")?);
            let probe = half_plane_probe(lo, hi, *grid)?;
            let mut r = base_report("grushin half-probe", g);
            r.input("lo", lo).input("hi", hi).input("grid", grid);
            r.output("probe", &probe);
            r
        }
    };
    Ok((r, negative))
}

fn summary(r: &Report) -> String {
    let mut out = format!("srkit {} (seed {})\n", r.command, r.seed.unwrap_or_default());
    if let Value::Object(m) = &r.outputs {
        for (k, v) in m {
            let s = v.to_string();
            if s.len() <= 160 {
                out.push_str(&format!("  {k}: {s}\n"));
            } else {
                out.push_str(&format!("  {k}: ({} bytes, use --json)\n", s.len()));
            }
        }
    }
    for c in &r.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        match &c.detail {
            Some(d) => out.push_str(&format!("  [{mark}] {} ({d})\n", c.name)),
            None => out.push_str(&format!("  [{mark}] {}\n", c.name)),
        }
    }
    out
}

fn configure_threads() {
    if let Some(n) = std::env::var("SRKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second call in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args`, runs the command, prints the result and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let started = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut report = outcome.report;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    let g = &cli.global;
    if let Some(path) = &g.out {
        if let Err(e) = write_atomic(path, report.to_json().as_bytes()) {
            eprintln!("error: {}", CliError::from(e));
            return 2;
        }
    }
    if let Some(path) = &g.svg {
        if let Err(e) = emit_plot(&report, path) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    if g.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", summary(&report));
    }
    if outcome.negative || !report.checks_passed() {
        1
    } else {
        0
    }
}
