//! `areaext`: certificates and sweeps for pointwise curvature data.
//!
//! Exit status: 0 on success, 1 when a certificate fails or data is
//! infeasible, 2 on malformed input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use areaext::boundary::{boundary_report, BoundaryError};
use areaext::exterior::{sec_max_bruteforce, sec_min_bruteforce, CurvatureOperator, Plane};
use areaext::families::{
    cheeger_glued, fubini_study, fubini_study_reversed, gz_curvature_at, gz_profile, on_neck, product_spheres,
    round_sphere, FamilyError, MetricPointData,
};
use areaext::io::{curvature_to_json, parse_boundary, parse_curvature, parse_point_data, IoError};
use areaext::smallmat::SelfAdjoint;
use areaext::sweeps::all_sweeps;
use areaext::thorpe::{sec_nonneg_with, tau_interval_with, SecCertificate, TauInterval, ThorpeTolerances};
use areaext::topology::{class_predicates, index_boundary, index_closed, TopologyData, TopologyError};
use areaext::weitzenbock::extremality_certificate;

#[derive(Parser, Debug)]
#[command(name = "areaext", version, about = "Pointwise curvature certificates for area-extremality questions in dimension four")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Relative feasibility tolerance for R + tau*star >= 0.
    #[arg(long, env = "AREAEXT_FEAS_TOL", global = true)]
    feas_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finsler-Thorpe test for sec >= 0 on a curvature operator file.
    FtCheck { file: PathBuf },
    /// Brute-force minimum and maximum of the sectional curvature.
    SecScan {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        density: usize,
    },
    /// Randomized sweeps over the spinor curvature lemmas.
    VerifyLemmas(SweepArgs),
    /// Pointwise extremality certificate for a competitor.
    ExtremalCert { file: PathBuf },
    /// Boundary mean-curvature bound.
    BoundaryCert { file: PathBuf },
    /// Index and competitor-class arithmetic.
    Index(IndexArgs),
    /// Emit the curvature operator of a model metric as JSON.
    Zoo(ZooArgs),
    /// Sweep the Cheeger metric on the connected sum.
    Cheeger(CheegerArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct IndexArgs {
    /// Closed manifolds (default).
    #[arg(long, conflicts_with = "boundary")]
    closed: bool,
    /// Manifolds with boundary.
    #[arg(long)]
    boundary: bool,
    #[arg(long = "chiM")]
    chi_m: i64,
    #[arg(long = "sigmaM")]
    sigma_m: i64,
    #[arg(long = "sigmaN")]
    sigma_n: i64,
    #[arg(long)]
    deg: i64,
    #[arg(long = "b0dM")]
    b0_boundary: Option<i64>,
    #[arg(long = "b2dM")]
    b2_boundary: Option<i64>,
    #[arg(long = "b2M")]
    b2_m: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ZooName {
    FubiniStudy,
    FubiniStudyReversed,
    RoundSphere,
    ProductSpheres,
    GroveZiller,
    Cheeger,
}

#[derive(Args, Debug)]
struct ZooArgs {
    #[arg(value_enum)]
    name: ZooName,
    /// Radius of the round sphere, or of the first factor.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Radius of the second factor.
    #[arg(long, default_value_t = 1.0)]
    radius2: f64,
    /// Plateau value of the warping profile.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 10.0)]
    r0: f64,
    #[arg(long, default_value_t = 12.0)]
    rmax: f64,
    /// Radius at which to evaluate the profile metrics.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheegerArgs {
    #[arg(long)]
    r0: f64,
    #[arg(long)]
    rmax: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
}

enum Failure {
    /// Malformed input: exit 2.
    Input(String),
    /// A certificate failed or the data is infeasible: exit 1.
    Check(String),
}

struct Report {
    text: String,
    json: Value,
    csv: Option<String>,
    ok: bool,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n",
            Format::Csv => self.csv.clone().unwrap_or_else(|| self.text.clone()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn input_error(path: &Path, e: IoError) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn tolerances(cli: &Cli) -> Result<ThorpeTolerances, Failure> {
    let mut tol = ThorpeTolerances::default();
    if let Some(t) = cli.feas_tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::Input(format!("feasibility tolerance must be nonnegative, got {t}")));
        }
        tol.feasibility = t;
    }
    Ok(tol)
}

fn plane_json(p: &Plane) -> Value {
    let (x, y) = p.spanning_vectors();
    json!({ "x": x, "y": y, "two_vector": p.two_vector() })
}

fn interval_json(i: &TauInterval) -> Value {
    json!({
        "bounds": i.bounds.map(|(a, b)| [a, b]),
        "peak_tau": i.peak_tau,
        "peak_value": i.peak_value,
        "strict": i.strict,
    })
}

fn interval_text(i: &TauInterval) -> String {
    match i.bounds {
        Some((a, b)) => format!("[{a:.10}, {b:.10}]"),
        None => "empty".to_string(),
    }
}

fn ft_check(cli: &Cli, file: &Path) -> Result<Report, Failure> {
    let r = parse_curvature(&read(file)?).map_err(|e| input_error(file, e))?;
    let tol = tolerances(cli)?;
    let cert = sec_nonneg_with(&r, &tol).map_err(|e| Failure::Check(e.to_string()))?;
    let interval = cert.interval();
    let mut text = format!("tau interval: {}\n", interval_text(interval));
    let json = match &cert {
        SecCertificate::Feasible { tau, interval } => {
            writeln!(text, "feasible tau: {tau:.10}").unwrap();
            writeln!(text, "strict: {}", interval.strict).unwrap();
            writeln!(text, "sec >= 0: certified").unwrap();
            json!({ "feasible": true, "tau": tau, "interval": interval_json(interval) })
        }
        SecCertificate::Counterexample { plane, sec, interval } => {
            let (x, y) = plane.spanning_vectors();
            writeln!(text, "sec >= 0: fails").unwrap();
            writeln!(text, "counterexample plane: x = {x:?}, y = {y:?}").unwrap();
            writeln!(text, "sec = {sec:.10}").unwrap();
            json!({ "feasible": false, "sec": sec, "plane": plane_json(plane), "interval": interval_json(interval) })
        }
    };
    Ok(Report { text, json, csv: None, ok: cert.is_feasible() })
}

fn sec_scan(file: &Path, density: usize) -> Result<Report, Failure> {
    if density < 8 {
        return Err(Failure::Input(format!("density must be at least 8, got {density}")));
    }
    let r = parse_curvature(&read(file)?).map_err(|e| input_error(file, e))?;
    let lo = sec_min_bruteforce(r.matrix(), density);
    let hi = sec_max_bruteforce(r.matrix(), density);
    let text = format!("min sec = {:.10}\nmax sec = {:.10}\n", lo.value, hi.value);
    let json = json!({
        "density": density,
        "min": { "value": lo.value, "grid_value": lo.grid_value, "plane": plane_json(&lo.plane) },
        "max": { "value": hi.value, "grid_value": hi.grid_value, "plane": plane_json(&hi.plane) },
    });
    let csv = format!("quantity,value\nmin_sec,{}\nmax_sec,{}\n", lo.value, hi.value);
    Ok(Report { text, json, csv: Some(csv), ok: true })
}

fn verify_lemmas(args: &SweepArgs) -> Report {
    let sweeps = all_sweeps(args.seed, args.samples as usize);
    let mut text = format!("{:<26} {:>7} {:>8}  {:<34} {}\n", "sweep", "samples", "failures", "quantity", "worst");
    let mut csv = String::from("sweep,samples,failures,quantity,worst\n");
    for s in &sweeps {
        writeln!(text, "{:<26} {:>7} {:>8}  {:<34} {:.6e}", s.name, s.samples, s.failures, s.quantity, s.worst).unwrap();
        writeln!(csv, "{},{},{},{},{}", s.name, s.samples, s.failures, s.quantity, s.worst).unwrap();
    }
    let ok = sweeps.iter().all(|s| s.passed());
    writeln!(text, "{}", if ok { "all sweeps passed" } else { "some sweeps FAILED" }).unwrap();
    let rows: Vec<Value> = sweeps
        .iter()
        .map(|s| {
            json!({
                "name": s.name,
                "samples": s.samples,
                "failures": s.failures,
                "quantity": s.quantity,
                "worst": s.worst,
                "worst_index": s.worst_index,
            })
        })
        .collect();
    let json = json!({ "seed": args.seed, "samples": args.samples, "passed": ok, "sweeps": rows });
    Report { text, json, csv: Some(csv), ok }
}

fn extremal_cert(file: &Path) -> Result<Report, Failure> {
    let p = parse_point_data(&read(file)?).map_err(|e| input_error(file, e))?;
    let rep = extremality_certificate(&p.r, p.tau, p.scal_n, &p.l).map_err(|e| Failure::Check(e.to_string()))?;
    let hypotheses = rep.area_nonincreasing && rep.scal_inequality;
    let ok = rep.positivity_holds() && hypotheses && rep.gap_holds();
    let mut text = String::new();
    writeln!(text, "area-nonincreasing: {}", rep.area_nonincreasing).unwrap();
    writeln!(text, "scal_N >= scal_M: {} ({:.10} vs {:.10})", rep.scal_inequality, rep.scal_n, rep.scal_m).unwrap();
    writeln!(text, "T(R + tau*) min on S+S+: {:.6e}", rep.t_shifted_min).unwrap();
    writeln!(text, "-tau T(*) min on S+S+: {:.6e}", rep.t_star_min).unwrap();
    writeln!(text, "sum min on S+S+: {:.6e}", rep.t_sum_min).unwrap();
    writeln!(text, "decomposition residual: {:.3e}", rep.decomposition_residual).unwrap();
    writeln!(text, "trace bound slack: {:.6e}", rep.trace_bound.slack).unwrap();
    writeln!(text, "weitzenboeck gap: {:.6e}", rep.weitzenboeck_gap).unwrap();
    writeln!(text, "rigidity hypothesis: {}", rep.rigidity_hypothesis).unwrap();
    writeln!(text, "isometry: {}", rep.isometry).unwrap();
    if !rep.scal_inequality {
        writeln!(text, "competitor violates the scalar curvature inequality").unwrap();
    }
    writeln!(text, "certificate: {}", if ok { "passed" } else { "FAILED" }).unwrap();
    let json = json!({
        "tau": rep.tau,
        "area_nonincreasing": rep.area_nonincreasing,
        "scal_inequality": rep.scal_inequality,
        "scal_M": rep.scal_m,
        "scal_N": rep.scal_n,
        "t_shifted_min": rep.t_shifted_min,
        "t_star_min": rep.t_star_min,
        "t_sum_min": rep.t_sum_min,
        "decomposition_residual": rep.decomposition_residual,
        "trace_bound": { "lhs": rep.trace_bound.lhs, "rhs": rep.trace_bound.rhs, "slack": rep.trace_bound.slack },
        "weitzenboeck_gap": rep.weitzenboeck_gap,
        "rigidity_hypothesis": rep.rigidity_hypothesis,
        "isometry": rep.isometry,
        "tolerance": rep.tolerance,
        "passed": ok,
    });
    Ok(Report { text, json, csv: None, ok })
}

fn boundary_cert(file: &Path) -> Result<Report, Failure> {
    let bd = parse_boundary(&read(file)?).map_err(|e| input_error(file, e))?;
    let rep = match boundary_report(&bd) {
        Ok(rep) => rep,
        Err(e @ BoundaryError::Indefinite { .. }) => return Err(Failure::Check(e.to_string())),
        Err(e) => return Err(Failure::Input(format!("{}: {e}", file.display()))),
    };
    let trace_identity = (rep.trace_q - rep.trace_ii).abs() <= 1e-12 * (1.0 + rep.trace_ii.abs());
    let ok = rep.bound >= -1e-9 && trace_identity && rep.bianchi_residual <= 1e-10;
    let mut text = String::new();
    writeln!(text, "Q spectrum: {:?}", rep.q_spectrum).unwrap();
    writeln!(text, "tr Q = {:.12}, tr II = {:.12}", rep.trace_q, rep.trace_ii).unwrap();
    writeln!(text, "Bianchi residual of Q: {:.3e}", rep.bianchi_residual).unwrap();
    writeln!(text, "mean-curvature bound: {:.6e}", rep.bound).unwrap();
    writeln!(text, "certificate: {}", if ok { "passed" } else { "FAILED" }).unwrap();
    let json = json!({
        "q_spectrum": rep.q_spectrum,
        "trace_q": rep.trace_q,
        "trace_ii": rep.trace_ii,
        "trace_identity": trace_identity,
        "bianchi_residual": rep.bianchi_residual,
        "bound": rep.bound,
        "t_min": rep.t_min,
        "passed": ok,
    });
    Ok(Report { text, json, csv: None, ok })
}

fn class_text(r: &Result<bool, TopologyError>) -> String {
    match r {
        Ok(true) => "yes".into(),
        Ok(false) => "no".into(),
        Err(e) => format!("undetermined ({e})"),
    }
}

fn class_json(r: &Result<bool, TopologyError>) -> Value {
    match r {
        Ok(b) => json!(b),
        Err(e) => json!({ "undetermined": e.to_string() }),
    }
}

fn index(args: &IndexArgs) -> Result<Report, Failure> {
    let t = TopologyData {
        euler_m: args.chi_m,
        sigma_m: args.sigma_m,
        sigma_n: args.sigma_n,
        deg: args.deg,
        b0_boundary: args.b0_boundary,
        b2_boundary: args.b2_boundary,
        b2_m: args.b2_m,
    };
    let value = if args.boundary { index_boundary(&t) } else { index_closed(&t) };
    let value = value.map_err(|e| Failure::Input(e.to_string()))?;
    let classes = class_predicates(&t);
    let mut text = format!("index = {value}\n");
    if let Some(w) = value.warning() {
        writeln!(text, "warning: {w}").unwrap();
    }
    for (name, c) in [("C0", &classes.c0), ("C0_self", &classes.c0_self), ("C_boundary", &classes.c_boundary), ("C_loc", &classes.c_loc)] {
        writeln!(text, "{name}: {}", class_text(c)).unwrap();
    }
    let json = json!({
        "index": value.to_string(),
        "integer": value.is_integer(),
        "warning": value.warning(),
        "classes": {
            "C0": class_json(&classes.c0),
            "C0_self": class_json(&classes.c0_self),
            "C_boundary": class_json(&classes.c_boundary),
            "C_loc": class_json(&classes.c_loc),
        },
    });
    Ok(Report { text, json, csv: None, ok: true })
}

fn family_error(e: FamilyError) -> Failure {
    match e {
        FamilyError::Infeasible(_) => Failure::Check(e.to_string()),
        _ => Failure::Input(e.to_string()),
    }
}

fn zoo(args: &ZooArgs) -> Result<String, Failure> {
    let data: MetricPointData = match args.name {
        ZooName::FubiniStudy => fubini_study(),
        ZooName::FubiniStudyReversed => fubini_study_reversed(),
        ZooName::RoundSphere => round_sphere(args.radius).map_err(family_error)?,
        ZooName::ProductSpheres => product_spheres(args.radius, args.radius2).map_err(family_error)?,
        ZooName::GroveZiller => {
            let p = gz_profile(args.b, args.r0, args.rmax).map_err(family_error)?;
            gz_curvature_at(&p, args.r).map_err(family_error)?
        }
        ZooName::Cheeger => {
            let p = gz_profile(args.b, args.r0, args.rmax).map_err(family_error)?;
            cheeger_glued(&p, args.r).map_err(family_error)?
        }
    };
    Ok(curvature_to_json(&data.r) + "\n")
}

struct CheegerRow {
    r: f64,
    tau: f64,
    scal: f64,
    ric: Vec<f64>,
    interval: TauInterval,
    shifted_min: f64,
    neck: bool,
}

fn cheeger(cli: &Cli, args: &CheegerArgs) -> Result<Report, Failure> {
    let tol = tolerances(cli)?;
    let p = gz_profile(args.b, args.r0, args.rmax).map_err(family_error)?;
    let n = args.samples as usize;
    let total = 2.0 * args.rmax;
    let rows: Vec<CheegerRow> = (0..n)
        .into_par_iter()
        .map(|k| {
            let r = total * k as f64 / (n - 1) as f64;
            let d = cheeger_glued(&p, r).expect("radius in range");
            let tau = d.tau.expect("profile metrics carry a shift");
            let op: &CurvatureOperator = &d.r;
            CheegerRow {
                r,
                tau,
                scal: d.scal,
                ric: d.ric.eigenvalues().expect("symmetric"),
                interval: tau_interval_with(op, &tol),
                shifted_min: areaext::thorpe::shifted_min_eigenvalue(op.matrix(), tau),
                neck: on_neck(&p, r),
            }
        })
        .collect();
    let failures: Vec<f64> = rows
        .iter()
        .filter(|row| row.interval.is_empty() || row.tau > 1e-12 || (row.neck && row.tau != 0.0))
        .map(|row| row.r)
        .collect();
    let ok = failures.is_empty();

    let mut text = format!("Cheeger metric: b = {}, r0 = {}, rmax = {}, gamma = {:.12}\n", args.b, args.r0, args.rmax, p.gamma().unwrap_or(f64::NAN));
    writeln!(text, "{:>12} {:>14} {:>12} {:>12} {:>30}", "r", "tau", "scal", "min Ric", "tau interval").unwrap();
    let mut csv = String::from("r,tau,scal,ric0,ric1,ric2,ric3,tau_min,tau_max,shifted_min_eig,neck\n");
    for row in &rows {
        writeln!(
            text,
            "{:>12.6} {:>14.6e} {:>12.6} {:>12.6} {:>30}",
            row.r,
            row.tau,
            row.scal,
            row.ric[0],
            interval_text(&row.interval)
        )
        .unwrap();
        let (a, b) = row.interval.bounds.unwrap_or((f64::NAN, f64::NAN));
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            row.r, row.tau, row.scal, row.ric[0], row.ric[1], row.ric[2], row.ric[3], a, b, row.shifted_min, row.neck
        )
        .unwrap();
    }
    let max_tau = rows.iter().map(|row| row.tau).fold(f64::NEG_INFINITY, f64::max);
    let min_tau = rows.iter().map(|row| row.tau).fold(f64::INFINITY, f64::min);
    writeln!(text, "max tau = {max_tau:.3e}, min tau = {min_tau:.6e}").unwrap();
    writeln!(text, "sweep: {}", if ok { "passed" } else { "FAILED" }).unwrap();
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            json!({
                "r": row.r,
                "tau": row.tau,
                "scal": row.scal,
                "ric_eigenvalues": row.ric,
                "interval": interval_json(&row.interval),
                "shifted_min_eigenvalue": row.shifted_min,
                "neck": row.neck,
            })
        })
        .collect();
    let json = json!({
        "b": args.b,
        "r0": args.r0,
        "rmax": args.rmax,
        "gamma": p.gamma(),
        "max_tau": max_tau,
        "min_tau": min_tau,
        "failures": failures,
        "passed": ok,
        "samples": json_rows,
    });
    Ok(Report { text, json, csv: Some(csv), ok })
}

fn run(cli: &Cli) -> Result<Option<Report>, Failure> {
    Ok(Some(match &cli.command {
        Command::FtCheck { file } => ft_check(cli, file)?,
        Command::SecScan { file, density } => sec_scan(file, *density)?,
        Command::VerifyLemmas(args) => verify_lemmas(args),
        Command::ExtremalCert { file } => extremal_cert(file)?,
        Command::BoundaryCert { file } => boundary_cert(file)?,
        Command::Index(args) => index(args)?,
        Command::Cheeger(args) => cheeger(cli, args)?,
        Command::Zoo(args) => {
            let doc = zoo(args)?;
            match &args.output {
                Some(path) => std::fs::write(path, doc)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => print!("{doc}"),
            }
            return Ok(None);
        }
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            print!("{}", report.render(cli.format));
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("areaext: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("areaext: invalid input: {msg}");
            ExitCode::from(2)
        }
    }
}
