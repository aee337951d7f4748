//! Command-line surface: certify cone membership or polynomial
//! nonnegativity, verify certificate files (numerically and exactly),
//! reconstruct primal witnesses, and run the barrier self-test suite.
//!
//! Exit codes: `0` certified/proven, `1` usage or input error,
//! `2` inconclusive (never a disproof), `3` refuted by exact replay,
//! `4` exact arithmetic unavailable for the cone.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::barriers::{ConeSpec, RatScalar};
use crate::certify::{self, CertKind, ExactOutcome};
use crate::cone::lhscb_selfcheck;
use crate::exact::{format_rational, parse_rational, snap_vec, vec_to_f64, RatMatrix, RatVec};
use crate::image::{ImageCone, PrimalWitness, StackedCone};
use crate::ipa::{solve_membership, MembershipProblem, SolveStatus, SolverConfig, TraceEntry};
use crate::poly::{build_program, certify_nonneg, Method, PolyFile, PolySpec};

#[derive(Parser)]
#[command(
    name = "conecert",
    about = "Dual membership certificates for convex cones and polynomial nonnegativity",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify membership of a vector in a cone, or nonnegativity of a
    /// polynomial, producing a certificate file.
    Certify(CertifyArgs),
    /// Replay a certificate file (numerically; exactly with --exact).
    Verify(VerifyArgs),
    /// Reconstruct a primal witness from a certificate file.
    Reconstruct(ReconstructArgs),
    /// Certified lower bound for a polynomial.
    Lowerbound(LowerboundArgs),
    /// Run every barrier's LHSCB identity suite plus the exp/power-cone
    /// counterexample reproductions.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Neighborhood radius (B mode tightens it to 0.9/(2(1+nu))).
    #[arg(long, default_value_t = 0.25)]
    eta: f64,
    /// Path-parameter shrink factor per step.
    #[arg(long, default_value_t = 0.125)]
    theta: f64,
    /// Stabilization tolerance for certified bounds.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Certificate kind: H (hyperbolic cones only) or B (any cone).
    #[arg(long, value_parser = parse_mode)]
    mode: Option<CertKind>,
    #[arg(long, default_value_t = 400)]
    max_iters: usize,
    /// Denominator cap for snapping dual iterates to rationals.
    #[arg(long, default_value_t = 1_000_000_000_000)]
    snap_denominator_cap: u64,
    /// RNG seed for sampling-based checks.
    #[arg(long, default_value_t = 20240817)]
    seed: u64,
}

fn parse_mode(s: &str) -> Result<CertKind, String> {
    match s {
        "H" | "h" => Ok(CertKind::H),
        "B" | "b" => Ok(CertKind::B),
        other => Err(format!("mode must be H or B, got {other:?}")),
    }
}

impl SolverArgs {
    fn config(&self, default_mode: CertKind) -> SolverConfig {
        SolverConfig {
            eta: self.eta,
            theta: self.theta,
            tol: self.tol,
            max_iters: self.max_iters,
            mode: self.mode.unwrap_or(default_mode),
            snap_denominator_cap: self.snap_denominator_cap,
            early_stop: false,
        }
    }
}

#[derive(Args)]
struct CertifyArgs {
    /// Cone spec JSON file (the barrier domain, i.e. the dual of the
    /// certified cone; self-dual for orthant/PSD).
    #[arg(long, conflicts_with = "poly")]
    cone: Option<PathBuf>,
    /// Target vector, comma separated rationals (with --cone).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Direction w in the cone interior (defaults to -g at the reference
    /// point; the constant-one polynomial for --poly).
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Polynomial (inline text, or @file.json / @file.txt).
    #[arg(long)]
    poly: Option<String>,
    /// Nonnegativity cone: sos | sonc | dsos | sdsos | ag.
    #[arg(long, default_value = "sos")]
    method: String,
    /// Also replay the certificate in exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Write the solver trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Output certificate path.
    #[arg(long, default_value = "certificate.json")]
    out: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct VerifyArgs {
    certificate: PathBuf,
    /// Replay in exact rational arithmetic (exit 4 if unavailable).
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct ReconstructArgs {
    certificate: PathBuf,
    /// For optimization certificates: `auto` picks the smallest feasible
    /// objective value; a number evaluates `x_gamma` there.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, default_value = "witness.json")]
    out: PathBuf,
    /// Reconstruct in exact rational arithmetic where possible.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct LowerboundArgs {
    /// Polynomial (inline text, or @file.json / @file.txt).
    #[arg(long)]
    poly: String,
    #[arg(long, default_value = "sos")]
    method: String,
    /// Also produce the explicit decomposition of p - bound.
    #[arg(long)]
    decomposition: bool,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value = "lowerbound.json")]
    out: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SelfcheckArgs {
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 20240817)]
    seed: u64,
}

/// Certificate file: `{cone, kind, y, b, witness, margins, exact}` plus
/// optional polynomial/optimization context for reconstruction. Vector
/// entries are rationals (`p/q`) or decimal strings.
#[derive(Serialize, Deserialize)]
pub struct CertificateFile {
    pub cone: ConeSpec,
    pub kind: CertKind,
    pub y: Vec<String>,
    pub b: Vec<String>,
    pub witness: Vec<String>,
    pub y_margin: f64,
    pub witness_margin: f64,
    pub exact: ExactOutcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub poly: Option<PolyFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stacked: Option<StackedData>,
}

/// Standard-form context `(c, A, b)` for optimization certificates; the
/// `cone` field then holds the *base* (unstacked) barrier domain.
#[derive(Serialize, Deserialize)]
pub struct StackedData {
    pub c: Vec<RatScalar>,
    pub a: Vec<Vec<RatScalar>>,
    pub b: Vec<RatScalar>,
}

fn strings_to_ratvec(v: &[String]) -> Result<RatVec, String> {
    v.iter()
        .map(|s| parse_rational(s).map_err(|e| e.to_string()))
        .collect()
}

fn format_f64(x: f64) -> String {
    // 12 significant digits, reparseable.
    format!("{x:.11e}")
}

fn vector_strings(v: &DVector<f64>, exact: Option<&RatVec>) -> Vec<String> {
    match exact {
        Some(r) => r.iter().map(format_rational).collect(),
        None => v.iter().map(|&x| format_f64(x)).collect(),
    }
}

fn atomic_write(path: &Path, content: &str) -> Result<(), String> {
    let tmp = path.with_extension("tmp-write");
    std::fs::write(&tmp, content).map_err(|e| format!("writing {}: {e}", tmp.display()))?;
    std::fs::rename(&tmp, path).map_err(|e| format!("renaming into {}: {e}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let content = serde_json::to_string_pretty(value).map_err(|e| format!("serializing: {e}"))?;
    atomic_write(path, &content)
}

fn write_trace(path: &Path, trace: &[TraceEntry]) -> Result<(), String> {
    let mut out = String::new();
    for entry in trace {
        out.push_str(&serde_json::to_string(entry).map_err(|e| e.to_string())?);
        out.push('\n');
    }
    atomic_write(path, &out)
}

fn load_poly(spec: &str) -> Result<PolySpec, String> {
    let text = if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
    } else {
        spec.to_string()
    };
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let file: PolyFile =
            serde_json::from_str(trimmed).map_err(|e| format!("polynomial JSON: {e}"))?;
        file.to_poly().map_err(|e| e.to_string())
    } else {
        PolySpec::parse(trimmed).map_err(|e| e.to_string())
    }
}

fn parse_vector(s: &str) -> Result<RatVec, String> {
    s.split(',')
        .map(|p| parse_rational(p.trim()).map_err(|e| e.to_string()))
        .collect()
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Certify(args) => cmd_certify(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Lowerbound(args) => cmd_lowerbound(args),
        Command::Selfcheck(args) => cmd_selfcheck(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn status_exit(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::CertifiedMember => 0,
        SolveStatus::CertifiedBoundOnly | SolveStatus::Inconclusive => 2,
    }
}

fn cmd_certify(args: CertifyArgs) -> Result<i32, String> {
    if let Some(poly_arg) = &args.poly {
        return certify_poly(&args, poly_arg);
    }
    let cone_path = args
        .cone
        .as_ref()
        .ok_or("provide --poly or --cone with --b")?;
    let b_arg = args.b.as_ref().ok_or("--cone requires --b")?;
    let spec: ConeSpec = serde_json::from_str(
        &std::fs::read_to_string(cone_path)
            .map_err(|e| format!("reading {}: {e}", cone_path.display()))?,
    )
    .map_err(|e| format!("cone spec: {e}"))?;
    let oracle = spec.oracle().map_err(|e| e.to_string())?;
    let b_rat = parse_vector(b_arg)?;
    let w = match &args.w {
        Some(w) => Some(vec_to_f64(&parse_vector(w)?)),
        None => None,
    };
    let problem =
        MembershipProblem::new(oracle.clone(), vec_to_f64(&b_rat), w).map_err(|e| e.to_string())?;
    let config = args.solver.config(if oracle.hyperbolic() {
        CertKind::H
    } else {
        CertKind::B
    });
    let report = solve_membership(&problem, &config).map_err(|e| e.to_string())?;
    if let Some(path) = &args.trace {
        write_trace(path, &report.trace)?;
    }
    println!(
        "status: {:?}   certified bound: {}",
        report.status,
        format_f64(report.best_alpha)
    );
    if let Some(cert) = &report.certificate {
        let exact = if args.exact {
            replay_exact(&*oracle, cert, config.snap_denominator_cap)
        } else {
            ExactOutcome::Skipped
        };
        let file = CertificateFile {
            cone: spec,
            kind: cert.kind,
            y: vector_strings(&cert.y, None),
            b: vector_strings(&cert.b, None),
            witness: vector_strings(&cert.witness, None),
            y_margin: cert.y_margin,
            witness_margin: cert.witness_margin,
            exact,
            poly: None,
            method: None,
            alpha: Some(format_f64(report.best_alpha)),
            stacked: None,
        };
        write_json(&args.out, &file)?;
        println!("certificate written to {}", args.out.display());
    }
    Ok(status_exit(report.status))
}

fn replay_exact(
    oracle: &dyn crate::cone::BarrierOracle,
    cert: &certify::DualCertificate,
    cap: u64,
) -> ExactOutcome {
    let y = snap_vec(&cert.y, cap);
    let b = snap_vec(&cert.b, cap);
    match certify::exact_verify(oracle, &y, &b, cert.kind) {
        Ok(outcome) => outcome,
        Err(_) => ExactOutcome::Skipped,
    }
}

fn certify_poly(args: &CertifyArgs, poly_arg: &str) -> Result<i32, String> {
    let p = load_poly(poly_arg)?;
    let method: Method = args
        .method
        .parse()
        .map_err(|e: crate::poly::PolyError| e.to_string())?;
    let default_mode = match method {
        Method::Sonc | Method::Ag => CertKind::B,
        _ => CertKind::H,
    };
    let config = args.solver.config(default_mode);
    let report = certify_nonneg(&p, method, false, &config).map_err(|e| e.to_string())?;
    if let (Some(path), Some(solve)) = (&args.trace, &report.solve) {
        write_trace(path, &solve.trace)?;
    }
    println!(
        "status: {:?}   certified bound: {}",
        report.status,
        format_f64(report.bound)
    );
    if method == Method::Ag {
        if let Some(ag) = &report.ag {
            println!(
                "entropy slacks: {} / {}",
                format_f64(ag.slack_plus),
                format_f64(ag.slack_minus)
            );
        }
        return Ok(status_exit(report.status));
    }
    if let Some(cert) = &report.certificate {
        let program = build_program(&p, method, None).map_err(|e| e.to_string())?;
        let cone = ConeSpec::pullback(program.image.base.clone(), &program.image.a);
        let oracle = program.image.dual_oracle();
        let exact = if args.exact {
            replay_exact(&*oracle, cert, config.snap_denominator_cap)
        } else {
            ExactOutcome::Skipped
        };
        let file = CertificateFile {
            cone,
            kind: cert.kind,
            y: vector_strings(&cert.y, None),
            b: vector_strings(&cert.b, None),
            witness: vector_strings(&cert.witness, None),
            y_margin: cert.y_margin,
            witness_margin: cert.witness_margin,
            exact,
            poly: Some(PolyFile::from_poly(&p)),
            method: Some(method.to_string()),
            alpha: Some(format_f64(report.bound)),
            stacked: None,
        };
        write_json(&args.out, &file)?;
        println!("certificate written to {}", args.out.display());
    }
    Ok(status_exit(report.status))
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, String> {
    let file: CertificateFile = serde_json::from_str(
        &std::fs::read_to_string(&args.certificate)
            .map_err(|e| format!("reading {}: {e}", args.certificate.display()))?,
    )
    .map_err(|e| format!("certificate JSON: {e}"))?;
    let oracle = file.cone.oracle().map_err(|e| e.to_string())?;
    let y_rat = strings_to_ratvec(&file.y)?;
    let b_rat = strings_to_ratvec(&file.b)?;
    let y = vec_to_f64(&y_rat);
    let b = vec_to_f64(&b_rat);

    let float_ok = match certify::check_certificate(&*oracle, &y, &b, file.kind) {
        Ok(cert) => {
            println!(
                "float replay: accepted (witness margin {})",
                format_f64(cert.witness_margin)
            );
            true
        }
        Err(e) => {
            println!("float replay: rejected ({e})");
            false
        }
    };
    if !args.exact {
        return Ok(if float_ok { 0 } else { 3 });
    }
    match certify::exact_verify(&*oracle, &y_rat, &b_rat, file.kind) {
        Ok(ExactOutcome::Proven) => {
            println!("exact replay: Proven");
            Ok(0)
        }
        Ok(_) => {
            println!("exact replay: Refuted");
            Ok(3)
        }
        Err(certify::CertifyError::Exact(e)) => {
            println!("exact replay unavailable: {e}");
            Ok(4)
        }
        Err(e) => {
            println!("exact replay rejected: {e}");
            Ok(3)
        }
    }
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<i32, String> {
    let file: CertificateFile = serde_json::from_str(
        &std::fs::read_to_string(&args.certificate)
            .map_err(|e| format!("reading {}: {e}", args.certificate.display()))?,
    )
    .map_err(|e| format!("certificate JSON: {e}"))?;
    let y_rat = strings_to_ratvec(&file.y)?;

    // Optimization certificate: reconstruct the affine family x_gamma.
    if let Some(stacked) = &file.stacked {
        let c: RatVec = stacked.c.iter().map(|r| r.0.clone()).collect();
        let b: RatVec = stacked.b.iter().map(|r| r.0.clone()).collect();
        let a = RatMatrix::from_rows(
            stacked
                .a
                .iter()
                .map(|row| row.iter().map(|r| r.0.clone()).collect())
                .collect(),
        );
        let sc = StackedCone::new(file.cone.clone(), c, a, b, None).map_err(|e| e.to_string())?;
        let family = sc
            .reconstruct_optimal_exact(&y_rat, file.kind)
            .map_err(|e| e.to_string())?;
        let gamma = if args.gamma == "auto" {
            family
                .min_feasible_gamma()
                .ok_or("no feasible gamma for this dual point")?
        } else {
            parse_rational(&args.gamma).map_err(|e| e.to_string())?
        };
        let x = family.at(&gamma);
        let member = sc.image.base.dual_member_exact(&x).unwrap_or(false);
        let xf = vec_to_f64(&x);
        let report = WitnessFile {
            x: x.iter().map(format_rational).collect(),
            gamma: Some(format_rational(&gamma)),
            residual: 0.0,
            base_margin: sc.image.base.dual_margin(&xf).unwrap_or(f64::NAN),
            exact: true,
            base_member: member,
        };
        write_json(&args.out, &report)?;
        println!(
            "x_gamma at gamma = {} written to {} (base member: {member})",
            format_rational(&gamma),
            args.out.display()
        );
        return Ok(if member { 0 } else { 2 });
    }

    // Membership certificate: rebuild the image program.
    let (image, b_rat) = if let (Some(poly), Some(method)) = (&file.poly, &file.method) {
        let p = poly.to_poly().map_err(|e| e.to_string())?;
        let method: Method = method
            .parse()
            .map_err(|e: crate::poly::PolyError| e.to_string())?;
        let program = build_program(&p, method, None).map_err(|e| e.to_string())?;
        let mut b = program.b.clone();
        if let Some(alpha) = &file.alpha {
            let alpha = parse_rational(alpha).map_err(|e| e.to_string())?;
            let zero = vec![0u32; p.nvars()];
            let idx = program
                .support_index(&zero)
                .ok_or("certificate polynomial has no constant slot")?;
            b[idx] = &b[idx] - &alpha;
        }
        (program.image, b)
    } else {
        match &file.cone {
            ConeSpec::Pullback { base, .. } => {
                let a = file.cone.pullback_matrix().unwrap();
                let image = ImageCone::new((**base).clone(), a, None).map_err(|e| e.to_string())?;
                (image, strings_to_ratvec(&file.b)?)
            }
            other => {
                let a = RatMatrix::identity(other.dim());
                let image = ImageCone::new(other.clone(), a, None).map_err(|e| e.to_string())?;
                (image, strings_to_ratvec(&file.b)?)
            }
        }
    };
    let witness = if args.exact {
        image
            .reconstruct_primal_exact(&y_rat, &b_rat, file.kind)
            .map_err(|e| e.to_string())?
    } else {
        image
            .reconstruct_primal(&vec_to_f64(&y_rat), &vec_to_f64(&b_rat), file.kind)
            .map_err(|e| e.to_string())?
    };
    let ok = witness.exact_member.unwrap_or(witness.base_margin >= 0.0);
    let report = witness_file(&witness, None);
    write_json(&args.out, &report)?;
    println!(
        "witness written to {} (residual {}, base margin {})",
        args.out.display(),
        format_f64(witness.residual),
        format_f64(witness.base_margin)
    );
    Ok(if ok { 0 } else { 2 })
}

#[derive(Serialize, Deserialize)]
struct WitnessFile {
    x: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    gamma: Option<String>,
    residual: f64,
    base_margin: f64,
    exact: bool,
    base_member: bool,
}

fn witness_file(w: &PrimalWitness, gamma: Option<String>) -> WitnessFile {
    WitnessFile {
        x: vector_strings(&w.x, w.x_exact.as_ref()),
        gamma,
        residual: w.residual,
        base_margin: w.base_margin,
        exact: w.x_exact.is_some(),
        base_member: w.exact_member.unwrap_or(w.base_margin >= 0.0),
    }
}

fn cmd_lowerbound(args: LowerboundArgs) -> Result<i32, String> {
    let p = load_poly(&args.poly)?;
    let method: Method = args
        .method
        .parse()
        .map_err(|e: crate::poly::PolyError| e.to_string())?;
    let default_mode = match method {
        Method::Sonc | Method::Ag => CertKind::B,
        _ => CertKind::H,
    };
    let config = args.solver.config(default_mode);
    let report =
        certify_nonneg(&p, method, args.decomposition, &config).map_err(|e| e.to_string())?;
    if let (Some(path), Some(solve)) = (&args.trace, &report.solve) {
        write_trace(path, &solve.trace)?;
    }
    println!(
        "method: {}   status: {:?}   certified lower bound: {}",
        method,
        report.status,
        format_f64(report.bound)
    );
    let out = LowerboundFile {
        method: method.to_string(),
        status: format!("{:?}", report.status),
        bound: report.bound,
        bound_exact: report.bound_exact.as_ref().map(format_rational),
        decomposition: report
            .decomposition
            .as_ref()
            .map(|d| d.kind_name().to_string()),
        certified_poly: report.certified_poly.as_ref().map(PolySpec::to_text),
    };
    write_json(&args.out, &out)?;
    Ok(if report.bound.is_finite() { 0 } else { 2 })
}

#[derive(Serialize, Deserialize)]
struct LowerboundFile {
    method: String,
    status: String,
    bound: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    bound_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    decomposition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    certified_poly: Option<String>,
}

fn cmd_selfcheck(args: SelfcheckArgs) -> Result<i32, String> {
    use crate::exact::{rat, rat_int};
    let mut failures = 0;
    let families: Vec<(&str, ConeSpec)> = vec![
        ("orthant(3)", ConeSpec::Orthant { n: 3 }),
        ("psd-logdet(3)", ConeSpec::PsdLogDet { m: 3 }),
        ("exp-cone", ConeSpec::ExpCone),
        (
            "power-cone(2/3,1/3)",
            ConeSpec::power(vec![rat(2, 3), rat(1, 3)]),
        ),
        ("rel-entropy-dual(2)", ConeSpec::RelEntropyDual { n: 2 }),
        (
            "product(orthant(2) x exp)",
            ConeSpec::Product {
                parts: vec![ConeSpec::Orthant { n: 2 }, ConeSpec::ExpCone],
            },
        ),
        (
            "pullback(orthant(4))",
            ConeSpec::Pullback {
                base: Box::new(ConeSpec::Orthant { n: 4 }),
                a: vec![
                    vec![
                        RatScalar(rat_int(1)),
                        RatScalar(rat_int(2)),
                        RatScalar(rat_int(3)),
                        RatScalar(rat_int(4)),
                    ],
                    vec![
                        RatScalar(rat_int(0)),
                        RatScalar(rat_int(-6)),
                        RatScalar(rat_int(0)),
                        RatScalar(rat_int(1)),
                    ],
                ],
            },
        ),
    ];
    for (name, spec) in &families {
        let oracle = spec.oracle().map_err(|e| e.to_string())?;
        match lhscb_selfcheck(&*oracle, args.samples, args.seed) {
            Ok(report) => {
                println!("{name:28} {report}");
                if !report.passed() {
                    failures += 1;
                }
            }
            Err(e) => {
                println!("{name:28} ERROR {e}");
                failures += 1;
            }
        }
    }

    // w'H(y)z counterexamples against their closed forms.
    let exp = crate::barriers::expcone_oracle();
    let h = exp
        .eval(&DVector::from_vec(vec![6.0, 2.0, -3.0]))
        .map_err(|e| e.to_string())?
        .hessian;
    let whz = DVector::from_vec(vec![416.0, 1.0, 6.0])
        .dot(&(&h * DVector::from_vec(vec![2.0, 4.0, -3.0])));
    let ln3 = 3.0f64.ln();
    let closed = (ln3 * (3211.0 + 904.0 * ln3) - 4637.0) / (9.0 * (3.0 + 9.0f64.ln()).powi(2));
    let ok_exp = ((whz - closed) / closed.abs()).abs() <= 1e-9 && whz < -0.075;
    println!(
        "exp-cone counterexample      w'H(y)z = {} (closed form {}) => {}",
        format_f64(whz),
        format_f64(closed),
        if ok_exp { "ok" } else { "VIOLATED" }
    );
    if !ok_exp {
        failures += 1;
    }

    let pow =
        crate::barriers::powercone_oracle(vec![rat(2, 3), rat(1, 3)]).map_err(|e| e.to_string())?;
    let h = pow
        .eval(&DVector::from_vec(vec![10.0, 1.0, 1.0]))
        .map_err(|e| e.to_string())?
        .hessian;
    let whz = DVector::from_vec(vec![355.0, 1.0, 50.0])
        .dot(&(&h * DVector::from_vec(vec![1.0, 20.0, 2.0])));
    let c10 = 10.0f64.cbrt();
    let closed = (12871.0 - 443620.0 * c10 + 195500.0 * 100.0f64.cbrt())
        / (60.0 * (1.0 - 10.0 * c10).powi(2));
    let ok_pow = ((whz - closed) / closed.abs()).abs() <= 1e-9 && whz < -1.399;
    println!(
        "power-cone counterexample    w'H(y)z = {} (closed form {}) => {}",
        format_f64(whz),
        format_f64(closed),
        if ok_pow { "ok" } else { "VIOLATED" }
    );
    if !ok_pow {
        failures += 1;
    }

    let _ = std::io::stdout().flush();
    Ok(if failures == 0 { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn vector_parsing() {
        let v = parse_vector("19, -5, 1/2").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(format_rational(&v[2]), "1/2");
        assert!(parse_vector("1, x").is_err());
    }

    #[test]
    fn float_strings_round_trip() {
        for x in [1.0, -0.25, 5.509282621922189, 1e-7] {
            let s = format_f64(x);
            let back = crate::exact::rat_to_f64(&parse_rational(&s).unwrap());
            assert!((back - x).abs() <= 1e-11 * x.abs().max(1.0), "{s}");
        }
    }
}
