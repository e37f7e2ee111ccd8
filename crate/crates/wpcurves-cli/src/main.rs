//! `wpcurves`: compute seminorms and singular-integral transforms on sampled
//! boundary data, run forward welding pipelines, and execute the named
//! verification suites.
//!
//! Exit codes: 0 success, 1 suite-check failures, 2 malformed input or
//! invalid parameters, 3 numerical failure inside a pipeline, 64 unknown
//! subcommand.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;
use wpcurves::cauchy::CurveConfiguration;
use wpcurves::error::Error;
use wpcurves::grid::{make_grid, Domain, GridFunction};
use wpcurves::norms::{boundary_seminorm, NormKind};
use wpcurves::operators::QuasisymmetricMap;
use wpcurves::quasiconformal::{beurling_ahlfors_extend, complex_dilatation, BoxSpec};
use wpcurves::suites::{run_suite, SuiteConfig, SUITE_NAMES};
use wpcurves::transforms::{hilbert_circle, hilbert_line, riesz_project, Side};
use wpcurves::welding::{conformal_weld, SchlichtCurve};
use wpcurves::{io, Result};

const EXIT_SUITE_FAILED: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_UNKNOWN_SUBCOMMAND: u8 = 64;

#[derive(Parser)]
#[command(name = "wpcurves", version, about = "Seminorms, singular integrals and conformal welding on circle/line grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operator or pipeline to data and write a JSON report.
    Compute {
        #[command(subcommand)]
        op: ComputeOp,
    },
    /// Run a named verification suite and write the aggregated report.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct OutArg {
    /// Write the JSON report here (atomically); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArg {
    /// GridFunction file: `.json` (self-describing) or `.csv` (see --domain).
    input: PathBuf,
    /// Domain tag for CSV input (JSON carries its own).
    #[arg(long, default_value = "circle")]
    domain: String,
}

#[derive(Subcommand)]
enum ComputeOp {
    /// Boundary seminorm of a sampled function.
    Norm {
        /// bp | bp_sharp | bmo | w11 | w21 | bhat
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Hilbert transform (circle multiplier or line kernel by domain tag).
    Hilbert {
        /// Use the regularized line kernel (BMO-class data, output modulo
        /// constants). Ignored for circle input.
        #[arg(long)]
        regularized: bool,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Riesz projection P^+ or P^- of circle data.
    Project {
        /// plus | minus
        #[arg(long)]
        side: String,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Standardized Cauchy transform of circle data on a curve configuration
    /// (unit circle by default, welded schlicht curve when --c2 is set).
    Cauchy {
        /// Second schlicht coefficient of the curve family.
        #[arg(long)]
        c2: Option<f64>,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Conformal welding of the schlicht curve with coefficient --c2.
    Weld {
        #[arg(long, default_value_t = 0.2)]
        c2: f64,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        /// Reject the result (exit 3) when the welding residual exceeds this.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Beurling-Ahlfors extension of a line-model homeomorphism; writes the
    /// complex dilatation field.
    BaExtend {
        #[arg(long, default_value_t = -1.0)]
        x_min: f64,
        #[arg(long, default_value_t = 1.0)]
        x_max: f64,
        #[arg(long, default_value_t = 0.5)]
        y_max: f64,
        #[arg(long, default_value_t = 41)]
        nx: usize,
        #[arg(long, default_value_t = 21)]
        ny: usize,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// identities | besov | composition | welding | cauchy | holomorphy |
    /// quasiconformal
    name: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Test fixture: corrupt the Hilbert multiplier so identity checks fail.
    #[arg(long)]
    corrupt_multiplier: bool,
    #[command(flatten)]
    out: OutArg,
}

fn main() -> ExitCode {
    env_logger::init();
    if let Err(code) = check_thread_cap() {
        return code;
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand => EXIT_UNKNOWN_SUBCOMMAND,
                _ => EXIT_VALIDATION,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Compute { op } => cmd_compute(op),
        Command::Suite(args) => cmd_suite(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// The core is sequential; the env var is validated as a cap so misconfigured
/// harnesses fail loudly instead of silently oversubscribing.
fn check_thread_cap() -> std::result::Result<(), ExitCode> {
    if let Ok(raw) = std::env::var("WPCURVES_THREADS") {
        match raw.parse::<usize>() {
            Ok(t) if t >= 1 => {
                log::info!("thread cap {t} (pipelines run single-threaded)");
                Ok(())
            }
            _ => {
                eprintln!("error: WPCURVES_THREADS must be a positive integer, got {raw:?}");
                Err(ExitCode::from(EXIT_VALIDATION))
            }
        }
    } else {
        Ok(())
    }
}

/// Validation-type errors exit 2, numerical pipeline failures exit 3.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidGridSize(_)
        | Error::DomainMismatch { .. }
        | Error::LengthMismatch { .. }
        | Error::NonFinite(_)
        | Error::InvalidParameter(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::Malformed(_) => EXIT_VALIDATION,
        _ => EXIT_NUMERICAL,
    }
}

fn parse_domain(name: &str) -> Result<Domain> {
    match name {
        "circle" => Ok(Domain::Circle),
        "line" => Ok(Domain::Line),
        other => Err(Error::InvalidParameter(format!("unknown domain {other:?}"))),
    }
}

fn parse_kind(name: &str) -> Result<NormKind> {
    match name {
        "bp" => Ok(NormKind::Bp),
        "bp_sharp" => Ok(NormKind::BpSharp),
        "bmo" => Ok(NormKind::Bmo),
        "w11" => Ok(NormKind::W11),
        "w21" => Ok(NormKind::W21),
        "bhat" => Ok(NormKind::BhatP),
        other => Err(Error::InvalidParameter(format!("unknown norm kind {other:?}"))),
    }
}

fn parse_side(name: &str) -> Result<Side> {
    match name {
        "plus" => Ok(Side::Plus),
        "minus" => Ok(Side::Minus),
        other => Err(Error::InvalidParameter(format!("unknown side {other:?}"))),
    }
}

fn read_grid_function(arg: &InputArg) -> Result<GridFunction> {
    let text = std::fs::read_to_string(&arg.input)?;
    let is_csv = arg.input.extension().map(|e| e == "csv").unwrap_or(false);
    if is_csv {
        io::grid_function_from_csv(&text, parse_domain(&arg.domain)?)
    } else {
        io::grid_function_from_json(&text)
    }
}

fn emit(out: &OutArg, payload: &str) -> Result<()> {
    match &out.out {
        Some(path) => io::atomic_write(path, payload.as_bytes()),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn cmd_compute(op: ComputeOp) -> Result<ExitCode> {
    match op {
        ComputeOp::Norm { kind, p, input, out } => {
            let f = read_grid_function(&input)?;
            let report = boundary_seminorm(&f, parse_kind(&kind)?, p)?;
            emit(&out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        ComputeOp::Hilbert { regularized, input, out } => {
            let f = read_grid_function(&input)?;
            let hf = match f.domain() {
                Domain::Circle => hilbert_circle(&f)?,
                Domain::Line => hilbert_line(&f, regularized)?,
            };
            emit(&out, &io::grid_function_to_json(&hf)?)?;
            Ok(ExitCode::SUCCESS)
        }
        ComputeOp::Project { side, input, out } => {
            let f = read_grid_function(&input)?;
            let pf = riesz_project(&f, parse_side(&side)?)?;
            emit(&out, &io::grid_function_to_json(&pf)?)?;
            Ok(ExitCode::SUCCESS)
        }
        ComputeOp::Cauchy { c2, input, out } => {
            let f = read_grid_function(&input)?;
            f.expect_domain(Domain::Circle)?;
            let cfg = match c2 {
                None => CurveConfiguration::identity(f.grid())?,
                Some(c) => {
                    let curve = SchlichtCurve::new(vec![Complex64::new(c, 0.0)])?;
                    CurveConfiguration::welded(&curve, f.grid())?
                }
            };
            let hf = wpcurves::cauchy::standardized_cauchy(&cfg, &f)?;
            emit(&out, &io::grid_function_to_json(&hf)?)?;
            Ok(ExitCode::SUCCESS)
        }
        ComputeOp::Weld { c2, n, tol, out } => {
            let curve = SchlichtCurve::new(vec![Complex64::new(c2, 0.0)])?;
            let result = conformal_weld(&curve, make_grid(n)?)?;
            if let Some(tol) = tol {
                if tol <= 0.0 {
                    return Err(Error::InvalidParameter("--tol must be positive".into()));
                }
                if result.residual > tol {
                    eprintln!(
                        "error: welding residual {:.3e} exceeds tolerance {tol:.3e}",
                        result.residual
                    );
                    return Ok(ExitCode::from(EXIT_NUMERICAL));
                }
            }
            emit(&out, &io::welding_to_json(&result)?)?;
            Ok(ExitCode::SUCCESS)
        }
        ComputeOp::BaExtend { x_min, x_max, y_max, nx, ny, input, out } => {
            let f = read_grid_function(&input)?;
            f.expect_domain(Domain::Line)?;
            let samples: Vec<f64> = f.values().iter().map(|v| v.re).collect();
            for (j, v) in f.values().iter().enumerate() {
                if v.im != 0.0 {
                    return Err(Error::Malformed(format!(
                        "boundary homeomorphism must be real; node {j} has imaginary part"
                    )));
                }
            }
            let h = QuasisymmetricMap::from_samples(f.grid(), Domain::Line, samples)?;
            let spec = BoxSpec { x_min, x_max, y_max, nx, ny };
            let map = beurling_ahlfors_extend(&h, &spec)?;
            let mu = complex_dilatation(&map)?;
            emit(&out, &io::beltrami_to_json(&mu)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_suite(args: SuiteArgs) -> Result<ExitCode> {
    if !SUITE_NAMES.contains(&args.name.as_str()) {
        return Err(Error::InvalidParameter(format!(
            "unknown suite {:?}; expected one of {}",
            args.name,
            SUITE_NAMES.join(", ")
        )));
    }
    let mut config = SuiteConfig::new(&args.name);
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(p) = args.p {
        config.p = p;
    }
    if let Some(c2) = args.c2 {
        config.c2 = c2;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.corrupt_multiplier = args.corrupt_multiplier;
    let report = run_suite(&config)?;
    emit(&args.out, &serde_json::to_string_pretty(&report)?)?;
    for check in &report.checks {
        eprintln!(
            "{} {} value={:.3e} threshold={:.3e} ({})",
            if check.pass { "pass" } else { "FAIL" },
            check.id,
            check.value,
            check.threshold,
            check.direction
        );
    }
    if report.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_SUITE_FAILED))
    }
}
