//! Command-line front end: evaluate individual theta constants, run the
//! verification suite, and render stored reports.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use theta_bracket::halfplane::{HermitianPoint, HermitianPointDto};
use theta_bracket::harness::{
    effective_seed, report_to_text, run_suite, suite_names, SuiteConfig, VerificationReport,
    SEED_ENV,
};
use theta_bracket::theta::{theta_eval, ThetaCharacteristic, TruncationPolicy};

#[derive(Parser)]
#[command(
    name = "theta-bracket",
    version,
    about = "Hermitian/quaternionic theta constants, brackets, and their verification suite"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one theta constant at a point read from a JSON file.
    Eval(EvalArgs),
    /// Run verification checks; exits 0 only if every check passes.
    Verify(VerifyArgs),
    /// Render a stored JSON report.
    Report(ReportArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum Case {
    /// The five weight-one constants on the level-√−3 group.
    Eisenstein,
    /// The ten constants on the level-(1+i) group.
    Gauss,
}

#[derive(Args)]
struct EvalArgs {
    /// Theta family.
    #[arg(long, value_enum)]
    case: Case,
    /// One-based index into the family (1..=5 Eisenstein, 1..=10 Gauss).
    #[arg(long)]
    theta: usize,
    /// JSON file with the evaluation point, e.g.
    /// {"z11":[0.1,1.2],"z12":[0.0,0.3],"z21":[0.0,0.3],"z22":[-0.2,1.1]}.
    #[arg(long)]
    point: PathBuf,
    /// Certified tail bound to aim for (default 1e-12).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or check id to run; repeatable. Default: everything.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Seed for the sample generators (overrides THETA_BRACKET_SEED).
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplier applied to every tolerance.
    #[arg(long)]
    tol_scale: Option<f64>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// JSON file with a full suite configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// List the available suites and checks, then exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// A JSON report written by `verify --report`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, Box<dyn std::error::Error>> {
    match Cli::parse().cmd {
        Command::Eval(a) => eval(a),
        Command::Verify(a) => verify(a),
        Command::Report(a) => report(a),
    }
}

fn eval(a: EvalArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let family = match a.case {
        Case::Eisenstein => ThetaCharacteristic::eisenstein_all(),
        Case::Gauss => ThetaCharacteristic::gauss_all(),
    };
    let ch = family
        .get(a.theta.wrapping_sub(1))
        .ok_or_else(|| format!("theta index {} out of range 1..={}", a.theta, family.len()))?;
    let dto: HermitianPointDto = serde_json::from_str(&fs::read_to_string(&a.point)?)?;
    let z = HermitianPoint::from(&dto);
    let policy = TruncationPolicy {
        tail_bound: a.tol.unwrap_or(TruncationPolicy::default().tail_bound),
        ..TruncationPolicy::default()
    };
    let t = theta_eval(&z, ch, &policy)?;
    println!("{} at the given point:", ch.label());
    println!("  value = {:+.15e} {:+.15e}i", t.value.re, t.value.im);
    println!(
        "  tail ≤ {:.3e}  (radius {}, {} lattice terms)",
        t.tail_bound, t.radius, t.terms
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if a.list {
        for spec in theta_bracket::harness::registry() {
            println!("{:<14} {}", spec.suite, spec.id);
        }
        println!("suites: {}", suite_names().join(", "));
        return Ok(ExitCode::SUCCESS);
    }
    let mut cfg: SuiteConfig = match &a.config {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => SuiteConfig::default(),
    };
    // Seed precedence: --seed, then THETA_BRACKET_SEED, then config/default.
    if a.seed.is_some() || std::env::var(SEED_ENV).is_ok() {
        cfg.seed = effective_seed(a.seed);
    }
    if let Some(s) = a.tol_scale {
        cfg.tol_scale = s;
    }
    if !a.suites.is_empty() {
        cfg.selectors = a.suites.clone();
    }
    let rep = run_suite(&cfg)?;
    print!("{}", report_to_text(&rep));
    if let Some(path) = &a.report {
        fs::write(path, serde_json::to_string_pretty(&rep)?)?;
        println!("report written to {}", path.display());
    }
    Ok(if rep.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn report(a: ReportArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let rep: VerificationReport = serde_json::from_str(&fs::read_to_string(&a.input)?)?;
    match a.format {
        Format::Text => print!("{}", report_to_text(&rep)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&rep)?),
    }
    Ok(ExitCode::SUCCESS)
}
