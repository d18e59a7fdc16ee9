//! `hypervol` — volumes of generalized hyperbolic tetrahedra.
//!
//! Subcommands:
//!
//! - `volume A B C D E F`: evaluate the closed-form volume plus shape data.
//! - `sweep`: tabulate the regular family over `[0, arccos(1/3))` as CSV.
//! - `verify`: run the randomized verification suites.
//! - `oracle A B C D E F`: cross-check the formula against Monte-Carlo
//!   integration in the projective ball model.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input, 3 verification
//! failure, 4 refused (oracle on a non-compact shape).

use std::f64::consts::PI;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypervol::format::text_f64;
use hypervol::parallel::{mc_volume_parallel, thread_budget};
use hypervol::report::ShapeReport;
use hypervol::{sweep, verify};
use hypervol_core::oracle::suggested_r_max;
use hypervol_core::{DihedralAngles, HalfSpaceSystem, ShapeError, VertexClass, VolumeError};
use thiserror::Error;

/// A Finite vertex whose projective point lies within this margin of the
/// unit sphere makes the `(1-|x|^2)^{-2}` weight effectively unbounded;
/// the oracle refuses such shapes along with genuinely ideal ones.
const NEAR_IDEAL_KLEIN_MARGIN: f64 = 1e-3;

#[derive(Parser)]
#[command(
    name = "hypervol",
    version,
    about = "Volumes of generalized hyperbolic tetrahedra from six dihedral angles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit one machine-readable JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Interpret input angles as degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the volume and shape data of one tetrahedron.
    Volume(VolumeArgs),
    /// Tabulate the regular family: angle, volume, edge length, class.
    Sweep(SweepArgs),
    /// Run randomized verification suites (Schlafli, Jacobi, round trip,
    /// symmetry, maximality).
    Verify(VerifyArgs),
    /// Cross-check the formula against Monte-Carlo integration.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct VolumeArgs {
    /// Six dihedral angles; the edges of A, B, C share a vertex and D, E, F
    /// are on the respectively opposite edges.
    #[arg(
        num_args = 6,
        required = true,
        value_names = ["A", "B", "C", "D", "E", "F"],
        allow_negative_numbers = true
    )]
    angles: Vec<f64>,
    /// Emit a CSV header plus one row instead of text.
    #[arg(long, conflicts_with = "json")]
    csv: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Number of grid points on [0, arccos(1/3) - delta].
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Write the table to a file instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random shapes per suite.
    #[arg(long, default_value_t = 100)]
    cases: usize,
    /// Seed for the deterministic sample streams.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Deliberately flip the Schlafli gradient sign to exercise the
    /// failure-reporting path (testing hook).
    #[arg(long, hide = true, value_parser = ["schlafli"])]
    inject_fault: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    /// Six dihedral angles (same labeling as `volume`).
    #[arg(
        num_args = 6,
        required = true,
        value_names = ["A", "B", "C", "D", "E", "F"],
        allow_negative_numbers = true
    )]
    angles: Vec<f64>,
    /// Monte-Carlo proposal budget.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Seed of the chunked sample streams.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Anything that terminates a command, mapped onto the exit-code contract.
#[derive(Debug, Error)]
enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Refused(_) => 4,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

/// Input-dependent volume failures are invalid input; the rest would be
/// bugs in this program.
fn map_volume_error(e: VolumeError) -> CliError {
    match e {
        VolumeError::Shape(inner) => CliError::Invalid(inner.to_string()),
        VolumeError::DegenerateDenominator { .. } => CliError::Invalid(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn map_shape_error(e: ShapeError) -> CliError {
    CliError::Invalid(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Volume(ref args) => cmd_volume(&cli, args),
        Command::Sweep(ref args) => cmd_sweep(&cli, args),
        Command::Verify(ref args) => cmd_verify(&cli, args),
        Command::Oracle(ref args) => cmd_oracle(&cli, args),
    }
}

/// Parses the six positional angles, honoring `--degrees`.
fn parse_angles(raw: &[f64], degrees: bool) -> Result<DihedralAngles, CliError> {
    let mut angles = [0.0; 6];
    for (slot, &v) in angles.iter_mut().zip(raw) {
        *slot = if degrees { v * PI / 180.0 } else { v };
    }
    DihedralAngles::new(angles).map_err(map_shape_error)
}

fn cmd_volume(cli: &Cli, args: &VolumeArgs) -> Result<(), CliError> {
    let angles = parse_angles(&args.angles, cli.degrees)?;
    let (report, _) = ShapeReport::compute(&angles).map_err(map_volume_error)?;
    if cli.json {
        println!("{}", report.to_json());
    } else if args.csv {
        println!("{}", ShapeReport::csv_header());
        println!("{}", report.csv_row());
    } else {
        print!("{}", report.render_text());
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<(), CliError> {
    if args.steps < 2 {
        return Err(CliError::Invalid(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    let rows = sweep::regular_sweep(args.steps).map_err(map_volume_error)?;
    let rendered = if cli.json {
        format!("{}\n", sweep::rows_json(&rows))
    } else {
        sweep::render_csv(&rows)
    };
    match &args.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<(), CliError> {
    let fault = args.inject_fault.as_deref().map(|_| verify::Suite::Schlafli);
    let report = verify::run_suites(args.cases, args.seed, fault);
    if cli.json {
        println!("{}", report.to_json());
    } else if args.cases == 0 {
        println!("0 cases: nothing to verify");
    } else {
        print!("{}", report.render_text());
    }
    if report.passed() {
        Ok(())
    } else {
        let failed: usize = report.suites.iter().map(|s| s.failures.len()).sum();
        Err(CliError::Verification(format!(
            "{failed} case(s) failed; failing inputs echoed above"
        )))
    }
}

/// Rejects shapes whose Monte-Carlo weight `(1-|x|^2)^{-2}` is not
/// integrable (ideal vertices) or numerically hopeless (finite vertices
/// grazing the sphere). Ultraideal vertices are fine: their truncation
/// half-spaces keep the region strictly inside the ball.
fn refusal_reason(shape: &hypervol_core::TetrahedronShape) -> Option<String> {
    for i in 0..4 {
        match shape.classification().class(i) {
            VertexClass::Ideal => {
                return Some(format!(
                    "vertex {i} is ideal; the Monte-Carlo weight diverges there"
                ));
            }
            VertexClass::Finite => {
                let c = shape.vertex(i).coords();
                let klein_norm = c[1..].iter().map(|t| t * t).sum::<f64>().sqrt() / c[0];
                if klein_norm > 1.0 - NEAR_IDEAL_KLEIN_MARGIN {
                    return Some(format!(
                        "vertex {i} lies within {NEAR_IDEAL_KLEIN_MARGIN:e} of the ideal \
                         sphere; the Monte-Carlo variance is unbounded there"
                    ));
                }
            }
            VertexClass::Ultraideal => {}
        }
    }
    None
}

fn cmd_oracle(cli: &Cli, args: &OracleArgs) -> Result<(), CliError> {
    let angles = parse_angles(&args.angles, cli.degrees)?;
    let (report, shape) = ShapeReport::compute(&angles).map_err(map_volume_error)?;
    if let Some(reason) = refusal_reason(&shape) {
        return Err(CliError::Refused(reason));
    }

    let system = HalfSpaceSystem::from_shape(&shape)
        .map_err(|e| CliError::Internal(format!("half-space system: {e}")))?;
    let r_max = suggested_r_max(&system)
        .map_err(|e| CliError::Internal(format!("sampling region: {e}")))?;
    let threads = thread_budget();
    let estimate = mc_volume_parallel(&system, args.samples, args.seed, r_max, threads)
        .map_err(|e| CliError::Internal(format!("Monte-Carlo estimate: {e}")))?;

    let z = if estimate.std_error > 0.0 {
        (estimate.volume - report.volume) / estimate.std_error
    } else {
        f64::INFINITY
    };

    if cli.json {
        let mut value = report.to_json();
        value["mc"] = serde_json::json!({
            "volume": estimate.volume,
            "std_error": estimate.std_error,
            "z_score": z,
            "samples": estimate.samples,
            "seed": estimate.seed,
            "accepted": estimate.accepted,
        });
        println!("{value}");
    } else {
        println!("formula volume = {}", text_f64(report.volume));
        println!("mc volume      = {}", text_f64(estimate.volume));
        println!("std error      = {}", text_f64(estimate.std_error));
        println!("z-score        = {}", text_f64(z));
        println!(
            "samples = {}, seed = {}, accepted = {}",
            estimate.samples, estimate.seed, estimate.accepted
        );
    }

    if z.abs() <= 4.0 {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "|z| = {:.2} exceeds 4 standard errors",
            z.abs()
        )))
    }
}
