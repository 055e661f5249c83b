//! Command-line front end: pseudoinverses, block projectors, and
//! inverse-class verification over matrices in the line-oriented text
//! format.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error (including
//! malformed files, bad partitions, and shape mismatches).

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use blockpinv::{
    block_pinv, build_aux, corange_projector, effective_condition, factors_via_gram, penrose_check,
    pinv_from_factors, range_projector, read_matrix_from, split, svd_pinv, write_matrix,
    write_matrix_to, AuxChoices, BlockPartition, ComplexMatrix, InverseClass,
    DEFAULT_MEMBERSHIP_TOL,
};

/// Input-matrix condition number beyond which a warning is reported.
const INPUT_CONDITION_WARN: f64 = 1e8;

/// Relative tolerance for the in-run "projector reproduces the input"
/// check of the projector command.
const PROJECTOR_CHECK_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "blockpinv",
    version,
    about = "Pseudoinverses, projectors, and inverse-class checks for dense complex matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a Moore-Penrose pseudoinverse.
    Pinv(PinvArgs),
    /// Compute the orthogonal projector onto the range or corange.
    Projector(ProjectorArgs),
    /// Check a candidate inverse against chosen Penrose equations.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PinvArgs {
    /// Input matrix file.
    #[arg(long)]
    input: PathBuf,
    /// Output file for the result; written to standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Block partition `p,q,s,t`; required for the block and alt-lr methods.
    #[arg(long)]
    partition: Option<BlockPartition>,
    /// Computation route.
    #[arg(long, value_enum)]
    method: Method,
    /// Draw the auxiliary {1}-inverses from this sampler seed instead of
    /// using pseudoinverses.
    #[arg(long)]
    seed: Option<u64>,
    /// Verify the result against the Penrose equations and the SVD oracle;
    /// exit 1 if any relative residual exceeds the tolerance.
    #[arg(long)]
    check: bool,
    /// Relative residual tolerance used with --check.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Block pipeline over the 2x2 partition.
    Block,
    /// SVD pseudoinverse of the whole matrix.
    Direct,
    /// Block factors taken from {1}-inverses of the two Gram matrices.
    AltLr,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Block => "block",
            Method::Direct => "direct",
            Method::AltLr => "alt-lr",
        })
    }
}

#[derive(Args)]
struct ProjectorArgs {
    /// Input matrix file.
    #[arg(long)]
    input: PathBuf,
    /// Output file for the projector; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Block partition `p,q,s,t`.
    #[arg(long)]
    partition: BlockPartition,
    /// Which projector to emit.
    #[arg(long, value_enum, default_value_t = Which::Range)]
    which: Which,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// Projector onto the column space, sized by the row partition.
    Range,
    /// Projector onto the row space, sized by the column partition.
    Corange,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::Range => "range",
            Which::Corange => "corange",
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// File with the matrix whose inverse is being tested.
    #[arg(long)]
    matrix: PathBuf,
    /// File with the candidate generalized inverse.
    #[arg(long)]
    candidate: PathBuf,
    /// Penrose equations that must hold, e.g. `1` or `1,3` or `1,2,3,4`.
    #[arg(long, default_value = "1,2,3,4")]
    classes: String,
    /// Relative residual tolerance for membership.
    #[arg(long, default_value_t = DEFAULT_MEMBERSHIP_TOL)]
    tol: f64,
}

enum Failure {
    /// Unusable input: parse errors, shape mismatches, missing flags.
    Input(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(msg) => f.write_str(msg),
        }
    }
}

impl From<blockpinv::Error> for Failure {
    fn from(err: blockpinv::Error) -> Self {
        Failure::Input(err.to_string())
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. output piped to `head`), like
    // standard Unix tools, instead of panicking mid-report.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Pinv(args) => cmd_pinv(&args),
        Command::Projector(args) => cmd_projector(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(2)
        }
    }
}

fn cmd_pinv(args: &PinvArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let input = read_matrix_from(&args.input)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.input.display())))?;
    let read_ms = elapsed_ms(started);

    let mut warnings = Vec::new();
    if let Some(cond) = effective_condition(&input)? {
        if cond > INPUT_CONDITION_WARN {
            warnings.push(format!(
                "input effective condition {cond:.3e} exceeds {INPUT_CONDITION_WARN:.1e}"
            ));
        }
    }
    if args.seed.is_some() && args.method == Method::Direct {
        warnings.push("--seed has no effect with --method direct".to_string());
    }

    let compute_start = Instant::now();
    let result = match args.method {
        Method::Direct => svd_pinv(&input)?,
        Method::Block | Method::AltLr => {
            let part = args.partition.ok_or_else(|| {
                Failure::Input(format!(
                    "--partition is required with --method {}",
                    args.method
                ))
            })?;
            let choices = match args.seed {
                Some(seed) => AuxChoices::sampled(seed),
                None => AuxChoices::default(),
            };
            let block = match args.method {
                Method::Block => block_pinv(&input, &part, &choices)?,
                Method::AltLr => {
                    let aux = build_aux(split(&input, &part)?, &choices)?;
                    let factors = factors_via_gram(&aux);
                    pinv_from_factors(&aux, &factors.left, &factors.right)
                }
                Method::Direct => unreachable!("direct is handled above"),
            };
            warnings.extend(block.warnings.iter().cloned());
            block.pinv
        }
    };
    let compute_ms = elapsed_ms(compute_start);

    let check_start = Instant::now();
    let report = penrose_check(&input, &result)?;
    let oracle_gap = if args.check {
        Some(result.distance(&svd_pinv(&input)?))
    } else {
        None
    };
    let check_ms = elapsed_ms(check_start);

    let write_start = Instant::now();
    emit_matrix(args.output.as_deref(), &result)?;
    let write_ms = elapsed_ms(write_start);

    println!("method = {}", args.method);
    if let Some(part) = args.partition {
        println!("partition = {part}");
    }
    for eq in 1..=4u8 {
        println!("penrose.eq{eq} = {:.3e}", report.relative(eq));
    }
    if let Some(gap) = oracle_gap {
        println!("oracle_gap = {gap:.3e}");
    }
    print_warnings(&warnings);
    print_timings(&[
        ("read", read_ms),
        ("compute", compute_ms),
        ("check", check_ms),
        ("write", write_ms),
        ("total", elapsed_ms(started)),
    ]);

    if args.check && report.max_relative() > args.tol {
        eprintln!(
            "verification failed: worst Penrose relative residual {:.3e} exceeds {:.3e}",
            report.max_relative(),
            args.tol
        );
        return Ok(1);
    }
    Ok(0)
}

fn cmd_projector(args: &ProjectorArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let input = read_matrix_from(&args.input)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.input.display())))?;
    let read_ms = elapsed_ms(started);

    let compute_start = Instant::now();
    let aux = build_aux(split(&input, &args.partition)?, &AuxChoices::default())?;
    let projector = match args.which {
        Which::Range => range_projector(&aux),
        Which::Corange => corange_projector(&aux),
    };
    let compute_ms = elapsed_ms(compute_start);

    // The emitted projector must reproduce the input matrix: P E = E for
    // the range projector, E P = E for the corange projector.
    let check_start = Instant::now();
    let reproduction = match args.which {
        Which::Range => (&(&projector * &input) - &input).frobenius_norm(),
        Which::Corange => (&(&input * &projector) - &input).frobenius_norm(),
    };
    let residual = reproduction / input.frobenius_norm().max(1.0);
    let check_ms = elapsed_ms(check_start);

    let write_start = Instant::now();
    emit_matrix(args.output.as_deref(), &projector)?;
    let write_ms = elapsed_ms(write_start);

    println!("which = {}", args.which);
    println!("partition = {}", args.partition);
    println!("projector_residual = {residual:.3e}");
    print_warnings(&aux.warnings);
    print_timings(&[
        ("read", read_ms),
        ("compute", compute_ms),
        ("check", check_ms),
        ("write", write_ms),
        ("total", elapsed_ms(started)),
    ]);

    if residual > PROJECTOR_CHECK_TOL {
        eprintln!(
            "verification failed: projector reproduces the input only to {residual:.3e}, \
             tolerance {PROJECTOR_CHECK_TOL:.1e}"
        );
        return Ok(1);
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let matrix = read_matrix_from(&args.matrix)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.matrix.display())))?;
    let candidate = read_matrix_from(&args.candidate)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.candidate.display())))?;
    let read_ms = elapsed_ms(started);

    let classes: InverseClass = args
        .classes
        .parse()
        .map_err(|e: blockpinv::Error| Failure::Input(format!("--classes: {e}")))?;
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(Failure::Input(format!(
            "--tol must be nonnegative, got {}",
            args.tol
        )));
    }

    let check_start = Instant::now();
    let report = penrose_check(&matrix, &candidate)?;
    let member = report.satisfies(classes, args.tol);
    let check_ms = elapsed_ms(check_start);

    println!("classes = {classes}");
    println!("tol = {:.3e}", args.tol);
    for eq in 1..=4u8 {
        println!("penrose.eq{eq} = {:.3e}", report.relative(eq));
    }
    println!("worst_requested = {:.3e}", report.max_relative_of(classes));
    println!("member = {member}");
    print_timings(&[
        ("read", read_ms),
        ("check", check_ms),
        ("total", elapsed_ms(started)),
    ]);

    Ok(if member { 0 } else { 1 })
}

/// Writes the matrix to the path, or to standard output followed by a
/// blank separator line when no path is given.
fn emit_matrix(path: Option<&Path>, m: &ComplexMatrix) -> Result<(), Failure> {
    match path {
        Some(path) => {
            write_matrix_to(path, m).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{}", write_matrix(m));
            println!();
            Ok(())
        }
    }
}

fn print_warnings(warnings: &[String]) {
    if warnings.is_empty() {
        println!("warnings = none");
    } else {
        println!("warnings = {}", warnings.join("; "));
    }
}

fn print_timings(stages: &[(&str, f64)]) {
    for (stage, ms) in stages {
        println!("timings.{stage}_ms = {ms:.3}");
    }
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}
