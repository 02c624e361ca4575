//! Argument parsing and command dispatch for the `qes` binary.
//!
//! Exit codes: 0 success, 1 usage error, 2 constraint violation or
//! divergence, 3 I/O failure, 4 verification or self-test failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qes_core::closed_forms::admissibility;
use qes_core::quadrature::{normalization_with, DivergentEnd, Measure, Normalization, Tolerances};
use qes_core::tcs::{classify, TcsParams};
use qes_core::verify::acceptance_grid;
use qes_core::{Convention, Error, QesClass, QesParams};
use serde::Serialize;

use crate::figures;
use crate::report::{verify_one, Notes, VerificationRecord};
use crate::table::{self, Format, Quantity, Spacing, TableSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONSTRAINT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_SELF_TEST: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qes", version, about = "Zero-energy QES potentials of the extended TCS model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a parameter set against its class constraints.
    Validate(ParamArgs),
    /// Tabulate a potential, wavefunction or density.
    Table(TableArgs),
    /// Compute the normalization integral or report its divergence.
    Normalize(NormalizeArgs),
    /// Run the residual and calibration checks and emit a JSON report.
    Verify(VerifyArgs),
    /// Map many-body parameters to tau and classify all three classes.
    Tcs(TcsArgs),
    /// Write the preset density, wavefunction and potential tables.
    Figures(FiguresArgs),
}

fn parse_class(s: &str) -> Result<QesClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    #[arg(long, value_parser = parse_class)]
    class: QesClass,
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, allow_negative_numbers = true)]
    tau: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<QesParams, Error> {
        QesParams::new(self.class, self.k, self.b, self.tau)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Casimir,
    Chain,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Casimir => Convention::Casimir,
            ConventionArg::Chain => Convention::Chain,
        }
    }
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, value_enum)]
    quantity: Quantity,
    #[command(flatten)]
    params: ParamArgs,
    /// Family member; defaults to k. Wavefunctions need m = k.
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, default_value_t = 1e-2)]
    rho_min: f64,
    #[arg(long, default_value_t = 1e2)]
    rho_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    spacing: Spacing,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, value_enum, default_value_t = ConventionArg::Chain)]
    convention: ConventionArg,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    Flat,
    Weighted,
}

#[derive(Args, Debug)]
struct NormalizeArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1e-14)]
    abs_tol: f64,
    /// `weighted` also reports the rho^tau-weighted integral.
    #[arg(long, value_enum, default_value_t = MeasureArg::Flat)]
    measure: MeasureArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run the built-in acceptance parameter grid.
    #[arg(long, conflicts_with_all = ["class", "k", "tau", "b"])]
    all: bool,
    #[arg(long, value_parser = parse_class, required_unless_present = "all")]
    class: Option<QesClass>,
    #[arg(long, required_unless_present = "all")]
    k: Option<f64>,
    #[arg(long, required_unless_present = "all")]
    tau: Option<f64>,
    #[arg(long, required_unless_present = "all", allow_negative_numbers = true)]
    b: Option<f64>,
    /// Add this multiple of 1/rho^2 to the potential. Any non-zero value
    /// must make verification fail.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    perturb_potential: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TcsArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 0)]
    s: u32,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long)]
    k: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
}

#[derive(Args, Debug)]
struct FiguresArgs {
    #[arg(long)]
    out_dir: PathBuf,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Normalize(a) => cmd_normalize(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Tcs(a) => cmd_tcs(a, out),
        Command::Figures(a) => cmd_figures(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter { .. }
            | Error::Domain { .. }
            | Error::Representation { .. }
            | Error::UnsupportedClass => EXIT_USAGE,
            Error::WavefunctionNeedsMEqualsK { .. }
            | Error::DivergenceSuspected { .. }
            | Error::Singularity { .. }
            | Error::NonFinite { .. } => EXIT_CONSTRAINT,
            Error::Inconsistent { .. } | Error::CalibrationFailure { .. } => EXIT_SELF_TEST,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

type CmdResult = Result<i32, Failure>;

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Run `f` against `path` if given, otherwise against `out`.
fn with_output(
    path: Option<&PathBuf>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(fs::File::create(p)?);
            f(&mut w)?;
            w.flush()
        }
        None => f(out),
    }
}

fn cmd_validate(a: ParamArgs, out: &mut dyn Write) -> CmdResult {
    let report = admissibility(&a.params()?);
    write_json(&report, out)?;
    Ok(if report.class_regular { EXIT_OK } else { EXIT_CONSTRAINT })
}

fn cmd_table(a: TableArgs, out: &mut dyn Write) -> CmdResult {
    let p = a.params;
    let params = QesParams::with_m(p.class, p.k, p.b, p.tau, a.m.unwrap_or(p.k))?;
    let spec = TableSpec {
        quantity: a.quantity,
        rho_min: a.rho_min,
        rho_max: a.rho_max,
        points: a.points,
        spacing: a.spacing,
        format: a.format,
    };
    let t = table::build(&spec, &params, a.convention.into())?;
    with_output(a.output.as_ref(), out, |w| table::write(&t, spec.format, w))?;
    Ok(EXIT_OK)
}

fn describe(n: &Normalization) -> String {
    match n {
        Normalization::Finite { result, downgraded_rel_tol, .. } => {
            let mut s = format!(
                "{} (abs error {:e}, {} subdivisions)",
                result.value, result.abs_error_estimate, result.subdivisions
            );
            if let Some(rel) = downgraded_rel_tol {
                s.push_str(&format!("; near the convergence threshold, rel_tol relaxed to {rel:e}"));
            }
            s
        }
        Normalization::Diverges { alpha, end: DivergentEnd::Infinity, .. } => {
            format!("diverges (alpha = {alpha} ≤ 1)")
        }
        Normalization::Diverges { origin_exponent, end: DivergentEnd::Origin, .. } => {
            format!("diverges at the origin (density exponent {origin_exponent} ≤ -1)")
        }
    }
}

fn cmd_normalize(a: NormalizeArgs, out: &mut dyn Write) -> CmdResult {
    let p = a.params.params()?;
    let tol = Tolerances::new(a.abs_tol, a.tol);
    let flat = normalization_with(&p, tol, Measure::Flat)?;
    writeln!(out, "{}", describe(&flat))?;
    if a.measure == MeasureArg::Weighted {
        let weighted = normalization_with(&p, tol, Measure::Weighted)?;
        writeln!(out, "weighted (rho^tau): {}", describe(&weighted))?;
    }
    Ok(match flat {
        Normalization::Finite { .. } => EXIT_OK,
        Normalization::Diverges { .. } => EXIT_CONSTRAINT,
    })
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let sets = if a.all {
        acceptance_grid()
    } else {
        // clap guarantees these are present without --all
        let (class, k, tau, b) = (a.class.unwrap(), a.k.unwrap(), a.tau.unwrap(), a.b.unwrap());
        vec![QesParams::new(class, k, b, tau)?]
    };
    let mut notes = Notes::default();
    let records = sets
        .iter()
        .map(|p| verify_one(p, a.perturb_potential, &mut notes))
        .collect::<Result<Vec<VerificationRecord>, Error>>()?;
    for line in &notes.lines {
        writeln!(err, "note: {line}")?;
    }
    with_output(a.output.as_ref(), out, |w| write_json(&records, w))?;
    Ok(if records.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_SELF_TEST })
}

#[derive(Serialize)]
struct TcsReport {
    tau: f64,
    interaction: qes_core::tcs::Interaction,
    classes: [qes_core::closed_forms::AdmissibilityReport; 3],
}

fn cmd_tcs(a: TcsArgs, out: &mut dyn Write) -> CmdResult {
    let t = TcsParams::new(a.n, a.lambda, a.r, a.s, a.omega)?;
    let classes = classify(&t, a.k, a.b)?;
    write_json(&TcsReport { tau: t.tau(), interaction: t.interaction(), classes }, out)?;
    Ok(EXIT_OK)
}

fn cmd_figures(a: FiguresArgs, out: &mut dyn Write) -> CmdResult {
    let written = figures::write_all(&a.out_dir).map_err(|e| match e {
        figures::WriteError::Io(e) => Failure::from(e),
        figures::WriteError::Model(e) => Failure::from(e),
    })?;
    for path in written {
        writeln!(out, "{}", path.display())?;
    }
    Ok(EXIT_OK)
}
