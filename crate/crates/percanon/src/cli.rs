//! Command-line front end: ingestion, reduction, barcode and decomposition
//! output, and standalone verification.
//!
//! Exit codes: 0 on success, 2 for input errors, 3 for verification
//! failures (oracle disagreement or a broken internal invariant).

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::barcode::{self, Bar, Summand};
use crate::complex::{
    adapted_basis, graded_boundary_matrix, parse_filtered_complex, validate, AdaptedBasis,
    BasisElement, FilteredComplex, OrderingMode,
};
use crate::field::{decimal_to_rational, FieldSpec};
use crate::ingest::{parse_points, vietoris_rips};
use crate::matrix::{
    self, parse_matrices, reduce_differential, standard_reduction, write_matrix, ColumnMatrix,
    GradedDifferential, MatrixError, ReductionResult,
};
use crate::oracle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser)]
#[command(
    name = "percanon",
    about = "Exact persistence canonical forms, barcodes, and decompositions",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a differential matrix as D = B Dcanon B^-1
    Reduce(ReduceArgs),
    /// Compute barcodes of a filtered complex or point cloud
    Barcodes(PipelineArgs),
    /// List the indecomposable summands of a filtered complex
    Decompose(PipelineArgs),
    /// Re-derive a reduction and cross-check it against independent oracles
    Verify(VerifyArgs),
    /// Build a Vietoris-Rips filtration from a point cloud
    Rips(RipsArgs),
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Coefficient field
    #[arg(long, value_enum, default_value_t = FieldChoice::Q)]
    field: FieldChoice,
    /// The prime p, required with --field zp
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum FieldChoice {
    Q,
    Zp,
}

impl FieldArgs {
    fn resolve(&self) -> Result<FieldSpec, String> {
        match (self.field, self.prime) {
            (FieldChoice::Q, None) => Ok(FieldSpec::Rationals),
            (FieldChoice::Q, Some(_)) => Err("--prime only applies to --field zp".into()),
            (FieldChoice::Zp, Some(p)) => FieldSpec::prime_field(p).map_err(|e| e.to_string()),
            (FieldChoice::Zp, None) => Err("--field zp requires --prime <p>".into()),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Ordering {
    Degree,
    Level,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Adapted-basis ordering for complex input
    #[arg(long, value_enum, default_value_t = Ordering::Degree)]
    ordering: Ordering,
    /// Also write R, V, and Vhat
    #[arg(long)]
    emit_certificate: bool,
    /// Insert missing faces of a complex file at the smallest compatible value
    #[arg(long)]
    close: bool,
    /// Matrix interchange file or filtered-complex file; `-` for stdin
    input: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Adapted-basis ordering; barcode extraction requires degree-major
    #[arg(long, value_enum, default_value_t = Ordering::Degree)]
    ordering: Ordering,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Drop bars that are born and die at the same level
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    drop_empty: bool,
    /// Insert missing faces of a complex file at the smallest compatible value
    #[arg(long)]
    close: bool,
    /// Treat the input as a point cloud and build a Rips filtration first
    #[arg(long)]
    max_radius: Option<String>,
    /// Top simplex dimension for the Rips construction
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    /// Filtered-complex file, or point cloud with --max-radius; `-` for stdin
    input: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Matrix interchange file; `-` for stdin
    input: PathBuf,
}

#[derive(Args)]
struct RipsArgs {
    /// Top simplex dimension
    #[arg(long)]
    max_dim: usize,
    /// Radius bound: a simplex enters when its diameter is at most twice this
    #[arg(long)]
    max_radius: String,
    /// Point cloud file; `-` for stdin
    input: PathBuf,
}

/// Run the CLI against explicit argument and output streams; returns the
/// process exit code.
pub fn run<O: Write, E: Write>(args: &[String], stdout: &mut O, stderr: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are success, anything else is a usage error
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(if e.use_stderr() { Either::B(stderr) } else { Either::A(stdout) }, "{e}");
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Reduce(args) => cmd_reduce(args, stdout),
        Command::Barcodes(args) => cmd_barcodes(args, stdout),
        Command::Decompose(args) => cmd_decompose(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
        Command::Rips(args) => cmd_rips(args, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

enum Either<A, B> {
    A(A),
    B(B),
}

impl<A: Write, B: Write> Write for Either<A, B> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        match self {
            Either::A(a) => a.write(buf),
            Either::B(b) => b.write(buf),
        }
    }
    fn flush(&mut self) -> std::io::Result<()> {
        match self {
            Either::A(a) => a.flush(),
            Either::B(b) => b.flush(),
        }
    }
}

struct CmdError {
    code: i32,
    message: String,
}

fn input_error(message: impl ToString) -> CmdError {
    CmdError { code: EXIT_INPUT, message: message.to_string() }
}

fn verify_error(message: impl ToString) -> CmdError {
    CmdError { code: EXIT_VERIFY, message: message.to_string() }
}

fn read_input(path: &PathBuf) -> Result<String, CmdError> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| input_error(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| input_error(format!("reading {}: {e}", path.display())))
    }
}

fn looks_like_matrix_file(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("matrix"))
}

fn load_complex(text: &str, close: bool) -> Result<FilteredComplex, CmdError> {
    let fc = parse_filtered_complex(text, close).map_err(input_error)?;
    let violations = validate(&fc);
    if !violations.is_empty() {
        let mut msg = format!("invalid complex ({} violations):", violations.len());
        for v in violations.iter().take(5) {
            let _ = write!(msg, "\n  {v}");
        }
        return Err(input_error(msg));
    }
    Ok(fc)
}

fn reduction_error(e: MatrixError) -> CmdError {
    match e {
        MatrixError::InternalVerification(_) => verify_error(e),
        other => input_error(other),
    }
}

enum ReduceInput {
    Graded(GradedDifferential),
    Plain(ColumnMatrix),
}

impl ReduceInput {
    fn reduce(&self) -> Result<ReductionResult, MatrixError> {
        match self {
            ReduceInput::Graded(d) => standard_reduction(d),
            ReduceInput::Plain(d) => reduce_differential(d),
        }
    }

    fn matrix(&self) -> &ColumnMatrix {
        match self {
            ReduceInput::Graded(d) => d.matrix(),
            ReduceInput::Plain(d) => d,
        }
    }

    fn partition(&self) -> Option<&crate::matrix::DegreePartition> {
        match self {
            ReduceInput::Graded(d) => Some(d.partition()),
            ReduceInput::Plain(_) => None,
        }
    }
}

fn reduce_input_from_text(args: &ReduceArgs, text: &str) -> Result<ReduceInput, CmdError> {
    if looks_like_matrix_file(text) {
        let parsed = parse_matrices(text).map_err(input_error)?;
        let first = parsed.into_iter().next().ok_or_else(|| input_error("no matrix in input"))?;
        return match first.partition {
            Some(p) => Ok(ReduceInput::Graded(
                GradedDifferential::new(first.matrix, p).map_err(input_error)?,
            )),
            None => Ok(ReduceInput::Plain(first.matrix)),
        };
    }
    let field = args.field.resolve().map_err(input_error)?;
    let fc = load_complex(text, args.close)?;
    match args.ordering {
        Ordering::Degree => {
            let basis = adapted_basis(&fc, OrderingMode::DegreeMajor).map_err(input_error)?;
            let d = graded_boundary_matrix(&fc, &basis, field).map_err(input_error)?;
            Ok(ReduceInput::Graded(d))
        }
        Ordering::Level => {
            let basis = adapted_basis(&fc, OrderingMode::LevelMajor).map_err(input_error)?;
            let d = crate::complex::boundary_matrix(&fc, &basis, field).map_err(input_error)?;
            Ok(ReduceInput::Plain(d))
        }
    }
}

fn cmd_reduce<W: Write>(args: ReduceArgs, out: &mut W) -> Result<(), CmdError> {
    let text = read_input(&args.input)?;
    let input = reduce_input_from_text(&args, &text)?;
    let result = input.reduce().map_err(reduction_error)?;
    let partition = input.partition();
    let field = input.matrix().field();
    let emit = |w: &mut W, name: &str, m: &ColumnMatrix| -> Result<(), CmdError> {
        writeln!(w, "# {name}").map_err(input_error)?;
        write!(w, "{}", write_matrix(m, partition)).map_err(input_error)?;
        Ok(())
    };
    emit(out, "dcanon", &result.dcanon)?;
    emit(out, "b", &result.b)?;
    let order: Vec<String> =
        result.p.image_one_based().iter().map(|i| i.to_string()).collect();
    writeln!(out, "# p (new order: {})", order.join(" ")).map_err(input_error)?;
    write!(out, "{}", write_matrix(&result.p.to_matrix(field), None))
        .map_err(input_error)?;
    if args.emit_certificate {
        emit(out, "r", &result.r)?;
        emit(out, "v", &result.v)?;
        emit(out, "vhat", &result.vhat)?;
    }
    Ok(())
}

struct Extraction {
    basis: Vec<BasisElement>,
    bars: Vec<Bar>,
    summands: Vec<Summand>,
}

fn extract(args: &PipelineArgs) -> Result<Extraction, CmdError> {
    if args.ordering == Ordering::Level {
        return Err(input_error(
            "level-major ordering is only valid for `reduce`; barcode extraction is degree-major",
        ));
    }
    let field = args.field.resolve().map_err(input_error)?;
    let text = read_input(&args.input)?;
    let fc = match &args.max_radius {
        Some(radius) => {
            let radius = decimal_to_rational(radius).map_err(input_error)?;
            let pc = parse_points(&text).map_err(input_error)?;
            vietoris_rips(&pc, args.max_dim, &radius).map_err(input_error)?
        }
        None => load_complex(&text, args.close)?,
    };
    let basis = adapted_basis(&fc, OrderingMode::DegreeMajor).map_err(input_error)?;
    let d = graded_boundary_matrix(&fc, &basis, field).map_err(input_error)?;
    let result = standard_reduction(&d).map_err(reduction_error)?;
    let pairing =
        barcode::extract_pairing(&result.dcanon, basis.elements()).map_err(verify_error)?;
    let bars = barcode::barcodes(&pairing, basis.elements(), args.drop_empty);
    let summands = barcode::summands(&pairing, basis.elements());
    Ok(Extraction { basis: basis.elements().to_vec(), bars, summands })
}

fn cmd_barcodes<W: Write>(args: PipelineArgs, out: &mut W) -> Result<(), CmdError> {
    let format = args.format;
    let ex = extract(&args)?;
    let rendered = match format {
        Format::Json => barcode::bars_to_json(&ex.bars) + "\n",
        Format::Text => barcode::render_text(&ex.bars, &ex.basis),
        Format::Csv => {
            let mut s = String::from("degree,birth_level,death_level,birth_value,death_value\n");
            for b in &ex.bars {
                let death = b.death_level.map_or("inf".to_string(), |d| d.to_string());
                let bv = b.birth_value.map_or(String::new(), |v| v.to_string());
                let dv = b.death_value.map_or(String::new(), |v| v.to_string());
                let _ = writeln!(s, "{},{},{},{},{}", b.degree, b.birth_level, death, bv, dv);
            }
            s
        }
    };
    write!(out, "{rendered}").map_err(input_error)?;
    Ok(())
}

fn cmd_decompose<W: Write>(args: PipelineArgs, out: &mut W) -> Result<(), CmdError> {
    let format = args.format;
    let ex = extract(&args)?;
    let member_desc = |s: &Summand| -> Vec<String> {
        s.members
            .iter()
            .map(|&i| {
                let e = &ex.basis[i];
                format!("{}@{}", e.label, e.level)
            })
            .collect()
    };
    let rendered = match format {
        Format::Text => {
            let mut s = String::new();
            for sm in &ex.summands {
                let kind = match sm.kind {
                    barcode::SummandKind::J => "J",
                    barcode::SummandKind::K => "K",
                };
                let roles = ["creator", "destroyer"];
                let members: Vec<String> = member_desc(sm)
                    .iter()
                    .enumerate()
                    .map(|(i, m)| format!("{} {m}", roles[i.min(1)]))
                    .collect();
                let _ = writeln!(
                    s,
                    "{}  kind {kind}  degree {}  {}",
                    sm.label,
                    sm.degree,
                    members.join(", ")
                );
            }
            if ex.summands.is_empty() {
                s.push_str("(no summands)\n");
            }
            s
        }
        Format::Json => barcode::summands_to_json(&ex.summands, &ex.basis) + "\n",
        Format::Csv => {
            let mut s = String::from("label,degree,birth_level,death_level,members\n");
            for sm in &ex.summands {
                let death = sm.death_level.map_or("inf".to_string(), |d| d.to_string());
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    sm.label,
                    sm.degree,
                    sm.birth_level,
                    death,
                    member_desc(sm).join(" ")
                );
            }
            s
        }
    };
    write!(out, "{rendered}").map_err(input_error)?;
    Ok(())
}

fn cmd_verify<W: Write>(args: VerifyArgs, out: &mut W) -> Result<(), CmdError> {
    let text = read_input(&args.input)?;
    if !looks_like_matrix_file(&text) {
        return Err(input_error("verify expects a matrix interchange file"));
    }
    let parsed = parse_matrices(&text).map_err(input_error)?;
    let first = parsed.into_iter().next().ok_or_else(|| input_error("no matrix in input"))?;
    let d = first.matrix;
    if !d.is_square() || !d.mul(&d).map(|s| s.is_zero()).unwrap_or(false) {
        return Err(input_error("input rejected: not a differential matrix (D^2 != 0)"));
    }
    let input = match first.partition {
        Some(p) => ReduceInput::Graded(GradedDifferential::new(d, p).map_err(input_error)?),
        None => ReduceInput::Plain(d),
    };
    let result = input.reduce().map_err(reduction_error)?;
    let d = input.matrix();
    let mut check = |name: &str, ok: bool| -> Result<(), CmdError> {
        writeln!(out, "check {name}: {}", if ok { "ok" } else { "FAIL" })
            .map_err(input_error)?;
        if ok {
            Ok(())
        } else {
            Err(verify_error(format!("oracle disagreement in `{name}`")))
        }
    };
    check("factorization invariants", true)?;

    let rank_d = oracle::rank_gauss(d);
    let nonzero_cols: Vec<usize> =
        (0..result.r.cols()).filter(|&k| !result.r.column(k).is_empty()).collect();
    check("rank(D) equals number of nonzero columns of R", rank_d == nonzero_cols.len())?;

    let image_basis = ColumnMatrix::from_entries(
        result.r.rows(),
        nonzero_cols.len(),
        d.field(),
        nonzero_cols.iter().enumerate().flat_map(|(new_c, &k)| {
            result.r.column(k).iter().map(move |(r, v)| (*r, new_c, v.clone())).collect::<Vec<_>>()
        }),
    )
    .map_err(input_error)?;
    check(
        "nonzero columns of R are independent and span im(D)",
        oracle::rank_gauss(&image_basis) == rank_d,
    )?;

    let kernel_ok = (0..result.r.cols())
        .filter(|&k| result.r.column(k).is_empty())
        .all(|k| {
            let col = ColumnMatrix::from_entries(
                d.rows(),
                1,
                d.field(),
                result.v.column(k).iter().map(|(r, v)| (*r, 0, v.clone())).collect::<Vec<_>>(),
            )
            .map(|col| d.mul(&col).map(|prod| prod.is_zero()).unwrap_or(false))
            .unwrap_or(false);
            col
        });
    let kernel_count = (0..result.r.cols()).filter(|&k| result.r.column(k).is_empty()).count();
    check(
        "kernel columns of V lie in ker(D) and count dim ker(D)",
        kernel_ok && kernel_count == d.rows() - rank_d,
    )?;

    if d.rows() <= oracle::BRUTE_FORCE_MAX_DIM && d.field() == FieldSpec::PrimeField(2) {
        let brute = oracle::brute_force_canonical(d).map_err(verify_error)?;
        check("exhaustive canonical form agrees", brute == result.dcanon)?;
    }
    writeln!(out, "verified").map_err(input_error)?;
    Ok(())
}

fn cmd_rips<W: Write>(args: RipsArgs, out: &mut W) -> Result<(), CmdError> {
    let radius = decimal_to_rational(&args.max_radius).map_err(input_error)?;
    let text = read_input(&args.input)?;
    let pc = parse_points(&text).map_err(input_error)?;
    let fc = vietoris_rips(&pc, args.max_dim, &radius).map_err(input_error)?;
    write!(out, "{}", crate::complex::write_filtered_complex(&fc)).map_err(input_error)?;
    Ok(())
}

/// The result of running the whole degree-major pipeline on a complex.
pub struct ComplexAnalysis {
    pub basis: AdaptedBasis,
    pub bars: Vec<Bar>,
    pub summands: Vec<Summand>,
}

/// Degree-major extraction pipeline shared by library callers that start from
/// a parsed complex rather than a file.
pub fn analyze_complex(
    fc: &FilteredComplex,
    field: FieldSpec,
    drop_empty: bool,
) -> Result<ComplexAnalysis, String> {
    let basis = adapted_basis(fc, OrderingMode::DegreeMajor).map_err(|e| e.to_string())?;
    let d = graded_boundary_matrix(fc, &basis, field).map_err(|e| e.to_string())?;
    let result = matrix::standard_reduction(&d).map_err(|e| e.to_string())?;
    let pairing =
        barcode::extract_pairing(&result.dcanon, basis.elements()).map_err(|e| e.to_string())?;
    let bars = barcode::barcodes(&pairing, basis.elements(), drop_empty);
    let summands = barcode::summands(&pairing, basis.elements());
    Ok(ComplexAnalysis { basis, bars, summands })
}
