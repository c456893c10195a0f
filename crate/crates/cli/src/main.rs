//! Command-line front end: entropy, growth-type classification, the
//! two-symbol entropy tables, brute-force cross-checks, and named shift
//! families.

mod record;
mod spec;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use treeshift::{
    classify_type_22, detect_empirically, entropy_auto, entropy_closed, entropy_generic,
    verify_snre, Error as CoreError, FreeGroupGms, Snre, TypeLabel,
};

use record::ResultRecord;
use spec::{parse_spec, SpecFile};

const EXIT_VALIDATION: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "treeshift",
    about = "Entropy of nearest-neighbour shifts on free semigroups and free groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct NumericOpts {
    /// Certified residual target
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Iteration budget for the generic engine
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Emit a CSV row (with header) instead of the human summary
    #[arg(long)]
    csv: bool,
    /// Emit one JSON object per line instead of the human summary
    #[arg(long)]
    ndjson: bool,
    /// Report entropy in bits (log base 2) in the human summary
    #[arg(long)]
    bits: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodChoice {
    Auto,
    Generic,
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Structure {
    Semigroup,
    Freegroup,
    Chessboard,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the entropy of the shift described by a spec file
    Entropy {
        /// Shift description file (see README for the format)
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
        #[command(flatten)]
        numeric: NumericOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Report the growth type of the system
    Classify {
        spec: PathBuf,
    },
    /// Regenerate the two-symbol entropy tables
    Table {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Diff the computed cells against the embedded reference values
        #[arg(long)]
        golden: bool,
        #[command(flatten)]
        numeric: NumericOpts,
    },
    /// Cross-check recursive counts against brute-force enumeration
    Oracle {
        spec: PathBuf,
        /// Largest height to verify
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Construct a named shift family and compute its entropy
    Gms {
        #[arg(long, value_enum, default_value_t = Structure::Semigroup)]
        structure: Structure,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Allow the unverified free-group construction on k >= 3 symbols
        #[arg(long)]
        experimental: bool,
        #[command(flatten)]
        numeric: NumericOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

enum CliError {
    Parse(spec::ParseError),
    Core(CoreError),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<spec::ParseError> for CliError {
    fn from(e: spec::ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

fn exit_code_for(e: &CliError) -> u8 {
    match e {
        CliError::Parse(_) | CliError::Io(_) => EXIT_VALIDATION,
        CliError::Core(core) => match core {
            CoreError::Convergence { .. } | CoreError::Inconsistent { .. } => EXIT_CONVERGENCE,
            _ => EXIT_VALIDATION,
        },
    }
}

fn load_spec(path: &PathBuf) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_spec(&text)?)
}

fn label_for(f: &Snre) -> Option<TypeLabel> {
    if f.d() == 2 && f.k() == 2 {
        classify_type_22(f).ok()
    } else {
        detect_empirically(f, 40).ok().map(|(l, _)| l)
    }
}

fn emit(record: &ResultRecord, r: &treeshift::EntropyResult, output: &OutputOpts) {
    if output.ndjson {
        println!("{}", record.to_ndjson());
        return;
    }
    if output.csv {
        println!("{}", ResultRecord::CSV_HEADER);
        println!("{}", record.to_csv_row());
        return;
    }
    let label = match (&record.type_label.primary, record.type_label.applicable.len()) {
        (Some(_), n) if n > 1 => format!("{{{}}}", record.type_label.applicable.join(",")),
        (Some(p), _) => p.clone(),
        (None, _) => "undecided".to_string(),
    };
    if output.bits {
        println!("entropy: {:.12} bits", r.entropy_bits());
    } else {
        println!("entropy: {:.12} nats", r.h);
    }
    println!("type: {label}");
    println!(
        "residual: {:.3e}   iterations: {}   method: {}",
        r.residual, r.iterations, record.method
    );
    println!("degree: ln kappa = {:.6}, kappa = {:.6}", r.ln_kappa, r.kappa);
    if !record.flags.is_empty() {
        println!("flags: {}", record.flags.join(", "));
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Entropy { spec, method, numeric, output } => {
            let parsed = load_spec(&spec)?;
            let f = parsed.to_snre()?;
            let r = match method {
                MethodChoice::Auto => entropy_auto(&f, numeric.tol, numeric.max_iter)?,
                MethodChoice::Generic => entropy_generic(&f, numeric.tol, numeric.max_iter)?,
                MethodChoice::Closed => entropy_closed(&f, numeric.tol)?,
            };
            let label = label_for(&f);
            let id = spec.file_stem().and_then(|s| s.to_str()).unwrap_or("spec");
            let record = ResultRecord::new(id, &f, label.as_ref(), &r);
            emit(&record, &r, &output);
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { spec } => {
            let parsed = load_spec(&spec)?;
            let f = parsed.to_snre()?;
            if f.d() == 2 && f.k() == 2 {
                let exact = classify_type_22(&f)?;
                let (empirical, _) = detect_empirically(&f, 40)?;
                let agreement = if empirical.is_undecided() {
                    "empirical undecided"
                } else if exact.compatible_with(&empirical) {
                    "empirical agrees"
                } else {
                    "empirical disagrees"
                };
                let shown = if exact.applicable().len() > 1 {
                    exact.to_string()
                } else {
                    exact.primary().map(|t| t.as_letter().to_string()).unwrap_or_default()
                };
                println!("{shown} (theorem-case; {agreement})");
                if !exact.compatible_with(&empirical) {
                    return Ok(ExitCode::from(EXIT_MISMATCH));
                }
            } else {
                let (label, _) = detect_empirically(&f, 40)?;
                println!("{label} (empirical)");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { d, k, golden, numeric } => {
            if d != 2 || k != 2 {
                return Err(CliError::Core(CoreError::Unsupported(
                    "tables are defined for --d 2 --k 2".into(),
                )));
            }
            print!("{}", table::render_csv(numeric.tol, numeric.max_iter));
            if golden {
                let diffs = table::golden_diffs(numeric.tol, numeric.max_iter, 1e-5);
                if !diffs.is_empty() {
                    eprintln!("golden mismatches ({} of 43 cells):", diffs.len());
                    for diff in &diffs {
                        eprintln!(
                            "  cell va=({},{},{}) vb=({},{},{}): computed {:.6} reference {:.6} |diff| {:.2e}",
                            diff.va[0], diff.va[1], diff.va[2],
                            diff.vb[0], diff.vb[1], diff.vb[2],
                            diff.computed, diff.golden,
                            (diff.computed - diff.golden).abs()
                        );
                    }
                    return Ok(ExitCode::from(EXIT_MISMATCH));
                }
                eprintln!("golden: all 43 cells match within 1e-5");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { spec, n } => {
            let parsed = load_spec(&spec)?;
            let basic = parsed.basic_set()?.ok_or_else(|| {
                CliError::Core(CoreError::Unsupported(
                    "brute-force verification needs a forbid- or block-style spec".into(),
                ))
            })?;
            println!("d = {}, k = {}, heights 1..={n}", parsed.d, parsed.k);
            let report = verify_snre(&basic, n)?;
            if report.is_ok() {
                println!("OK: {}/{} counts match", report.checks, report.checks);
                Ok(ExitCode::SUCCESS)
            } else {
                for m in &report.mismatches {
                    println!(
                        "MISMATCH symbol {} height {}: brute force {} vs recursion {}",
                        m.symbol, m.n, m.brute_force, m.recursive
                    );
                }
                Ok(ExitCode::from(EXIT_MISMATCH))
            }
        }
        Command::Gms { structure, d, k, experimental, numeric, output } => match structure {
            Structure::Semigroup => {
                let f = Snre::from_basic(&treeshift::gms_basic(d, k)?);
                print!("{f}");
                let r = entropy_auto(&f, numeric.tol, numeric.max_iter)?;
                let label = label_for(&f);
                let record = ResultRecord::new(&format!("gms-s{d}-k{k}"), &f, label.as_ref(), &r);
                emit(&record, &r, &output);
                Ok(ExitCode::SUCCESS)
            }
            Structure::Chessboard => {
                let f = Snre::from_basic(&treeshift::chessboard_basic(d, k)?);
                print!("{f}");
                let r = treeshift::chessboard_entropy(d, k, numeric.tol, numeric.max_iter)?;
                let label = label_for(&f);
                let record =
                    ResultRecord::new(&format!("chessboard-s{d}-k{k}"), &f, label.as_ref(), &r);
                emit(&record, &r, &output);
                Ok(ExitCode::SUCCESS)
            }
            Structure::Freegroup => {
                let gms = if k == 2 {
                    FreeGroupGms::new(d)?
                } else if experimental {
                    FreeGroupGms::new_experimental(d, k)?
                } else {
                    return Err(CliError::Core(CoreError::Unsupported(
                        "free-group construction on k >= 3 symbols is unverified; pass --experimental".into(),
                    )));
                };
                let interior = gms.interior().clone();
                println!(
                    "free group rank {d}: interior tree branching q = {}, root branching {}",
                    gms.q(),
                    gms.root_branching()
                );
                print!("{interior}");
                let (r, consistency) = gms.entropy(numeric.tol)?;
                let label = label_for(&interior);
                let record =
                    ResultRecord::new(&format!("gms-f{d}-k{k}"), &interior, label.as_ref(), &r);
                emit(&record, &r, &output);
                println!(
                    "consistency: series {:.12} vs root-corrected {:.12} (|diff| {:.2e}), interior kappa {:.4}",
                    consistency.series_h,
                    consistency.root_corrected_h,
                    consistency.abs_diff,
                    consistency.interior_kappa
                );
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}
