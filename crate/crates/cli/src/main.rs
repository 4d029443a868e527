mod report;
mod selfcheck;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use posetcox::classify::{canonical_one_peak, canonical_two_peak, coxeter_type, detect_type_a};
use posetcox::congruence::{canonicalize, pair_congruence};
use posetcox::enumerate::{census, count_total};
use posetcox::spectral::default_cutoff;
use posetcox::{
    ClassifyError, CongruenceError, EnumerateError, PairOutcome, Poset, PosetError, TypeAClass,
};

use report::{witness_text, CensusReport, ClassificationReport, PairReport};

/// Largest `n` accepted by `census`.
const CENSUS_MAX_N: usize = 64;

#[derive(Parser)]
#[command(
    name = "posetcox",
    version,
    about = "Coxeter spectral classification of type A posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the spectral invariants and type A verdict of a poset file.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Give up on Coxeter matrix orders above this bound.
        #[arg(long)]
        cutoff: Option<u64>,
    },
    /// Decide strong Gram congruence of two type A posets.
    Congruence {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reduce a type A poset to its canonical representative.
    Canonicalize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Count type A posets by Coxeter polynomial.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Emit a canonical poset in the text format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run the invariant battery.
    Selfcheck {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Extend the all-posets sweep to n = 8.
        #[arg(long)]
        allow_n8: bool,
    },
}

#[derive(Subcommand)]
enum GenKind {
    OnePeak { n: usize },
    TwoPeak { n: usize, p: usize },
}

/// Raised for argument values outside the supported range.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct RangeError(String);

/// Raised when a pair of posets is not congruent.
#[derive(Debug, thiserror::Error)]
#[error("not congruent")]
struct NotCongruent;

fn read_poset(path: &Path) -> Result<Poset> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Poset::parse_text(&text).with_context(|| format!("invalid poset in {}", path.display()))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn cmd_classify(file: &Path, format: Format, cutoff: Option<u64>) -> Result<()> {
    let p = read_poset(file)?;
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(p.n()));
    let report = ClassificationReport::new(&file.display().to_string(), &p, cutoff);
    match format {
        Format::Text => emit(&report.to_text())?,
        Format::Json => print_json(&report)?,
    }
    Ok(())
}

fn require_type_a(p: &Poset, path: &Path) -> Result<()> {
    match detect_type_a(p) {
        Ok(TypeAClass::NotTypeA) => Err(ClassifyError::NotTypeA),
        Ok(_) => Ok(()),
        Err(e) => Err(e),
    }
    .with_context(|| format!("{} is not a type A poset", path.display()))
}

fn cmd_congruence(left: &Path, right: &Path, format: Format) -> Result<()> {
    let p = read_poset(left)?;
    let q = read_poset(right)?;
    require_type_a(&p, left)?;
    require_type_a(&q, right)?;
    let report = match pair_congruence(&p, &q)? {
        PairOutcome::Congruent(b) => PairReport {
            congruent: true,
            b: Some(b),
            left_polynomial: coxeter_type(&p)?,
            right_polynomial: coxeter_type(&q)?,
        },
        PairOutcome::NotCongruent { left, right } => PairReport {
            congruent: false,
            b: None,
            left_polynomial: left,
            right_polynomial: right,
        },
    };
    match format {
        Format::Text => emit(&report.to_text())?,
        Format::Json => print_json(&report)?,
    }
    if report.congruent {
        Ok(())
    } else {
        Err(NotCongruent.into())
    }
}

fn cmd_canonicalize(file: &Path, format: Format) -> Result<()> {
    let p = read_poset(file)?;
    require_type_a(&p, file)?;
    let record = canonicalize(&p)?.record();
    match format {
        Format::Text => emit(&witness_text(&record))?,
        Format::Json => print_json(&record)?,
    }
    Ok(())
}

fn cmd_census(n: usize, format: Format) -> Result<()> {
    if !(2..=CENSUS_MAX_N).contains(&n) {
        return Err(RangeError(format!("census needs 2 <= n <= {CENSUS_MAX_N}, got {n}")).into());
    }
    let rows = census(n)?;
    let principal_total = rows
        .iter()
        .filter(|r| r.p.is_some())
        .map(|r| &r.count)
        .sum();
    let report = CensusReport {
        n,
        rows,
        principal_total,
        total: count_total(n),
    };
    match format {
        Format::Text => emit(&report.to_text())?,
        Format::Json => print_json(&report)?,
    }
    Ok(())
}

fn cmd_gen(kind: &GenKind) -> Result<()> {
    let p = match *kind {
        GenKind::OnePeak { n } => canonical_one_peak(n)?,
        GenKind::TwoPeak { n, p } => canonical_two_peak(n, p)?,
    };
    emit(&p.to_text())?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify {
            file,
            format,
            cutoff,
        } => cmd_classify(&file, format, cutoff),
        Command::Congruence {
            left,
            right,
            format,
        } => cmd_congruence(&left, &right, format),
        Command::Canonicalize { file, format } => cmd_canonicalize(&file, format),
        Command::Census { n, format } => cmd_census(n, format),
        Command::Gen { kind } => cmd_gen(&kind),
        Command::Selfcheck { max_n, allow_n8 } => {
            if max_n > selfcheck::MAX_N {
                return Err(RangeError(format!(
                    "selfcheck needs max-n <= {}, got {max_n}",
                    selfcheck::MAX_N
                ))
                .into());
            }
            selfcheck::run(max_n, allow_n8)
        }
    }
}

/// 1: not congruent or failed check, 2: parse/range/IO, 3: cyclic relation,
/// 4: not of type A.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<NotCongruent>() || cause.is::<selfcheck::CheckFailed>() {
            return 1;
        }
        if let Some(PosetError::CycleDetected { .. }) = cause.downcast_ref::<PosetError>() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<ClassifyError>() {
            if matches!(e, ClassifyError::NotTypeA | ClassifyError::Disconnected) {
                return 4;
            }
        }
        if let Some(e) = cause.downcast_ref::<CongruenceError>() {
            if matches!(
                e,
                CongruenceError::NotTypeA
                    | CongruenceError::NotPositiveTypeA
                    | CongruenceError::NotPrincipalTypeA
            ) {
                return 4;
            }
            if matches!(e, CongruenceError::Unverified(_)) {
                return 1;
            }
        }
        if cause.is::<EnumerateError>() {
            return 2;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if err.is::<selfcheck::CheckFailed>() {
                eprintln!("error: selfcheck failed");
            } else if !err.is::<NotCongruent>() {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
