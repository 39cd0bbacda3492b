//! `saa`: build symplectic alternating algebras from presentation files,
//! inspect their structure, compute canonical forms and censuses, and run
//! the acceptance self-test.
//!
//! Exit codes: 0 success; 1 internal error; 2 parse or input error
//! (including unreadable files and invalid field literals); 3 product-axiom
//! violation; 4 classification outside the supported catalog; 5 not
//! nilpotent or wrong dimension.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use saa::algebra::{Algebra, AlgebraError, Presentation};
use saa::canon::{classify, structure_report, CanonError, Classification, IsoVerdict};
use saa::families::{census_family, CensusRow, ALL_TAGS};
use saa::gf::FieldSpec;
use saa::selftest;
use saa::symlin::random_symplectic;

/// Default seed for the deterministic generators.
const DEFAULT_SEED: u64 = 2024;
/// Default number of elementary factors in a random symplectic map.
const DEFAULT_STEPS: usize = 40;

#[derive(Parser)]
#[command(
    name = "saa",
    about = "Exact computation with symplectic alternating algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Args)]
struct FormatArg {
    /// Output format: human-readable text or stable key-value lines
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a presentation file, build the algebra and verify the axioms
    Check { file: PathBuf },
    /// Print the structural fingerprint of a dimension-ten nilpotent algebra
    Report {
        file: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Compute the canonical catalog form and its witness basis change
    Canon {
        file: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Decide whether two presentations give isomorphic algebras
    Iso { left: PathBuf, right: PathBuf },
    /// Count isomorphism classes of catalog algebras over a finite field
    Census {
        /// Field literal, e.g. gf(3), gf(4) or gf(2^3)
        #[arg(long)]
        field: String,
        /// Number of worker threads for the family enumerations
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Emit a random nilpotent presentation, or shuffle an existing one by
    /// a random symplectic basis change
    Random {
        /// Field literal (ignored with --shuffle)
        #[arg(long, default_value = "gf(3)")]
        field: String,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Probability of each admissible triple being nonzero
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        /// Apply a random symplectic change to this presentation instead
        #[arg(long)]
        shuffle: Option<PathBuf>,
        /// Number of elementary factors in the symplectic change
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
    },
    /// Run the acceptance suite
    Selftest {
        /// Run a single criterion (1-9)
        #[arg(long)]
        criterion: Option<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        let code = match &e {
            AlgebraError::AxiomViolation(_) => 3,
            AlgebraError::Parse { .. }
            | AlgebraError::DuplicateTriple(_)
            | AlgebraError::RepeatedSymbol(_)
            | AlgebraError::IndexOutOfRange(..)
            | AlgebraError::Field(_) => 2,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CanonError> for Failure {
    fn from(e: CanonError) -> Self {
        let code = match &e {
            CanonError::NotNilpotent | CanonError::WrongDimension(_) => 5,
            CanonError::InfiniteField => 2,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

fn read_algebra(path: &PathBuf) -> Result<Algebra, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let pres = Presentation::parse(&text)?;
    Ok(Algebra::build(pres)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Check { file } => {
            let alg = read_algebra(&file)?;
            println!(
                "ok: dimension {}, {} nonzero triples",
                alg.dim(),
                alg.presentation().triples().len()
            );
            Ok(())
        }
        Command::Report { file, format } => {
            let alg = read_algebra(&file)?;
            let report = structure_report(&alg)?;
            match format.format {
                Format::Kv => {
                    print!("field: {}\n{}", alg.field().literal(), report.fingerprint());
                }
                Format::Text => {
                    println!("structure report over {}", alg.field().literal());
                    print!("{}", report.fingerprint());
                }
            }
            Ok(())
        }
        Command::Canon { file, format } => {
            let alg = read_algebra(&file)?;
            match classify(&alg)? {
                Classification::Canonical(c) => {
                    match format.format {
                        Format::Kv => {
                            println!("field: {}", alg.field().literal());
                            println!("label: {}", c.label);
                            let mut rows = Vec::new();
                            let m = c.witness.matrix();
                            for i in 0..m.rows() {
                                let mut row = Vec::new();
                                for j in 0..m.cols() {
                                    row.push(m.get(i, j).to_string());
                                }
                                rows.push(row.join(","));
                            }
                            println!("witness: {}", rows.join(";"));
                            println!("trace: {}", c.trace.join(" | "));
                        }
                        Format::Text => {
                            println!("label: {}", c.label);
                            println!("witness (columns are the new basis):");
                            let m = c.witness.matrix();
                            for i in 0..m.rows() {
                                let mut line = String::new();
                                for j in 0..m.cols() {
                                    let _ = write!(line, "{:>6}", m.get(i, j).to_string());
                                }
                                println!("  {line}");
                            }
                            println!("trace:");
                            for step in &c.trace {
                                println!("  - {step}");
                            }
                        }
                    }
                    Ok(())
                }
                Classification::Unsupported { center_dim, report } => {
                    println!("label: unsupported");
                    println!("center_dim: {center_dim}");
                    print!("{}", report.fingerprint());
                    Err(Failure::new(
                        4,
                        format!("isotropic centre of dimension {center_dim} is outside the catalog"),
                    ))
                }
            }
        }
        Command::Iso { left, right } => {
            let a = read_algebra(&left)?;
            let b = read_algebra(&right)?;
            let (la, lb) = (label_of(&a)?, label_of(&b)?);
            println!("left: {la}");
            println!("right: {lb}");
            match saa::canon::isomorphic(&a, &b)? {
                IsoVerdict::Isomorphic => {
                    println!("isomorphic: true");
                    Ok(())
                }
                IsoVerdict::NotIsomorphic => {
                    println!("isomorphic: false");
                    Ok(())
                }
                IsoVerdict::Unknown => {
                    println!("isomorphic: unknown");
                    Err(Failure::new(4, "at least one side is outside the catalog"))
                }
            }
        }
        Command::Census {
            field,
            workers,
            format,
        } => {
            let field = FieldSpec::parse(&field).map_err(|e| Failure::new(2, e.to_string()))?;
            if !field.is_finite() {
                return Err(Failure::new(2, "census requires a finite field"));
            }
            let rows = census_rows(&field, workers.max(1))?;
            let total: usize = rows.iter().map(|r| r.count).sum();
            match format.format {
                Format::Kv => {
                    println!("field: {}", field.literal());
                    for row in &rows {
                        println!("{}: {}", row.tag.name(), row.count);
                        if !row.reps.is_empty() {
                            let reps: Vec<String> =
                                row.reps.iter().map(|r| r.to_string()).collect();
                            println!("{}_reps: {}", row.tag.name(), reps.join("|"));
                        }
                    }
                    println!("unsupported: unknown");
                    println!("total: {total}");
                }
                Format::Text => {
                    println!("census over {}", field.literal());
                    println!("{:<10} {:>5}  representatives", "family", "count");
                    for row in &rows {
                        let reps: Vec<String> = row.reps.iter().map(|r| r.to_string()).collect();
                        println!("{:<10} {:>5}  {}", row.tag.name(), row.count, reps.join(", "));
                    }
                    println!(
                        "{:<10} {:>5}  (isotropic centre of dimension 2 or 4; not covered)",
                        "unsupported", "?"
                    );
                    println!("total: {total}");
                }
            }
            Ok(())
        }
        Command::Random {
            field,
            dim,
            seed,
            density,
            shuffle,
            steps,
        } => {
            if let Some(path) = shuffle {
                let alg = read_algebra(&path)?;
                let n = alg.dim() / 2;
                let m = random_symplectic(alg.field(), n, seed, steps)
                    .map_err(|e| Failure::new(2, e.to_string()))?;
                let moved = alg.change_basis(&m)?;
                print!("{}", moved.presentation().to_text());
                return Ok(());
            }
            if dim == 0 || dim % 2 != 0 {
                return Err(Failure::new(2, "dimension must be even and positive"));
            }
            if !(0.0..=1.0).contains(&density) {
                return Err(Failure::new(2, "density must lie in [0, 1]"));
            }
            let field = FieldSpec::parse(&field).map_err(|e| Failure::new(2, e.to_string()))?;
            let pres = Presentation::random_nilpotent(&field, dim / 2, seed, density)?;
            print!("{}", pres.to_text());
            Ok(())
        }
        Command::Selftest { criterion } => {
            let results = match criterion {
                Some(id) => {
                    if !(1..=9).contains(&id) {
                        return Err(Failure::new(2, "criterion must be between 1 and 9"));
                    }
                    vec![selftest::run_criterion(id)]
                }
                None => selftest::run_all(),
            };
            let mut failed = false;
            for r in &results {
                println!("{}", r.line());
                failed |= !r.passed;
            }
            if failed {
                Err(Failure::new(1, "self-test failed"))
            } else {
                Ok(())
            }
        }
    }
}

fn label_of(alg: &Algebra) -> Result<String, Failure> {
    Ok(match classify(alg)? {
        Classification::Canonical(c) => c.label.to_string(),
        Classification::Unsupported { center_dim, .. } => {
            format!("unsupported (isotropic centre of dimension {center_dim})")
        }
    })
}

/// Census rows computed with a small worker pool, merged in catalog order.
fn census_rows(field: &saa::gf::Field, workers: usize) -> Result<Vec<CensusRow>, Failure> {
    if workers <= 1 {
        return ALL_TAGS
            .iter()
            .map(|&tag| census_family(field, tag).map_err(|e| Failure::new(1, e.to_string())))
            .collect();
    }
    let mut out: Vec<Option<CensusRow>> = (0..ALL_TAGS.len()).map(|_| None).collect();
    std::thread::scope(|scope| -> Result<(), Failure> {
        let mut handles = Vec::new();
        for (chunk_idx, chunk) in ALL_TAGS.chunks(ALL_TAGS.len().div_ceil(workers)).enumerate() {
            let field = field.clone();
            handles.push((
                chunk_idx,
                chunk.len(),
                scope.spawn(move || -> Result<Vec<CensusRow>, String> {
                    chunk
                        .iter()
                        .map(|&tag| census_family(&field, tag).map_err(|e| e.to_string()))
                        .collect()
                }),
            ));
        }
        let chunk_size = ALL_TAGS.len().div_ceil(workers);
        for (chunk_idx, _, handle) in handles {
            let rows = handle
                .join()
                .map_err(|_| Failure::new(1, "census worker panicked"))?
                .map_err(|e| Failure::new(1, e))?;
            for (i, row) in rows.into_iter().enumerate() {
                out[chunk_idx * chunk_size + i] = Some(row);
            }
        }
        Ok(())
    })?;
    Ok(out.into_iter().map(|r| r.unwrap()).collect())
}
