use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sullivan_core::catalog::{self, CatalogEntry};
use sullivan_core::cohomology::{cohomology_bigraded, cohomology_total};
use sullivan_core::conjecture::{analyze, reproducer};
use sullivan_core::dga::{validate, SullivanPresentation};
use sullivan_core::gysin::{gysin_window, verify_exactness};
use sullivan_core::invariants::{
    class_toomer, default_degree_bound, ellipticity_check, toomer_via_quotients,
};
use sullivan_core::parser::parse_model_with_warnings;
use sullivan_core::report;
use sullivan_core::sweep::{run_sweep, SweepSpec};
use sullivan_core::Error;

const PASS: u8 = 0;
const FAIL: u8 = 1;
const VIOLATION: u8 = 2;
const GYSIN_PRECONDITION: u8 = 3;
const USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "sullivan",
    version,
    about = "Rational cohomology and conjecture checks for minimal Sullivan algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Record,
}

#[derive(Subcommand)]
enum Command {
    /// Check generator degrees, differential degrees, minimality and d² = 0.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the full pipeline and report every verdict.
    Check {
        file: PathBuf,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Where a reproducer is written if a verdict is violated.
        #[arg(long, default_value = ".")]
        reproducer_dir: PathBuf,
    },
    /// Cohomology dimensions and representatives.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        bigraded: bool,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Exactness of the Gysin sequence for the first generator.
    Gysin {
        file: PathBuf,
        #[arg(long, requires = "length")]
        degree: Option<u32>,
        #[arg(long, requires = "degree")]
        length: Option<u32>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Toomer invariant by formula and by truncated quotients.
    Toomer {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Built-in models with pinned expectations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
        #[arg(long, value_enum, default_value = "text", global = true)]
        format: Format,
    },
    /// Enumerate small pure models and check each certified one.
    Sweep {
        #[arg(long)]
        max_even: usize,
        #[arg(long)]
        max_odd: usize,
        #[arg(long)]
        max_degree: u32,
        /// Quadratic differentials only.
        #[arg(long)]
        coformal: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Analyze a random subset of this many distinct models.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 1)]
        coefficient_bound: i64,
        /// Directory for reproducer files of findings.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Run { id: String },
    RunAll,
}

fn load(path: &Path) -> Result<SullivanPresentation, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        USAGE
    })?;
    let (p, warnings) = parse_model_with_warnings(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        USAGE
    })?;
    for line in warnings.odd_powers {
        eprintln!("warning: line {line}: power of an odd generator is zero");
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(p.with_name(name))
}

/// Loads and validates; prints the violations and fails when there are any.
fn load_valid(path: &Path) -> Result<SullivanPresentation, u8> {
    let p = load(path)?;
    let v = validate(&p);
    if !v.ok() {
        eprint!("invalid model:\n{}", report::validation_text(&v));
        return Err(FAIL);
    }
    Ok(p)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::FirstGeneratorOdd(_) => GYSIN_PRECONDITION,
        Error::ToomerMismatch { .. }
        | Error::InternalInconsistency(_)
        | Error::LiftNotDivisible(_) => VIOLATION,
        _ => FAIL,
    }
}

fn emit(format: Format, record: impl FnOnce() -> serde_json::Value, text: impl FnOnce() -> String) {
    match format {
        Format::Record => println!("{}", record()),
        Format::Text => print!("{}", text()),
    }
}

fn write_reproducer(dir: &Path, name: &str, body: &str) {
    let path = dir.join(format!("{name}.reproducer.sullivan"));
    match std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, body)) {
        Ok(()) => eprintln!("reproducer written to {}", path.display()),
        Err(e) => eprintln!("error: cannot write reproducer {}: {e}", path.display()),
    }
}

fn cmd_validate(file: &Path, format: Format) -> Result<u8, u8> {
    let p = load(file)?;
    let v = validate(&p);
    emit(
        format,
        || report::validation_record(&p, &v),
        || report::validation_text(&v),
    );
    Ok(if v.ok() { PASS } else { FAIL })
}

fn cmd_check(file: &Path, max_degree: Option<u32>, format: Format, dir: &Path) -> Result<u8, u8> {
    let p = load_valid(file)?;
    let result = analyze(&p, max_degree);
    match format {
        Format::Record => println!("{}", report::check_record(&p, &result)),
        Format::Text => match &result {
            Ok(a) => print!("{}", report::check_text(&p, a)),
            Err(e) => println!("{}: {e}", report::error_status(e)),
        },
    }
    match result {
        Ok(a) if a.report.violated() => {
            write_reproducer(dir, p.name().unwrap_or("model"), &reproducer(&p, &a.report));
            Ok(VIOLATION)
        }
        Ok(_) => Ok(PASS),
        Err(e) => Ok(error_code(&e)),
    }
}

fn cmd_cohomology(
    file: &Path,
    bigraded: bool,
    max_degree: Option<u32>,
    format: Format,
) -> Result<u8, u8> {
    let p = load_valid(file)?;
    let bound = max_degree.unwrap_or_else(|| default_degree_bound(&p));
    let h = if bigraded {
        cohomology_bigraded(&p, bound)
    } else {
        cohomology_total(&p, bound)
    };
    match h {
        Ok(h) => {
            emit(
                format,
                || report::cohomology_record(&h),
                || report::cohomology_text(&h, bigraded),
            );
            Ok(PASS)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(error_code(&e))
        }
    }
}

fn cmd_gysin(
    file: &Path,
    window: Option<(u32, u32)>,
    max_degree: Option<u32>,
    format: Format,
) -> Result<u8, u8> {
    let p = load_valid(file)?;
    if let Some((i, k)) = window {
        return match gysin_window(&p, i, k, max_degree) {
            Ok(w) => {
                let checks = w.checks();
                let exact = checks.iter().all(|c| c.exact);
                emit(
                    format,
                    || {
                        json!({
                            "version": report::RECORD_VERSION,
                            "kind": "gysin-window",
                            "model": p.name(),
                            "degree": w.degree,
                            "length": w.length,
                            "dims": w.dims,
                            "nodes": checks,
                            "exact": exact,
                        })
                    },
                    || {
                        let mut s =
                            format!("window at ({i}, {k}), shift {}\n{:?}\n", w.shift, w.dims);
                        for c in &checks {
                            s.push_str(&format!(
                                "  {:?} at ({}, {}): rank in {}, kernel out {}, {}\n",
                                c.node,
                                c.degree,
                                c.length,
                                c.rank_in,
                                c.kernel_out,
                                if c.exact { "exact" } else { "NOT exact" }
                            ));
                        }
                        s
                    },
                );
                Ok(if exact { PASS } else { FAIL })
            }
            Err(e) => {
                eprintln!("error: {e}");
                Ok(gysin_code(&e))
            }
        };
    }
    match verify_exactness(&p, max_degree) {
        Ok(r) => {
            emit(
                format,
                || report::exactness_record(&p, &r),
                || report::exactness_text(&r),
            );
            Ok(if r.overall { PASS } else { FAIL })
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(gysin_code(&e))
        }
    }
}

fn gysin_code(e: &Error) -> u8 {
    match e {
        Error::FirstGeneratorOdd(_) => GYSIN_PRECONDITION,
        _ => FAIL,
    }
}

fn cmd_toomer(file: &Path, format: Format) -> Result<u8, u8> {
    let p = load_valid(file)?;
    let run = || -> Result<_, Error> {
        let cert = ellipticity_check(&p)?;
        let r = toomer_via_quotients(&p, &cert)?;
        let mut classes = Vec::new();
        for cell in cert.cohomology.cells() {
            for j in 0..cell.dim() {
                let c = cert.cohomology.basis_class(cell.degree, None, j);
                classes.push((cell.degree, j, class_toomer(&p, &cert, &c)?));
            }
        }
        Ok((r, classes))
    };
    match run() {
        Ok((r, classes)) => {
            emit(
                format,
                || report::toomer_record(&p, &r, &classes),
                || report::toomer_text(&r, &classes),
            );
            Ok(if r.agrees { PASS } else { VIOLATION })
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(error_code(&e))
        }
    }
}

/// Runs the pipeline on a catalog entry; returns (passed, mismatches, record).
fn run_entry(e: &CatalogEntry) -> (bool, Vec<String>, serde_json::Value) {
    let p = e.presentation();
    let result = analyze(&p, None);
    let mismatches = match &result {
        Ok(a) => {
            let mut m = e.expected.mismatches(&a.report);
            if a.report.violated() {
                m.push("verdict VIOLATED".into());
            }
            m
        }
        Err(err) => vec![format!("pipeline error: {err}")],
    };
    let mut record = report::check_record(&p, &result);
    record["expectations_met"] = json!(mismatches.is_empty());
    record["mismatches"] = json!(mismatches);
    (mismatches.is_empty(), mismatches, record)
}

fn cmd_catalog(action: &CatalogAction, format: Format) -> Result<u8, u8> {
    match action {
        CatalogAction::List => {
            for e in catalog::catalog() {
                match format {
                    Format::Record => println!(
                        "{}",
                        json!({"version": report::RECORD_VERSION, "kind": "catalog-entry", "id": e.id, "description": e.description})
                    ),
                    Format::Text => println!("{:<15} {}", e.id, e.description),
                }
            }
            Ok(PASS)
        }
        CatalogAction::Run { id } => {
            let Some(e) = catalog::find(id) else {
                eprintln!("error: no catalog entry `{id}`");
                return Err(USAGE);
            };
            let (ok, mismatches, record) = run_entry(&e);
            match format {
                Format::Record => println!("{record}"),
                Format::Text => {
                    if let Ok(a) = analyze(&e.presentation(), None) {
                        print!("{}", report::check_text(&e.presentation(), &a));
                    }
                    for m in &mismatches {
                        println!("MISMATCH {m}");
                    }
                    println!("expectations {}", if ok { "met" } else { "NOT met" });
                }
            }
            Ok(if ok { PASS } else { VIOLATION })
        }
        CatalogAction::RunAll => {
            let mut all = true;
            for e in catalog::catalog() {
                let (ok, mismatches, record) = run_entry(&e);
                all &= ok;
                match format {
                    Format::Record => println!("{record}"),
                    Format::Text => {
                        let status = record["status"].as_str().unwrap_or("?").to_string();
                        println!(
                            "{:<15} {:<14} e={:<3} {:<26} {}",
                            e.id,
                            status,
                            record["e"],
                            record["lupton_status"].as_str().unwrap_or("-"),
                            if ok {
                                "ok".to_string()
                            } else {
                                mismatches.join("; ")
                            }
                        );
                    }
                }
            }
            Ok(if all { PASS } else { VIOLATION })
        }
    }
}

fn cmd_sweep(spec: SweepSpec, out: &Path, format: Format) -> Result<u8, u8> {
    let r = run_sweep(&spec).map_err(|e| {
        eprintln!("error: {e}");
        USAGE
    })?;
    for f in &r.findings {
        write_reproducer(out, &f.id, &f.reproducer);
    }
    match format {
        Format::Record => {
            let mut v = serde_json::to_value(&r).expect("sweep report serializes");
            v["version"] = json!(report::RECORD_VERSION);
            v["kind"] = json!("sweep");
            println!("{v}");
        }
        Format::Text => {
            println!("raw candidates  {}", r.raw_candidates);
            println!("distinct        {}", r.distinct);
            println!("analyzed        {}", r.analyzed);
            println!("certified       {}", r.certified);
            println!("not certified   {}", r.uncertified);
            println!("findings        {}", r.findings.len());
            for f in &r.findings {
                println!("  {}: {}", f.id, f.error.as_deref().unwrap_or("VIOLATED"));
            }
        }
    }
    Ok(if r.clean() { PASS } else { VIOLATION })
}

fn run(cli: Cli) -> Result<u8, u8> {
    match cli.command {
        Command::Validate { file, format } => cmd_validate(&file, format),
        Command::Check {
            file,
            max_degree,
            format,
            reproducer_dir,
        } => cmd_check(&file, max_degree, format, &reproducer_dir),
        Command::Cohomology {
            file,
            bigraded,
            max_degree,
            format,
        } => cmd_cohomology(&file, bigraded, max_degree, format),
        Command::Gysin {
            file,
            degree,
            length,
            max_degree,
            format,
        } => cmd_gysin(&file, degree.zip(length), max_degree, format),
        Command::Toomer { file, format } => cmd_toomer(&file, format),
        Command::Catalog { action, format } => cmd_catalog(&action, format),
        Command::Sweep {
            max_even,
            max_odd,
            max_degree,
            coformal,
            seed,
            sample,
            coefficient_bound,
            out,
            format,
        } => {
            let spec = SweepSpec {
                seed,
                sample,
                coefficient_bound,
                ..SweepSpec::new(max_even, max_odd, max_degree, coformal)
            };
            cmd_sweep(spec, &out, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { PASS });
        }
    };
    ExitCode::from(run(cli).unwrap_or_else(|code| code))
}
