//! Command-line front end: Maslov indices, spectra, transversality reports,
//! winding numbers, the two-point index relation, verification suites, and
//! eigenangle-flow CSV export.
//!
//! Exit codes: 0 success, 1 input error (unreadable/malformed documents,
//! violated invariants, failed verification), 2 uncertified result in
//! `--certified` mode, 3 internal numerical failure.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use maslov::calculus::check_formula_e;
use maslov::io;
use maslov::path::{eigen_flow, maslov_index, winding_number_det, IndexReport, TripotentPath};
use maslov::spectral::relative_spectrum;
use maslov::verify;
use maslov::{Error, Params, Result, SymUnitary};

#[derive(Parser)]
#[command(
    name = "maslov",
    version,
    about = "Maslov indices of paths of symmetric unitary matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Maslov index of a path document relative to a base unit.
    Index {
        /// Path document (JSON).
        path_file: PathBuf,
        /// Base unit document; defaults to the document's base, then to I.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Exit with code 2 unless every segment is certified.
        #[arg(long)]
        certified: bool,
        #[arg(long, default_value_t = maslov::MAX_REFINE)]
        max_refine: usize,
        #[arg(long, default_value_t = maslov::TOL_CLUSTER)]
        tol_cluster: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Clustered relative spectrum of a unit.
    Spectrum {
        /// Unit document (JSON).
        point_file: PathBuf,
        /// Base unit document; defaults to I.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = maslov::TOL_CLUSTER)]
        tol_cluster: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Transversality report for a pair of units.
    Pair {
        x_file: PathBuf,
        y_file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Winding number of the relative determinant along a closed path.
    Winding {
        /// Path document (JSON); must be a loop.
        loop_file: PathBuf,
        /// Base unit document; defaults to the document's base, then to I.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = maslov::MAX_REFINE)]
        max_refine: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the two-point index relation on a configuration document.
    FormulaE {
        config_file: PathBuf,
        #[arg(long, default_value_t = maslov::MAX_REFINE)]
        max_refine: usize,
        #[arg(long, default_value_t = maslov::TOL_CLUSTER)]
        tol_cluster: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run seeded verification suites (all of them when none are named).
    Verify {
        /// Suite names; see `verify --list`.
        suites: Vec<String>,
        /// List available suites and exit.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Randomized cases per suite.
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Continuously tracked eigenangle flow along a path, as CSV.
    Flow {
        /// Path document (JSON).
        path_file: PathBuf,
        /// Base unit document; defaults to the document's base, then to I.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Number of equally spaced output rows.
        #[arg(long, default_value_t = 33)]
        samples: usize,
        #[arg(long, default_value_t = maslov::MAX_REFINE)]
        max_refine: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // clap's own usage errors exit with its default code 2, which this tool
    // reserves for uncertified-in-certified-mode; remap them to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_structural() { 1 } else { 3 })
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))
}

/// Resolve the base unit: explicit `--base` file, then the path document's
/// own base, then the identity.
fn resolve_base(
    path: &TripotentPath,
    base_file: Option<&PathBuf>,
) -> Result<SymUnitary> {
    if let Some(file) = base_file {
        return io::parse_unit(&read_file(file)?);
    }
    if let Some(e) = path.base_hint() {
        return Ok(e.clone());
    }
    Ok(SymUnitary::identity(path.n()))
}

fn params_with(tol_cluster: f64, max_refine: usize, certified: bool) -> Params {
    Params {
        tol_cluster,
        max_refine,
        certified,
        ..Params::default()
    }
}

fn print_index_text(report: &IndexReport) {
    println!("index: {}", report.value);
    println!("{:>10} {:>10} {:>12} {:>8} {:>8}", "t_start", "t_end", "eps", "k_start", "k_end");
    for seg in &report.segments {
        println!(
            "{:>10.6} {:>10.6} {:>12.9} {:>8} {:>8}",
            seg.t_start, seg.t_end, seg.eps, seg.k_start, seg.k_end
        );
    }
    println!(
        "certified: {} (refinements: {})",
        if report.certified { "yes" } else { "no" },
        report.refinements
    );
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Index {
            path_file,
            base,
            certified,
            max_refine,
            tol_cluster,
            format,
        } => {
            let path = io::parse_path(&read_file(&path_file)?)?;
            let e = resolve_base(&path, base.as_ref())?;
            let params = params_with(tol_cluster, max_refine, certified);
            let report = maslov_index(&path, &e, &params)?;
            match format {
                Format::Text => print_index_text(&report),
                Format::Json => println!("{}", io::to_json_string(&report)),
            }
            if certified && !report.certified {
                eprintln!("error: result is not certified at this sampling density");
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum {
            point_file,
            base,
            tol_cluster,
            format,
        } => {
            let x = io::parse_unit(&read_file(&point_file)?)?;
            let e = match &base {
                Some(file) => io::parse_unit(&read_file(file)?)?,
                None => SymUnitary::identity(x.n()),
            };
            let params = params_with(tol_cluster, maslov::MAX_REFINE, false);
            let spectrum = relative_spectrum(&x, &e, &params)?;
            match format {
                Format::Text => {
                    println!("relative spectrum (n = {}):", spectrum.n);
                    println!("{:>16} {:>14}", "angle", "multiplicity");
                    for c in &spectrum.clusters {
                        println!("{:>16.9} {:>14}", c.angle, c.multiplicity);
                    }
                    println!("mu(0) = {}", spectrum.mu_at(0.0, params.tol_cluster));
                }
                Format::Json => println!("{}", io::to_json_string(&spectrum)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Pair {
            x_file,
            y_file,
            format,
        } => {
            let x = io::parse_unit(&read_file(&x_file)?)?;
            let y = io::parse_unit(&read_file(&y_file)?)?;
            let report = maslov::bridge::pair_report(&x, &y)?;
            match format {
                Format::Text => {
                    println!("dim intersection: {}", report.dim_intersection);
                    println!("transverse: {}", if report.transverse { "yes" } else { "no" });
                    println!("fredholm: {}", if report.fredholm { "yes" } else { "no" });
                }
                Format::Json => println!("{}", io::to_json_string(&report)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Winding {
            loop_file,
            base,
            max_refine,
            format,
        } => {
            let path = io::parse_path(&read_file(&loop_file)?)?;
            let e = resolve_base(&path, base.as_ref())?;
            let params = params_with(maslov::TOL_CLUSTER, max_refine, false);
            let w = winding_number_det(&path, &e, &params)?;
            match format {
                Format::Text => println!("{w}"),
                Format::Json => println!("{}", io::to_json_string(&serde_json::json!({ "winding": w }))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::FormulaE {
            config_file,
            max_refine,
            tol_cluster,
            format,
        } => {
            let (sigma, tau, e) = io::parse_formula_e(&read_file(&config_file)?)?;
            let params = params_with(tol_cluster, max_refine, false);
            let report = check_formula_e(&sigma, &tau, &e, &params)?;
            match format {
                Format::Text => {
                    println!("lhs (Maslov index): {}", report.lhs);
                    println!("m:                  {}", report.m);
                    println!("iota:               {}", report.iota);
                    println!("mu(tau, e):         {}", report.mu_tau);
                    println!("mu(sigma, e):       {}", report.mu_sigma);
                    println!("rhs (doubled):      {}", report.rhs_times_two);
                    println!("equal: {}", if report.equal { "yes" } else { "no" });
                }
                Format::Json => println!("{}", io::to_json_string(&report)),
            }
            Ok(if report.equal { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify {
            suites,
            list,
            seed,
            cases,
            format,
        } => {
            if list {
                for name in verify::SUITES {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let params = Params::default();
            let names: Vec<String> = if suites.is_empty() {
                verify::SUITES.iter().map(|s| s.to_string()).collect()
            } else {
                suites
            };
            let mut outcomes = Vec::new();
            for name in &names {
                outcomes.push(verify::run_suite(name, seed, cases, &params)?);
            }
            let all_ok = outcomes.iter().all(verify::SuiteOutcome::ok);
            match format {
                Format::Text => {
                    for o in &outcomes {
                        if o.ok() {
                            println!("suite {}: {} cases, ok", o.name, o.cases);
                        } else {
                            println!("suite {}: {} cases, {} FAILED", o.name, o.cases, o.failures.len());
                            for f in &o.failures {
                                println!("  {f}");
                            }
                        }
                    }
                }
                Format::Json => println!("{}", io::to_json_string(&outcomes)),
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Flow {
            path_file,
            base,
            samples,
            max_refine,
            out,
        } => {
            let path = io::parse_path(&read_file(&path_file)?)?;
            let e = resolve_base(&path, base.as_ref())?;
            let params = params_with(maslov::TOL_CLUSTER, max_refine, false);
            let table = eigen_flow(&path, &e, samples, &params)?;
            let mut csv = String::new();
            csv.push('t');
            for j in 1..=path.n() {
                csv.push_str(&format!(",theta_{j}"));
            }
            csv.push('\n');
            for (t, row) in table.ts.iter().zip(&table.angles) {
                csv.push_str(&format!("{t:.12}"));
                for a in row {
                    csv.push_str(&format!(",{a:.12}"));
                }
                csv.push('\n');
            }
            match &out {
                Some(file) => std::fs::write(file, csv).map_err(|e| {
                    Error::Document(format!("cannot write {}: {e}", file.display()))
                })?,
                None => {
                    std::io::stdout()
                        .write_all(csv.as_bytes())
                        .map_err(|e| Error::Document(format!("cannot write stdout: {e}")))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
