use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use braidcheck::report::{DEFAULT_SEED, DEFAULT_STARTS};
use braidcheck::{catalog, load_model, run_report, Error, Model, RunOptions, Stage, Tolerance};
use clap::{Parser, Subcommand};

const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "braidcheck", version, about = "Verify F/R-symbol data of braided fusion categories")]
struct Cli {
    /// Equality tolerance for residuals and verdicts.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Search {
    /// Number of solver starts for non-pointed rings.
    #[arg(long, default_value_t = DEFAULT_STARTS)]
    starts: usize,
    /// Seed of the start generator.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check ring axioms, pentagon, F-unitarity and the file's own hexagons.
    Validate { file: String },
    /// Enumerate all braidings of the model's F-symbols.
    Braid {
        file: String,
        #[command(flatten)]
        search: Search,
    },
    /// Enumerate ribbon structures of each braiding and select the unitary one.
    Ribbons {
        file: String,
        #[command(flatten)]
        search: Search,
    },
    /// Run the full pipeline.
    Report {
        file: String,
        #[command(flatten)]
        search: Search,
        /// Write the JSON report here ("-" for stdout).
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Embedded model catalog.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List the embedded model names.
    List,
    /// Print an embedded model file.
    Export { name: String },
}

/// `catalog:<name>` reads from the embedded catalog.
fn open(file: &str) -> Result<Model, Error> {
    match file.strip_prefix("catalog:") {
        Some(name) => catalog::model(name),
        None => load_model(file),
    }
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    let code = match err {
        Error::Io(_) | Error::Parse(_) | Error::UnknownModel(_) => EXIT_IO,
        _ => 1,
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> ExitCode {
    let tol = match cli.tol.map(Tolerance::with_eq_tol) {
        None => Tolerance::default(),
        Some(Ok(t)) => t,
        Some(Err(e)) => return fail(&e),
    };
    let (file, search, stage, json) = match cli.command {
        Command::Catalog { command } => {
            return match command {
                CatalogCommand::List => {
                    for name in catalog::names() {
                        println!("{name}");
                    }
                    ExitCode::SUCCESS
                }
                CatalogCommand::Export { name } => match catalog::get(&name) {
                    Ok(file) => {
                        print!("{}", file.to_json());
                        ExitCode::SUCCESS
                    }
                    Err(e) => fail(&e),
                },
            };
        }
        Command::Validate { file } => (file, None, Stage::Validate, None),
        Command::Braid { file, search } => (file, Some(search), Stage::Braid, None),
        Command::Ribbons { file, search } => (file, Some(search), Stage::Ribbons, None),
        Command::Report { file, search, json } => (file, Some(search), Stage::Full, json),
    };
    let model = match open(&file) {
        Ok(m) => m,
        Err(e) => return fail(&e),
    };
    let search = search.unwrap_or(Search {
        starts: DEFAULT_STARTS,
        seed: DEFAULT_SEED,
    });
    let opts = RunOptions {
        starts: search.starts,
        seed: search.seed,
        tol,
        stage,
    };
    let report = run_report(&model, &opts);
    for e in &report.errors {
        eprintln!("{}: {}", e.stage, e.message);
    }
    match json {
        Some(path) if path.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(path) => {
            if let Err(e) = fs::write(&path, report.to_json()) {
                return fail(&e.into());
            }
        }
        None => print!("{}", report.to_text()),
    }
    let _ = std::io::stdout().flush();
    ExitCode::from(report.exit_code as u8)
}

fn main() -> ExitCode {
    run(Cli::parse())
}
