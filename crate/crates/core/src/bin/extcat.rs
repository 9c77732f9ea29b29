use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use extcat::cliio::{parse, run, Command, Report, RunOptions, SpecError};

/// Worker threads for the parallel engines; defaults to the number of CPUs.
const WORKERS_VAR: &str = "EXTCAT_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "extcat", version, about = "Extension category algebras and their cohomology")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Largest base degree p.
    #[arg(long, global = true)]
    cap_p: Option<usize>,
    /// Largest fiber degree q.
    #[arg(long, global = true)]
    cap_q: Option<usize>,
    /// Largest total degree n.
    #[arg(long, global = true)]
    cap_n: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cohomology engine: resolution, nerve, nerve-normalized, group-bar or all.
    #[arg(long, global = true)]
    engine: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Check every structure in the problem file.
    Validate { file: PathBuf },
    /// Print structure constants of the skew or extension category algebra.
    BuildAlgebra { file: PathBuf },
    /// Degenerations of the extension algebra and the comparison map from Gr(A, M).
    CheckTheoremA { file: PathBuf },
    /// Check that N -> Gr(A, N) -> Gr(A) is an extension of categories.
    CheckExtension { file: PathBuf },
    /// Cohomology of the category with coefficients in a module.
    Cohomology { file: PathBuf },
    /// Ext between two modules over the category.
    Ext { file: PathBuf },
    /// E2 page against the abutment, degree by degree.
    LhsReport { file: PathBuf },
}

impl Sub {
    fn split(&self) -> (Command, &PathBuf) {
        match self {
            Sub::Validate { file } => (Command::Validate, file),
            Sub::BuildAlgebra { file } => (Command::BuildAlgebra, file),
            Sub::CheckTheoremA { file } => (Command::CheckTheoremA, file),
            Sub::CheckExtension { file } => (Command::CheckExtension, file),
            Sub::Cohomology { file } => (Command::Cohomology, file),
            Sub::Ext { file } => (Command::Ext, file),
            Sub::LhsReport { file } => (Command::LhsReport, file),
        }
    }
}

fn configure_workers() -> Result<(), String> {
    let Ok(value) = std::env::var(WORKERS_VAR) else { return Ok(()) };
    let n: usize = value.trim().parse().map_err(|_| format!("{WORKERS_VAR}={value:?} is not a worker count"))?;
    if n == 0 {
        return Err(format!("{WORKERS_VAR} must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Table => print!("{}", report.render_table()),
        Format::Structured => println!("{}", report.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, file) = cli.command.split();
    let input_error = |msgs: Vec<String>| {
        let report = Report::input_error(command.name(), "unknown".into(), msgs);
        emit(&report, cli.format);
        ExitCode::from(report.status.code() as u8)
    };
    if let Err(e) = configure_workers() {
        return input_error(vec![e]);
    }
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return input_error(vec![format!("{}: {e}", file.display())]),
    };
    let spec = match parse(&text) {
        Ok(s) => s,
        Err(SpecError::Schema(issues)) => return input_error(issues.iter().map(|i| format!("{}: {i}", file.display())).collect()),
        Err(e) => return input_error(vec![format!("{}: {e}", file.display())]),
    };
    let opts = RunOptions { cap_p: cli.cap_p, cap_q: cli.cap_q, cap_n: cli.cap_n, engine: cli.engine.clone(), seed: cli.seed };
    let report = run(&spec, Some(command), &opts);
    emit(&report, cli.format);
    ExitCode::from(report.status.code() as u8)
}
