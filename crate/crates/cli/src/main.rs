//! `corad`: load a model definition, run a verification suite, print the
//! report. Exit status 0 when every check passes, 1 when a property is
//! violated (the report carries the witness), 2 on input, parse, or cap
//! errors (including command-line usage errors).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coalgebra_engine::TensorCap;
use corad::commands::{
    cmd_abelian_check, cmd_cogen, cmd_coradical, cmd_fano_check, cmd_incidence, cmd_strict,
    cmd_suite, cmd_validate, Options,
};
use corad::report::ReportFormat;
use corad::CliError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser)]
#[command(name = "corad", version, about = "verification suites for zero-cycle coalgebra models")]
struct Cli {
    /// Filtration depth for coradical computations (default: the top grade)
    #[arg(long, global = true)]
    kmax: Option<usize>,
    /// Largest admitted logical matrix size for tensor operations
    #[arg(long, global = true)]
    tensor_cap: Option<usize>,
    /// Report rendering
    #[arg(long, global = true, value_enum, default_value = "text")]
    report: Option<Format>,
    /// Append wall-clock timings to the report (non-deterministic; off by
    /// default so identical inputs produce byte-identical reports)
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coalgebra axioms and the unital grading
    Validate { path: PathBuf },
    /// Coradical filtration and its comparison with the grading
    Coradical { path: PathBuf },
    /// Strictness: reduced comultiplication injective on every grade block
    Strict { path: PathBuf },
    /// Cogeneration map through grade-1 towers
    Cogen {
        path: PathBuf,
        /// Tower length bound (default: the top grade)
        n: Option<usize>,
    },
    /// Intersection-table replay and eigenprojectors (fano models)
    FanoCheck { path: PathBuf },
    /// Divided powers, projectors, and vanishing (abelian models)
    AbelianCheck { path: PathBuf },
    /// Fiber conditions, transport maps, and composition (incidence models)
    Incidence { path: PathBuf },
    /// Everything applicable to the model kind
    Suite { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        kmax: cli.kmax,
        tensor_cap: cli.tensor_cap.map(TensorCap).unwrap_or_default(),
    };
    let format = match cli.report.unwrap_or(Format::Text) {
        Format::Text => ReportFormat::Text,
        Format::Structured => ReportFormat::Structured,
    };
    let result = match &cli.command {
        Command::Validate { path } => cmd_validate(path, &opts),
        Command::Coradical { path } => cmd_coradical(path, cli.kmax, &opts),
        Command::Strict { path } => cmd_strict(path, &opts),
        Command::Cogen { path, n } => cmd_cogen(path, *n, &opts),
        Command::FanoCheck { path } => cmd_fano_check(path, &opts),
        Command::AbelianCheck { path } => cmd_abelian_check(path, &opts),
        Command::Incidence { path } => cmd_incidence(path, &opts),
        Command::Suite { path } => cmd_suite(path, &opts),
    };
    match result {
        Ok(report) => {
            print!("{}", report.render(format, cli.timings));
            if report.passed() {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ (CliError::Io { .. } | CliError::Parse { .. } | CliError::Input(_) | CliError::Cap(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
