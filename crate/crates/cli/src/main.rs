use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cyclidx::{Error, Tolerance};

mod commands;

use commands::ReportDocument;

#[derive(Parser, Debug)]
#[command(
    name = "cyclidx",
    version,
    about = "Comparative indices, cyclic sums and focal points"
)]
struct Cli {
    /// Relative singular-value threshold for ranks.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_rank: f64,

    /// Multiplier of machine epsilon for zero eigenvalues.
    #[arg(long, global = true, default_value_t = 100.0)]
    tol_eig_kappa: f64,

    /// Seed for auxiliary random matrices and the harness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SumKind {
    First,
    Second,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every frame and system matrix in a document.
    Validate { path: PathBuf },
    /// Comparative index of frames `i` and `j` (0-based).
    Compindex {
        path: PathBuf,
        i: usize,
        j: usize,
        /// Headline the dual index.
        #[arg(long)]
        dual: bool,
    },
    /// Cyclic sums of the frame chain.
    Cyclic {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = SumKind::First)]
        kind: SumKind,
    },
    /// Kashiwara index of the frame chain.
    Kashiwara { path: PathBuf },
    /// Focal points of the symplectic system.
    Focal {
        path: PathBuf,
        /// Tally the principal solution at this index instead of 0.
        #[arg(long)]
        principal_at: Option<usize>,
        /// Headline backward focal points.
        #[arg(long)]
        backward: bool,
    },
    /// Randomized identity battery.
    Verify {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..))]
        m_max: u64,
    },
}

fn read(path: &PathBuf) -> cyclidx::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli, echo: String) -> cyclidx::Result<ReportDocument> {
    let tol = Tolerance::new(cli.tol_rank, cli.tol_eig_kappa)?;
    let mut doc = match &cli.command {
        Command::Validate { path } => commands::validate(&read(path)?, &tol)?,
        Command::Compindex { path, i, j, dual } => {
            commands::compindex(&read(path)?, *i, *j, *dual, &tol)?
        }
        Command::Cyclic { path, kind } => commands::cyclic(&read(path)?, *kind, cli.seed, &tol)?,
        Command::Kashiwara { path } => commands::kashiwara(&read(path)?, cli.seed, &tol)?,
        Command::Focal {
            path,
            principal_at,
            backward,
        } => commands::focal(&read(path)?, *principal_at, *backward, cli.seed, &tol)?,
        Command::Verify {
            trials,
            n_max,
            m_max,
        } => commands::verify(
            *trials as usize,
            *n_max as usize,
            *m_max as usize,
            cli.seed,
            &tol,
        ),
    };
    doc.command = echo;
    Ok(doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(&cli, echo) {
        Ok(doc) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
            } else {
                doc.to_string()
            };
            let _ = std::io::stdout().write_all(text.as_bytes());
            if doc.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
