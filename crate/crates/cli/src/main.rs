mod commands;
mod demo;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "covproc", version, about = "Programmable processors for group-covariant quantum channels")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Catalog group name.
    #[arg(long, global = true, conflicts_with = "group_file")]
    pub group: Option<String>,
    /// Group-spec JSON file.
    #[arg(long, global = true)]
    pub group_file: Option<PathBuf>,
    /// Input irrep label; defaults to the first irrep of largest dimension.
    #[arg(long, global = true)]
    pub u: Option<String>,
    /// Output irrep label; defaults to the same choice as `--u`.
    #[arg(long, global = true)]
    pub v: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Equality tolerance; also the pass threshold of `verify`.
    #[arg(long, global = true, env = "COVPROC_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Mp,
    Teleport,
    Compressed,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoName {
    A4,
    Pauli,
    Depolarizing,
}

#[derive(Args, Debug, Clone)]
pub struct BuildArgs {
    #[arg(long, value_enum, default_value_t = Kind::Compressed)]
    pub kind: Kind,
    /// JSON array of channel documents used as extreme points for `mp`.
    #[arg(long)]
    pub extremes: Option<PathBuf>,
    /// Use pure program states for `mp`.
    #[arg(long)]
    pub pure_programs: bool,
    /// Replace the program register by its purification.
    #[arg(long)]
    pub purify: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Block structure of the commutant of Ū⊗V.
    Decompose,
    /// Construct a processor and describe it.
    Build {
        #[command(flatten)]
        build: BuildArgs,
        /// Include the processor Choi matrix in the report.
        #[arg(long)]
        dump_choi: bool,
    },
    /// Run a processor against seeded random covariant channels and states.
    Verify {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, default_value_t = 20)]
        channels: usize,
        #[arg(long, default_value_t = 20)]
        states: usize,
    },
    /// Program-dimension bounds for a list of accuracies.
    Bounds {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.25, 0.5])]
        eps: Vec<f64>,
        /// Attach the entropy chain evaluated on the compressed processor.
        #[arg(long)]
        chain: bool,
    },
    /// Scripted end-to-end checks.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
    /// Print the group as a group-spec JSON document.
    ExportGroup,
}

/// Bad input or an unmet precondition; exits with status 2.
pub struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// A rendered report and whether any check inside it failed.
pub struct Emit {
    pub body: String,
    pub check_failed: bool,
}

fn run(cli: Cli) -> Result<Emit, Failure> {
    let g = &cli.global;
    if g.format == Format::Csv && !matches!(cli.command, Command::Bounds { .. }) {
        return Err(Failure("csv output is only available for `bounds`".into()));
    }
    if !(g.tol > 0.0 && g.tol.is_finite()) {
        return Err(Failure(format!("tolerance must be positive, got {}", g.tol)));
    }
    match &cli.command {
        Command::Decompose => commands::decompose(g),
        Command::Build { build, dump_choi } => commands::build(g, build, *dump_choi),
        Command::Verify { build, channels, states } => commands::verify(g, build, *channels, *states),
        Command::Bounds { eps, chain } => commands::bounds(g, eps, *chain),
        Command::Demo { name } => demo::run(*name, g),
        Command::ExportGroup => commands::export_group(g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.global.output.clone();
    match run(cli) {
        Ok(emit) => {
            let mut body = emit.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let written = match &output {
                Some(path) => std::fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if emit.check_failed {
                eprintln!("check failed");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
