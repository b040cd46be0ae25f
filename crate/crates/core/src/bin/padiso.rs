use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use padiso::job::{run_job_str, summary, Command, Overrides, EXIT_SCHEMA};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    SolveOde,
    MultEll,
    Isogeny,
    Verify,
    Bench,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::SolveOde => Command::SolveOde,
            Cmd::MultEll => Command::MultEll,
            Cmd::Isogeny => Command::Isogeny,
            Cmd::Verify => Command::Verify,
            Cmd::Bench => Command::Bench,
        }
    }
}

/// Run a JSON job: solve a p-adic differential system, compute the rational
/// representation of an isogeny, verify one, or benchmark.
#[derive(Parser, Debug)]
#[command(name = "padiso", version)]
struct Args {
    /// Command; overrides the config's `command` field.
    #[arg(value_enum)]
    command: Option<Cmd>,
    /// Job description (JSON). Reads standard input when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Series order n.
    #[arg(long)]
    order: Option<usize>,
    /// Working precision M.
    #[arg(long)]
    precision: Option<u32>,
    /// Half-gcd reconstruction (default).
    #[arg(long, conflicts_with = "naive_gcd")]
    fast_gcd: bool,
    /// Plain extended Euclid reconstruction.
    #[arg(long)]
    naive_gcd: bool,
    /// No summary line on standard error.
    #[arg(long, short)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path),
        None => std::io::read_to_string(std::io::stdin()),
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("padiso: cannot read config: {e}");
            return ExitCode::from(EXIT_SCHEMA as u8);
        }
    };
    let overrides = Overrides {
        command: args.command.map(Command::from),
        seed: args.seed,
        order: args.order,
        precision: args.precision,
        fast_gcd: match (args.fast_gcd, args.naive_gcd) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        },
    };
    let (code, report) = run_job_str(&text, &overrides);
    let rendered = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("padiso: cannot write report: {e}");
                return ExitCode::from(4);
            }
        }
        None => print!("{rendered}"),
    }
    if !args.quiet {
        eprintln!("{}", summary(&report));
    }
    ExitCode::from(code as u8)
}
