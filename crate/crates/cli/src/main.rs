mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "richgrid", version, about = "Rich lines on Cartesian grids, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads. Reports do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a ground set.
    GenSet(GenSetArgs),
    /// Enumerate all k-rich lines of A × A.
    Enumerate(EnumerateArgs),
    /// Parallel classes, concurrency points and general position.
    Analyze(LinesArgs),
    /// Rich pairs, the dyadic product and its iterates.
    Star(StarArgs),
    /// Commutator graph and its components.
    Commutator(CommutatorArgs),
    /// Split a line set into parallel and star families.
    Decompose(LinesArgs),
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SetKind {
    Ap,
    Gp,
    Random,
    File,
}

#[derive(Args, Debug)]
struct GenSetArgs {
    #[arg(long, value_enum)]
    kind: SetKind,
    #[arg(long)]
    n: Option<usize>,
    /// First term of a progression.
    #[arg(long, default_value = "1")]
    a0: String,
    /// Common difference of an arithmetic progression.
    #[arg(long, default_value = "1")]
    d: String,
    /// Common ratio of a geometric progression.
    #[arg(long, default_value = "2")]
    ratio: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest absolute numerator for random sets.
    #[arg(long, default_value_t = 100)]
    num_bound: i64,
    /// Largest denominator for random sets.
    #[arg(long, default_value_t = 10)]
    den_bound: i64,
    /// Source file for `--kind file`: set JSON, or numbers separated by
    /// whitespace or commas.
    #[arg(long)]
    set: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Debug)]
struct LinesArgs {
    #[arg(long)]
    lines: PathBuf,
}

#[derive(Args, Debug)]
struct StarArgs {
    #[arg(long)]
    lines: PathBuf,
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Enables the growth stop rule and, with `--epsilon` and
    /// `--star-bound`, the structural diagnostics.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    star_bound: Option<usize>,
}

#[derive(Args, Debug)]
struct CommutatorArgs {
    #[arg(long)]
    lines: PathBuf,
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    delta: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return output::fail(&commands::Failure::Usage(e.render().to_string()));
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => output::fail(&f),
    }
}
