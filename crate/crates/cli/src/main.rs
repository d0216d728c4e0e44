use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bounds;
mod catalog;
mod construct;
mod exact;
mod plane;
mod report;
mod verify;

/// Constructs, validates and optimizes pairwise balanced designs and
/// sigma-minimal clique partitions.
#[derive(Debug, Parser)]
#[command(name = "pbd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write an affine or projective plane of prime-power order.
    Plane(PlaneArgs),
    /// Validate a design or partition file and report the bounds it meets.
    Verify(VerifyArgs),
    /// Print the sigma lower bounds for n points.
    Bounds(BoundsArgs),
    /// Run a named construction and write its certificate.
    Construct(ConstructArgs),
    /// Solve a small instance exactly by branch and bound.
    Exact(ExactArgs),
    /// Maintain a directory of checksummed design files.
    Catalog(CatalogArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlaneKind {
    Affine,
    Projective,
}

#[derive(Debug, Args)]
struct PlaneArgs {
    #[arg(long, value_enum)]
    kind: PlaneKind,
    #[arg(long)]
    order: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReadAs {
    Pbd,
    Partition,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    file: PathBuf,
    /// Interpret the file as this kind of object.
    #[arg(long = "as", value_enum)]
    read_as: Option<ReadAs>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    /// Size of the removed clique; adds the K_n - K_m partition bounds.
    #[arg(long, conflicts_with = "tau")]
    m: Option<usize>,
    /// Largest block size.
    #[arg(long)]
    tau: Option<usize>,
    /// One CSV row per tau in 2..n-1.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    /// Construction name, see `pbd construct --what list`.
    #[arg(long)]
    what: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Scp,
    Cp,
    #[value(name = "S")]
    S,
    #[value(name = "Sprime")]
    Sprime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Knkm,
    Complete,
    CompPath,
    CompCycle,
    Cocktail,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Graph family for scp and cp.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Partition file whose graph is solved, instead of a family.
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Node budget; without it graphs above the cap get a default budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Vertex count above which a budget applies.
    #[arg(long, env = "PBD_SOLVER_CAP")]
    cap: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// For S: largest block of at most m points instead of exactly m.
    #[arg(long)]
    at_most: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CatalogAction {
    List,
    Add,
    Check,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    #[arg(value_enum)]
    action: CatalogAction,
    #[arg(long)]
    dir: PathBuf,
    /// File to add.
    #[arg(long, required_if_eq("action", "add"))]
    file: Option<PathBuf>,
}

/// How a command finished, mapped onto the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Invalid,
    Budget,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Ok => ExitCode::SUCCESS,
            Outcome::Invalid => ExitCode::from(2),
            Outcome::Budget => ExitCode::from(3),
        }
    }
}

fn main() -> ExitCode {
    // die quietly on a closed pipe, like other filters
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Plane(a) => plane::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Bounds(a) => bounds::run(&a),
        Command::Construct(a) => construct::run(&a),
        Command::Exact(a) => exact::run(&a),
        Command::Catalog(a) => catalog::run(&a),
    };
    match result {
        Ok(outcome) => outcome.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
