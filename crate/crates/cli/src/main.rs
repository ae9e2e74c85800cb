//! `hanoi`: command-line workbench for Hanoi groups, their limit spaces and
//! the Hanoi networks.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hanoi",
    version,
    about = "Hanoi groups, limit spaces and Hanoi networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Contraction test, nucleus and Moore diagram of a Hanoi group.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Level-n Schreier graph of a Hanoi group.
    Schreier(SchreierArgs),
    /// Attractor, energy and dimensions of the limit space.
    #[command(subcommand)]
    Fractal(FractalCommand),
    /// HN3, HN4, the state networks H_n and the collapsed networks.
    #[command(subcommand)]
    Net(NetCommand),
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Decide contraction and print a certificate.
    Check(CheckArgs),
    /// Enumerate the nucleus of a contracting group.
    Nucleus(NucleusArgs),
    /// Moore diagram of the nucleus.
    Moore(NucleusArgs),
}

#[derive(Subcommand, Debug)]
pub enum FractalCommand {
    /// Hausdorff and spectral dimensions for a range of k.
    Dims(KRangeArgs),
    /// Renormalization factor and the level-one trace.
    Renorm(KRangeArgs),
    /// Boundary resistance and cell diameters by level.
    Resistance(LevelArgs),
    /// Points of V_m with their addresses.
    Points(LevelArgs),
}

#[derive(Subcommand, Debug)]
pub enum NetCommand {
    /// HN3 on the nodes 1..N.
    Hn3(RangeArgs),
    /// HN4 on the nodes -N..N.
    Hn4(RangeArgs),
    /// State network H_n of the 3-peg game.
    Automaton(DiskArgs),
    /// Collapsed network H'_n.
    Minor(DiskArgs),
    /// Check HN3_n against H'_n, the minor realization and the distortion.
    Verify(DiskArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Dot,
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct GroupSource {
    /// Family name such as `Hanoi(4)`, `Hc(5)`, `S(4,2)`, `Runder(5,2)`,
    /// or inline recursions such as `a = (0 1)(1, 1, a); b = (1 2)(b, 1, 1)`.
    #[arg(long)]
    pub group: Option<String>,
    /// Group file (JSON) or a file of recursions.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this path instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: GroupSource,
    /// Longest product searched for a non-contraction witness.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Exit with status 3 when the group is not contracting.
    #[arg(long)]
    pub require_contracting: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct NucleusArgs {
    #[command(flatten)]
    pub source: GroupSource,
    /// Largest number of elements enumerated.
    #[arg(long, default_value_t = hanoi_core::contraction::DEFAULT_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SchreierArgs {
    #[command(flatten)]
    pub source: GroupSource,
    /// Level of the tree.
    #[arg(long)]
    pub n: usize,
    /// Largest number of vertices.
    #[arg(long, default_value_t = hanoi_core::schreier::DEFAULT_VERTEX_BOUND)]
    pub cap: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct KRangeArgs {
    /// A value such as `4` or a range such as `3..6` (inclusive).
    #[arg(long, default_value = "3..6")]
    pub k: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct LevelArgs {
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Largest number of cells.
    #[arg(long, default_value_t = hanoi_core::fractal::geometry::DEFAULT_CELL_BOUND)]
    pub cap: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct RangeArgs {
    /// Number of nodes (per side for HN4).
    #[arg(long = "N")]
    pub nodes: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct DiskArgs {
    /// Number of disks or level.
    #[arg(long)]
    pub n: usize,
    /// Emit planar coordinates instead of edges.
    #[arg(long)]
    pub coords: bool,
    #[command(flatten)]
    pub output: Output,
}

/// Failure with its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Computation(String),
    NotContracting(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Computation(_) => 2,
            Failure::NotContracting(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Computation(m) | Failure::NotContracting(m) => m,
        }
    }
}

impl From<hanoi_core::Error> for Failure {
    fn from(e: hanoi_core::Error) -> Self {
        Failure::Computation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hanoi: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
