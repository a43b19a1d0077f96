use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cyldom", version, about = "Domination bounds for cylinders P_m x C_n")]
pub struct Cli {
    /// Worker threads for matrix products (default: all cores).
    #[arg(long, global = true, env = "CYLDOM_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    /// Output format for tables and reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Suppress progress lines on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count (and optionally list) the correct words of length R.
    Words {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        list: bool,
    },
    /// Build, multiply and exponentiate .tmx matrices.
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Compute L(n) for n up to a horizon and detect the shift recurrence.
    Scan(ScanArgs),
    /// Report every bound for one cylinder as JSON.
    Bound {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// L-table CSV from `scan` (default: built-in depth-10 table).
        #[arg(long)]
        l_table: Option<PathBuf>,
    },
    /// Bound reports for a rectangle of sizes.
    BoundTable {
        #[arg(long, value_parser = parse_range)]
        m_range: RangeInclusive<u32>,
        #[arg(long, value_parser = parse_range)]
        n_range: RangeInclusive<u32>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        l_table: Option<PathBuf>,
    },
    /// Exhaustive ground truth on small instances.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Emit the diagonal dominating set of size (m+2)n/5 for n divisible by 5.
    Pattern {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum MatrixCommand {
    /// Write the transfer matrix for words of length R.
    Build {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Raise a matrix to the N-th power by repeated squaring.
    Pow {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Multiply two matrices.
    Mul {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub rows: u32,
    #[arg(long)]
    pub max_n: u32,
    /// Directory for periodic checkpoints of the current power.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint in this directory (and keep checkpointing there).
    #[arg(long)]
    pub resume: Option<PathBuf>,
    /// Powers between checkpoints.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub checkpoint_every: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exact domination number by exhaustive search (m*n <= 24).
    Gamma {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Minimum wasted domination of almost-dominating sets (r*n <= 18).
    Wasted {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        cols: u32,
    },
    /// Cross-check the transfer matrix against exhaustive enumeration.
    Verify {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        cols: u32,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u32 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}
