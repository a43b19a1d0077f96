use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cyldom::bounds::{bound_report, diagonal_pattern_dominating_set, BoundReport};
use cyldom::oracle::{brute_force_gamma, brute_force_wasted_min};
use cyldom::scan::{builtin_depth10_table, scan_l_with, ScanOptions, ScanProgress};
use cyldom::transfer::build_transfer_matrix;
use cyldom::tropical::{read_matrix, tropical_matmul, tropical_pow, write_matrix, KernelConfig};
use cyldom::verify::{format_set, verify_properties};
use cyldom::words::{count_correct_words, enumerate_correct_words, MAX_ENUMERATION_ROWS};
use cyldom::{CylinderDims, LTable};
use serde_json::json;

use crate::args::{Cli, Command, Format, MatrixCommand, OracleCommand, ScanArgs};

#[derive(Debug)]
pub enum CliError {
    Core(cyldom::Error),
    Io(io::Error),
    /// A check ran to completion and failed.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_io() => 2,
            CliError::Io(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Failed(msg) => f.write_str(msg),
        }
    }
}

impl From<cyldom::Error> for CliError {
    fn from(e: cyldom::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub threads: usize,
    pub checkpoint_every: u32,
    pub format: Format,
    pub quiet: bool,
}

pub fn dispatch(cli: Cli) -> Result<()> {
    let threads =
        cli.threads.map(|t| t as usize).unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    // Fails only if a pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    let checkpoint_every = match &cli.command {
        Command::Scan(s) => s.checkpoint_every,
        _ => 10,
    };
    let cfg = RunConfig { threads, checkpoint_every, format: cli.format, quiet: cli.quiet };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    run(cli.command, &cfg, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(command: Command, cfg: &RunConfig, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Words { rows, list } => words(rows, list, out),
        Command::Matrix(m) => matrix(m, cfg),
        Command::Scan(args) => scan(args, cfg, out),
        Command::Bound { m, n, l_table } => {
            let table = load_table(l_table.as_deref())?;
            let report = bound_report(CylinderDims::new(m, n)?, Some(&table));
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
            Ok(())
        }
        Command::BoundTable { m_range, n_range, out: path, l_table } => {
            let table = load_table(l_table.as_deref())?;
            let mut reports = Vec::new();
            for m in m_range {
                for n in n_range.clone() {
                    reports.push(bound_report(CylinderDims::new(m, n)?, Some(&table)));
                }
            }
            let text = match cfg.format {
                Format::Csv => bound_csv(&reports),
                Format::Json => serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
            };
            fs::write(&path, text)?;
            if !cfg.quiet {
                eprintln!("wrote {} rows to {}", reports.len(), path.display());
            }
            Ok(())
        }
        Command::Oracle(o) => oracle(o, cfg, out),
        Command::Pattern { m, n } => {
            let set = diagonal_pattern_dominating_set(CylinderDims::new(m, n)?)?;
            match cfg.format {
                Format::Json => {
                    let vs: Vec<[usize; 2]> = set.iter().map(|(i, j)| [i, j]).collect();
                    let v = json!({"m": m, "n": n, "size": set.len(), "dominating": true, "vertices": vs});
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
                Format::Csv => {
                    writeln!(out, "row,col")?;
                    for (i, j) in set.iter() {
                        writeln!(out, "{i},{j}")?;
                    }
                }
            }
            if !cfg.quiet {
                eprintln!("{} vertices, verified dominating", set.len());
            }
            Ok(())
        }
    }
}

fn words(rows: u32, list: bool, out: &mut impl Write) -> Result<()> {
    if !(1..=MAX_ENUMERATION_ROWS).contains(&rows) {
        // same range error as the enumeration itself
        enumerate_correct_words(rows)?;
    }
    writeln!(out, "alpha({rows}) = {}", count_correct_words(rows))?;
    if list {
        for w in enumerate_correct_words(rows)?.iter() {
            writeln!(out, "{w}")?;
        }
    }
    Ok(())
}

fn matrix(cmd: MatrixCommand, cfg: &RunConfig) -> Result<()> {
    let (m, path) = match cmd {
        MatrixCommand::Build { rows, out } => (build_transfer_matrix(rows)?, out),
        MatrixCommand::Pow { input, n, out } => {
            let a = read_matrix(&input)?;
            (tropical_pow(&a, n, &KernelConfig::default())?, out)
        }
        MatrixCommand::Mul { a, b, out } => (tropical_matmul(&read_matrix(&a)?, &read_matrix(&b)?)?, out),
    };
    write_matrix(&m, &path)?;
    if !cfg.quiet {
        eprintln!("wrote {}x{} matrix ({} finite entries) to {}", m.dim(), m.dim(), m.finite_count(), path.display());
    }
    Ok(())
}

fn scan(args: ScanArgs, cfg: &RunConfig, out: &mut impl Write) -> Result<()> {
    let quiet = cfg.quiet;
    let mut progress = |p: ScanProgress| {
        if !quiet {
            eprintln!("n={} L={} elapsed={:.1}s", p.n, p.value, p.elapsed.as_secs_f64());
        }
    };
    let resume = args.resume.is_some();
    if !quiet {
        eprintln!("scanning depth {} up to n = {} on {} threads", args.rows, args.max_n, cfg.threads);
    }
    let opts = ScanOptions {
        checkpoint_dir: args.resume.or(args.checkpoint),
        checkpoint_every: cfg.checkpoint_every,
        resume,
        progress: Some(&mut progress),
        ..ScanOptions::default()
    };
    let table = scan_l_with(args.rows, args.max_n, opts)?;
    table.write_csv(&args.out)?;
    match table.recurrence {
        Some(r) => writeln!(out, "rows={} recurrence n0={} shift={}", table.rows, r.n0, r.shift)?,
        None => writeln!(out, "rows={} recurrence none up to n={}", table.rows, table.horizon())?,
    }
    Ok(())
}

fn oracle(cmd: OracleCommand, cfg: &RunConfig, out: &mut impl Write) -> Result<()> {
    match cmd {
        OracleCommand::Gamma { m, n } => {
            let g = brute_force_gamma(CylinderDims::new(m, n)?)?;
            match cfg.format {
                Format::Json => writeln!(out, "{}", json!({"m": m, "n": n, "gamma": g}))?,
                Format::Csv => writeln!(out, "gamma(P_{m} x C_{n}) = {g}")?,
            }
        }
        OracleCommand::Wasted { rows, cols } => {
            let w = brute_force_wasted_min(rows, cols)?;
            match cfg.format {
                Format::Json => {
                    let vs: Vec<[usize; 2]> = w.set.iter().map(|(i, j)| [i, j]).collect();
                    let v = json!({
                        "rows": rows, "cols": cols, "wasted": w.wasted,
                        "closed_neighborhood_size": w.closed_neighborhood_size, "witness": vs,
                    });
                    writeln!(out, "{v}")?;
                }
                Format::Csv => writeln!(
                    out,
                    "min wasted(P_{rows} x C_{cols}) = {} witness {} |N[R]| = {}",
                    w.wasted,
                    format_set(&w.set),
                    w.closed_neighborhood_size
                )?,
            }
        }
        OracleCommand::Verify { rows, cols } => {
            let checks = verify_properties(rows, cols)?;
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {}: {}", c.name, c.detail)?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Failed(format!("{failed} of {} properties failed", checks.len())));
            }
        }
    }
    Ok(())
}

fn load_table(path: Option<&Path>) -> Result<LTable> {
    Ok(match path {
        Some(p) => LTable::read_csv(p)?,
        None => builtin_depth10_table(),
    })
}

fn opt(v: Option<u32>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn bound_csv(reports: &[BoundReport]) -> String {
    let mut s = String::from("m,n,residue,k,lower_new,lower_grid,upper_construction,upper_grid,known_gamma,flags\n");
    for r in reports {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.m,
            r.n,
            r.residue,
            r.k,
            opt(r.lower_new),
            opt(r.lower_grid),
            opt(r.upper_construction),
            opt(r.upper_grid),
            opt(r.known_gamma),
            r.flags.join(";")
        ));
    }
    s
}
