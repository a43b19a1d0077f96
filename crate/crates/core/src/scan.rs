//! Minimum wasted domination `L(n)` of depth-`r` border strips.
//!
//! `L(n)` is the smallest diagonal entry of `A^n`, where `A` is the transfer
//! matrix of correct words of length `r`. Powers are computed one at a time
//! until two consecutive powers differ by a constant shift, `A^{n0+1} =
//! c ⊗ A^{n0}`. From then on `A^{n+1} = c ⊗ A^n` for every `n >= n0`, so the
//! rest of the table is extended in closed form.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transfer::build_transfer_matrix;
use crate::tropical::{
    matrix_equal_shifted, min_diagonal, read_matrix, tropical_matmul_with, write_matrix, KernelConfig, MatrixMeta,
    TropicalMatrix,
};

/// Smallest cycle length.
pub const N_MIN: u32 = 3;
/// Extra consecutive shifted powers required after the first hit.
pub const CONFIRMATION_WINDOW: u32 = 2;
/// For depth 10, values below this cycle length follow no closed form.
pub const IRREGULAR_BELOW_R10: u32 = 30;

const CHECKPOINT_MATRIX: &str = "power.tmx";
const CHECKPOINT_STATE: &str = "scan_state.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recurrence {
    pub n0: u32,
    pub shift: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Computed,
    Extended,
}

impl Source {
    fn as_str(self) -> &'static str {
        match self {
            Source::Computed => "computed",
            Source::Extended => "extended",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LEntry {
    pub n: u32,
    pub value: u32,
    pub source: Source,
}

/// `L(n)` for a contiguous range of `n` starting at [`N_MIN`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LTable {
    pub rows: u32,
    pub entries: Vec<LEntry>,
    pub recurrence: Option<Recurrence>,
}

impl LTable {
    pub fn value(&self, n: u32) -> Option<u32> {
        let first = self.entries.first()?.n;
        let e = self.entries.get(n.checked_sub(first)? as usize)?;
        debug_assert_eq!(e.n, n);
        Some(e.value)
    }

    pub fn n_range(&self) -> Option<(u32, u32)> {
        Some((self.entries.first()?.n, self.entries.last()?.n))
    }

    pub fn horizon(&self) -> u32 {
        self.entries.last().map_or(0, |e| e.n)
    }

    pub fn is_irregular(&self, n: u32) -> bool {
        self.rows == 10 && n < IRREGULAR_BELOW_R10
    }

    /// Checks that values are consistent with the recorded recurrence.
    pub fn check_recurrence(&self) -> bool {
        let Some(rec) = self.recurrence else {
            return true;
        };
        let Some(base) = self.value(rec.n0) else {
            return true;
        };
        self.entries
            .iter()
            .filter(|e| e.n >= rec.n0)
            .all(|e| e.value as u64 == base as u64 + rec.shift as u64 * (e.n - rec.n0) as u64)
    }

    /// Writes the table as CSV with the recurrence in a leading comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.recurrence {
            Some(r) => writeln!(out, "# rows={} recurrence n0={} shift={}", self.rows, r.n0, r.shift),
            None => writeln!(out, "# rows={} recurrence none", self.rows),
        }
        .unwrap();
        if self.rows == 10 {
            writeln!(out, "# n<{IRREGULAR_BELOW_R10}: irregular").unwrap();
        }
        out.push_str("n,L,source\n");
        for e in &self.entries {
            writeln!(out, "{},{},{}", e.n, e.value, e.source.as_str()).unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let file = fs::File::open(path)?;
        Self::parse_csv(io::BufReader::new(file))
    }

    pub fn parse_csv(reader: impl BufRead) -> Result<Self> {
        let bad = |msg: String| Error::Format(format!("L-table: {msg}"));
        let mut rows = None;
        let mut recurrence = None;
        let mut entries = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line == "n,L,source" {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let mut n0 = None;
                let mut shift = None;
                for tok in comment.split_whitespace() {
                    let parse = |v: &str| v.parse::<u32>().map_err(|_| bad(format!("bad header token {tok}")));
                    if let Some(v) = tok.strip_prefix("rows=") {
                        rows = Some(parse(v)?);
                    } else if let Some(v) = tok.strip_prefix("n0=") {
                        n0 = Some(parse(v)?);
                    } else if let Some(v) = tok.strip_prefix("shift=") {
                        shift = Some(parse(v)?);
                    }
                }
                if let (Some(n0), Some(shift)) = (n0, shift) {
                    recurrence = Some(Recurrence { n0, shift });
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let [n, value, source] = fields[..] else {
                return Err(bad(format!("expected 3 fields in {line:?}")));
            };
            let num = |v: &str| v.trim().parse::<u32>().map_err(|_| bad(format!("bad number {v:?}")));
            let source = match source.trim() {
                "computed" => Source::Computed,
                "extended" => Source::Extended,
                s => return Err(bad(format!("unknown source {s:?}"))),
            };
            let n = num(n)?;
            if let Some(prev) = entries.last().map(|e: &LEntry| e.n) {
                if n != prev + 1 {
                    return Err(bad(format!("n = {n} does not follow {prev}")));
                }
            }
            entries.push(LEntry { n, value: num(value)?, source });
        }
        let rows = rows.ok_or_else(|| bad("missing rows header".into()))?;
        Ok(LTable { rows, entries, recurrence })
    }
}

/// Recorded output of `scan_l(10, 125)`.
const DEPTH10_CSV: &str = include_str!("../data/l_table_r10.csv");

/// The depth-10 table up to `n = 125`, as computed by [`scan_l`].
pub fn builtin_depth10_table() -> LTable {
    LTable::parse_csv(DEPTH10_CSV.as_bytes()).expect("built-in table parses")
}

/// One completed power, reported while a scan runs.
#[derive(Clone, Copy, Debug)]
pub struct ScanProgress {
    pub n: u32,
    pub value: u32,
    pub elapsed: Duration,
}

pub struct ScanOptions<'a> {
    pub checkpoint_dir: Option<PathBuf>,
    /// Powers between checkpoints.
    pub checkpoint_every: u32,
    /// Continue from the checkpoint in `checkpoint_dir` if there is one.
    pub resume: bool,
    /// Stop (as if interrupted) once this power has been computed.
    pub stop_after: Option<u32>,
    pub kernel: KernelConfig,
    pub progress: Option<&'a mut dyn FnMut(ScanProgress)>,
}

impl Default for ScanOptions<'_> {
    fn default() -> Self {
        ScanOptions {
            checkpoint_dir: None,
            checkpoint_every: 10,
            resume: false,
            stop_after: None,
            kernel: KernelConfig::default(),
            progress: None,
        }
    }
}

/// Candidate recurrence: `A^{n0+1} = shift ⊗ A^{n0}`, seen `confirmed` more
/// times after the first hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Hit {
    n0: u32,
    shift: u32,
    confirmed: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointState {
    rows: u32,
    power: u32,
    values: Vec<(u32, u32)>,
    hit: Option<Hit>,
}

/// `L(n)` for `n` in `3..=horizon` with a plain scan.
pub fn scan_l(r: u32, horizon: u32) -> Result<LTable> {
    scan_l_with(r, horizon, ScanOptions::default())
}

pub fn scan_l_with(r: u32, horizon: u32, opts: ScanOptions<'_>) -> Result<LTable> {
    if horizon < N_MIN {
        return Err(Error::out_of_range("horizon", horizon, format!("must be >= {N_MIN}")));
    }
    scan_matrix_with(&build_transfer_matrix(r)?, horizon, opts)
}

/// Scans the powers of an arbitrary square matrix. The table's `rows` is
/// taken from the matrix metadata (0 when absent).
pub fn scan_matrix_with(a: &TropicalMatrix, horizon: u32, mut opts: ScanOptions<'_>) -> Result<LTable> {
    if horizon < N_MIN {
        return Err(Error::out_of_range("horizon", horizon, format!("must be >= {N_MIN}")));
    }
    let start = Instant::now();
    let r = a.meta.rows.unwrap_or(0);
    let a = a.clone().with_meta(MatrixMeta { rows: Some(r), power: Some(1) });

    let mut state = match (&opts.checkpoint_dir, opts.resume) {
        (Some(dir), true) if dir.join(CHECKPOINT_STATE).exists() => Some(load_checkpoint(dir, r)?),
        _ => None,
    };
    let (mut power, mut values, mut hit, mut current) = match state.take() {
        Some((s, m)) => (s.power, s.values, s.hit, m),
        None => (1, Vec::new(), None, a.clone()),
    };

    while power < horizon && !hit.is_some_and(|h| h.confirmed >= CONFIRMATION_WINDOW) {
        if opts.stop_after.is_some_and(|s| power >= s) {
            break;
        }
        // A ⊗ A^n = A^n ⊗ A; the sparse factor on the left lets the kernel
        // skip most of the work.
        let next = tropical_matmul_with(&a, &current, &opts.kernel)?;
        let n = power + 1;
        if n >= N_MIN {
            let v = min_diagonal(&next).get().ok_or_else(|| Error::Overflow(format!("L({n}) is infinite")))?;
            values.push((n, v));
            if let Some(cb) = opts.progress.as_mut() {
                cb(ScanProgress { n, value: v, elapsed: start.elapsed() });
            }
        }
        if power >= 2 {
            hit = match (hit, matrix_equal_shifted(&current, &next)) {
                (Some(h), Some(c)) if c == h.shift => Some(Hit { confirmed: h.confirmed + 1, ..h }),
                (_, Some(c)) => Some(Hit { n0: power, shift: c, confirmed: 0 }),
                (_, None) => None,
            };
        }
        current = next;
        power = n;
        if let Some(dir) = &opts.checkpoint_dir {
            if opts.checkpoint_every > 0 && power % opts.checkpoint_every == 0 {
                save_checkpoint(dir, r, power, &values, hit, &current)?;
            }
        }
    }

    let recurrence =
        hit.filter(|h| h.confirmed >= CONFIRMATION_WINDOW).map(|h| Recurrence { n0: h.n0, shift: h.shift });
    let mut entries: Vec<LEntry> =
        values.iter().map(|&(n, value)| LEntry { n, value, source: Source::Computed }).collect();
    if let (Some(rec), Some(&(last_n, last_v))) = (recurrence, values.last()) {
        if opts.stop_after.is_none() {
            for n in last_n + 1..=horizon {
                entries.push(LEntry { n, value: last_v + rec.shift * (n - last_n), source: Source::Extended });
            }
        }
    }
    Ok(LTable { rows: r, entries, recurrence })
}

fn save_checkpoint(
    dir: &Path,
    rows: u32,
    power: u32,
    values: &[(u32, u32)],
    hit: Option<Hit>,
    current: &TropicalMatrix,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{CHECKPOINT_MATRIX}.tmp"));
    write_matrix(current, &tmp)?;
    fs::rename(&tmp, dir.join(CHECKPOINT_MATRIX))?;
    let state = CheckpointState { rows, power, values: values.to_vec(), hit };
    let tmp = dir.join(format!("{CHECKPOINT_STATE}.tmp"));
    fs::write(&tmp, serde_json::to_vec_pretty(&state).expect("state serializes"))?;
    fs::rename(&tmp, dir.join(CHECKPOINT_STATE))?;
    Ok(())
}

fn load_checkpoint(dir: &Path, rows: u32) -> Result<(CheckpointState, TropicalMatrix)> {
    let fail = |reason: String| Error::Resume { dir: dir.to_path_buf(), reason };
    let text = fs::read(dir.join(CHECKPOINT_STATE)).map_err(|e| fail(e.to_string()))?;
    let state: CheckpointState = serde_json::from_slice(&text).map_err(|e| fail(e.to_string()))?;
    if state.rows != rows {
        return Err(fail(format!("checkpoint is for r = {}, not {rows}", state.rows)));
    }
    let m = read_matrix(dir.join(CHECKPOINT_MATRIX)).map_err(|e| fail(e.to_string()))?;
    if m.meta.rows != Some(rows) || m.meta.power != Some(state.power as u64) {
        return Err(fail(format!(
            "matrix header {:?} does not match state (r = {rows}, power = {})",
            m.meta, state.power
        )));
    }
    Ok((state, m))
}
