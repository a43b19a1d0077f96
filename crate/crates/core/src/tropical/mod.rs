//! Dense matrices over the tropical semiring `(N ∪ {∞}, min, +)`.
//!
//! Entries are stored as `u32` with `u32::MAX` reserved for `∞`. Every
//! operation that adds finite values checks up front that no finite sum can
//! reach the sentinel, so an overflow is reported instead of silently
//! turning into `∞`.

mod kernel;
mod tmx;

use std::fmt;

use crate::error::{Error, Result};

pub use kernel::{tropical_matmul, tropical_matmul_with, KernelConfig, DEFAULT_PANEL_ROWS};
pub use tmx::{read_matrix, read_matrix_from, write_matrix, write_matrix_to, TMX_MAGIC, TMX_VERSION};

/// Raw encoding of `∞`.
pub const INF: u32 = u32::MAX;

/// An element of the tropical semiring: a natural number or `∞`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TropicalValue(u32);

impl TropicalValue {
    pub const INFINITY: TropicalValue = TropicalValue(INF);
    /// The multiplicative identity (`+ 0`).
    pub const ONE: TropicalValue = TropicalValue(0);

    /// A finite value. `u32::MAX` is the sentinel and is rejected.
    pub fn finite(v: u32) -> Result<Self> {
        if v == INF {
            Err(Error::Overflow(format!("{v} collides with the infinity sentinel")))
        } else {
            Ok(TropicalValue(v))
        }
    }

    #[inline]
    pub fn from_raw(raw: u32) -> Self {
        TropicalValue(raw)
    }

    #[inline]
    pub fn raw(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0 == INF
    }

    /// The finite value, or `None` for `∞`.
    #[inline]
    pub fn get(self) -> Option<u32> {
        (!self.is_infinite()).then_some(self.0)
    }

    /// Tropical addition.
    #[inline]
    pub fn min(self, other: Self) -> Self {
        TropicalValue(self.0.min(other.0))
    }

    /// Tropical multiplication (ordinary `+`, absorbing at `∞`).
    pub fn times(self, other: Self) -> Result<Self> {
        if self.is_infinite() || other.is_infinite() {
            return Ok(Self::INFINITY);
        }
        match self.0.checked_add(other.0) {
            Some(s) if s != INF => Ok(TropicalValue(s)),
            _ => Err(Error::Overflow(format!("{} + {}", self.0, other.0))),
        }
    }
}

impl fmt::Debug for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

impl From<Option<u32>> for TropicalValue {
    fn from(v: Option<u32>) -> Self {
        match v {
            Some(v) if v != INF => TropicalValue(v),
            _ => TropicalValue::INFINITY,
        }
    }
}

/// Provenance carried alongside a matrix and persisted in `.tmx` headers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MatrixMeta {
    /// Word length of the transfer matrix this came from.
    pub rows: Option<u32>,
    /// Which power `A^k` of that transfer matrix this is.
    pub power: Option<u64>,
}

/// Square row-major matrix of tropical values.
#[derive(Clone, PartialEq, Eq)]
pub struct TropicalMatrix {
    dim: usize,
    data: Vec<u32>,
    pub meta: MatrixMeta,
}

impl TropicalMatrix {
    /// The all-`∞` matrix (tropical zero).
    pub fn infinite(dim: usize) -> Self {
        TropicalMatrix { dim, data: vec![INF; dim * dim], meta: MatrixMeta::default() }
    }

    /// `0` on the diagonal, `∞` elsewhere.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::infinite(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 0;
        }
        m
    }

    /// Wraps raw row-major entries (`u32::MAX` meaning `∞`).
    pub fn from_raw(dim: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!("{} entries for a {dim}x{dim} matrix", data.len())));
        }
        Ok(TropicalMatrix { dim, data, meta: MatrixMeta::default() })
    }

    /// Builds a matrix from rows of optional entries (`None` is `∞`).
    pub fn from_rows<R: AsRef<[Option<u32>]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::Dimension(format!("row of length {} in a {dim}x{dim} matrix", row.len())));
            }
            for &e in row {
                data.push(match e {
                    Some(v) => TropicalValue::finite(v)?.raw(),
                    None => INF,
                });
            }
        }
        Self::from_raw(dim, data)
    }

    pub fn with_meta(mut self, meta: MatrixMeta) -> Self {
        self.meta = meta;
        self
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> TropicalValue {
        TropicalValue(self.data[i * self.dim + j])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: TropicalValue) {
        self.data[i * self.dim + j] = v.raw();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_raw(&self) -> &[u32] {
        &self.data
    }

    pub fn as_raw_mut(&mut self) -> &mut [u32] {
        &mut self.data
    }

    pub fn into_raw(self) -> Vec<u32> {
        self.data
    }

    /// Largest finite entry, or `None` if every entry is `∞`.
    pub fn max_finite(&self) -> Option<u32> {
        self.data.iter().copied().filter(|&v| v != INF).max()
    }

    pub fn finite_count(&self) -> usize {
        self.data.iter().filter(|&&v| v != INF).count()
    }
}

impl fmt::Debug for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TropicalMatrix({}x{}, {:?}) [", self.dim, self.dim, self.meta)?;
        for i in 0..self.dim.min(16) {
            let row: Vec<String> = (0..self.dim.min(16)).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Adds `c` to every finite entry; `∞` stays `∞`.
pub fn scalar_shift(c: u32, a: &TropicalMatrix) -> Result<TropicalMatrix> {
    if let Some(max) = a.max_finite() {
        if max.checked_add(c).is_none_or(|s| s == INF) {
            return Err(Error::Overflow(format!("shift by {c} of entry {max}")));
        }
    }
    let data = a.data.iter().map(|&v| if v == INF { INF } else { v + c }).collect();
    Ok(TropicalMatrix { dim: a.dim, data, meta: a.meta })
}

/// Smallest diagonal entry; `∞` for an empty or all-`∞` diagonal.
pub fn min_diagonal(a: &TropicalMatrix) -> TropicalValue {
    let v = (0..a.dim).map(|i| a.data[i * a.dim + i]).min().unwrap_or(INF);
    TropicalValue(v)
}

/// Returns `c` when `b = c ⊗ a` entrywise, `None` otherwise.
///
/// `∞` positions must coincide. Two all-`∞` matrices are related by shift 0.
pub fn matrix_equal_shifted(a: &TropicalMatrix, b: &TropicalMatrix) -> Option<u32> {
    if a.dim != b.dim {
        return None;
    }
    let mut shift = None;
    for (&x, &y) in a.data.iter().zip(&b.data) {
        match (x == INF, y == INF) {
            (true, true) => {}
            (false, false) => {
                let c = shift.get_or_insert(y.checked_sub(x)?);
                if y.checked_sub(x)? != *c {
                    return None;
                }
            }
            _ => return None,
        }
    }
    Some(shift.unwrap_or(0))
}

/// `a^n` by repeated squaring; `a^0` is the identity.
pub fn tropical_pow(a: &TropicalMatrix, n: u64, config: &KernelConfig) -> Result<TropicalMatrix> {
    let mut result: Option<TropicalMatrix> = None;
    let mut base = a.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => tropical_matmul_with(&r, &base, config)?,
            });
        }
        e >>= 1;
        if e > 0 {
            base = tropical_matmul_with(&base, &base, config)?;
        }
    }
    let mut out = result.unwrap_or_else(|| TropicalMatrix::identity(a.dim));
    out.meta = MatrixMeta { rows: a.meta.rows, power: Some(a.meta.power.unwrap_or(1) * n) };
    Ok(out)
}
