//! Lower and upper bounds for `γ(P_m □ C_n)`.
//!
//! All arithmetic is exact integer arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{is_dominating, VertexSet};
use crate::scan::LTable;

/// Cycle lengths at which the depth-10 wasted-domination minimum exceeds `n`
/// by one, for `30 <= n`.
pub const EXCEPTIONAL_N: [u32; 11] = [32, 33, 37, 38, 42, 43, 47, 48, 53, 58, 63];

/// Size of a cylinder `P_m □ C_n`: `m` rows (paths), `n` columns (cycle).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CylinderDims {
    pub m: u32,
    pub n: u32,
}

impl CylinderDims {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::out_of_range("m", m, "a cylinder needs m >= 2"));
        }
        if n < 3 {
            return Err(Error::out_of_range("n", n, "a cylinder needs n >= 3"));
        }
        Ok(CylinderDims { m, n })
    }
}

#[inline]
fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// `⌈(2 L(n) + m n) / 5⌉`, using one border strip of depth `r` at the top and
/// one at the bottom.
pub fn lower_bound_from_l(dims: CylinderDims, table: &LTable) -> Result<u32> {
    if dims.m < 2 * table.rows {
        return Err(Error::Partition { m: dims.m, depth: table.rows });
    }
    let l = table
        .value(dims.n)
        .ok_or_else(|| Error::out_of_range("n", dims.n, format!("L-table covers n in {:?}", table.n_range())))?;
    let total = 2 * l as u64 + dims.m as u64 * dims.n as u64;
    Ok(ceil_div(total, 5) as u32)
}

/// Closed form of the depth-10 bound, valid for `m >= 20`, `n >= 30`.
pub fn theorem_bound(dims: CylinderDims) -> Result<u32> {
    if dims.m < 20 {
        return Err(Error::out_of_range("m", dims.m, "the closed-form bound needs m >= 20"));
    }
    if dims.n < 30 {
        return Err(Error::out_of_range("n", dims.n, "the closed-form bound needs n >= 30"));
    }
    let base = dims.n as u64 * (dims.m as u64 + 2);
    let extra = if EXCEPTIONAL_N.contains(&dims.n) { 2 } else { 0 };
    Ok(ceil_div(base + extra, 5) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionBound {
    pub value: u32,
    /// The closed form was fractional and `value` is its ceiling.
    pub rounded: bool,
}

/// Upper bound from periodic constructions, stated for `m >= n`.
pub fn construction_upper_bound(dims: CylinderDims) -> Result<ConstructionBound> {
    if dims.m < dims.n {
        return Err(Error::out_of_range(
            "n",
            dims.n,
            format!("the construction bound is stated for m >= n (m = {})", dims.m),
        ));
    }
    let (m2, k) = (dims.m as u64 + 2, dims.n as u64 / 5);
    let (num, den) = match dims.n % 5 {
        0 => (m2 * k, 1),
        1 => (m2 * (8 * k + 3), 8),
        2 => (m2 * (2 * k + 1), 2),
        _ => (m2 * (k + 1), 1),
    };
    Ok(ConstructionBound { value: ceil_div(num, den) as u32, rounded: num % den != 0 })
}

/// Grid domination number `⌊(m+2)(n+2)/5⌋ − 4`, an upper bound for `m, n >= 16`.
pub fn grid_upper_bound(dims: CylinderDims) -> Result<u32> {
    if dims.m < 16 || dims.n < 16 {
        return Err(Error::out_of_range("m", dims.m.min(dims.n), "grid formula needs m, n >= 16"));
    }
    Ok(((dims.m as u64 + 2) * (dims.n as u64 + 2) / 5 - 4) as u32)
}

/// `γ(P_m □ P_{n−2}) = ⌊(m+2)n/5⌋ − 4`, a lower bound for `m, n >= 18`.
pub fn grid_lower_bound(dims: CylinderDims) -> Result<u32> {
    if dims.m < 18 || dims.n < 18 {
        return Err(Error::out_of_range("m", dims.m.min(dims.n), "grid formula needs m, n >= 18"));
    }
    Ok(((dims.m as u64 + 2) * dims.n as u64 / 5 - 4) as u32)
}

/// Published exact values for `16 <= m <= 22`, `n >= m`: `⌈(m+2)n/5⌉ + offset[n mod 5]`.
const KNOWN_GAMMA_OFFSETS: [(u32, [u32; 5]); 7] = [
    (16, [0, 0, 0, 1, 0]),
    (17, [0, 1, 0, 1, 0]),
    (18, [0, 1, 1, 1, 1]),
    (19, [0, 0, 0, 1, 1]),
    (20, [0, 1, 1, 1, 1]),
    (21, [0, 1, 0, 2, 1]),
    (22, [0, 1, 1, 2, 1]),
];

pub fn known_gamma(dims: CylinderDims) -> Option<u32> {
    if dims.n < dims.m {
        return None;
    }
    let (_, offsets) = KNOWN_GAMMA_OFFSETS.iter().find(|(m, _)| *m == dims.m)?;
    let base = ceil_div((dims.m as u64 + 2) * dims.n as u64, 5) as u32;
    Some(base + offsets[(dims.n % 5) as usize])
}

/// Dominating set of size `(m+2)n/5` for `n ≡ 0 (mod 5)`.
///
/// Takes the perfect code `{(i, j) : i + 2j ≡ 0 (mod 5)}` of the infinite
/// grid restricted to the cylinder, and moves each code vertex of the
/// phantom rows `−1` and `m` onto the adjacent border row. The result is
/// checked with [`is_dominating`] before it is returned.
pub fn diagonal_pattern_dominating_set(dims: CylinderDims) -> Result<VertexSet> {
    if !dims.n.is_multiple_of(5) {
        return Err(Error::out_of_range("n", dims.n, "the diagonal pattern needs n ≡ 0 (mod 5)"));
    }
    let (m, n) = (dims.m as usize, dims.n as usize);
    let on_code = |i: isize, j: usize| (i + 2 * j as isize).rem_euclid(5) == 0;
    let mut vertices = Vec::new();
    for j in 0..n {
        for i in 0..m {
            if on_code(i as isize, j) {
                vertices.push((i, j));
            }
        }
        if on_code(-1, j) {
            vertices.push((0, j));
        }
        if on_code(m as isize, j) {
            vertices.push((m - 1, j));
        }
    }
    let set = VertexSet::from_vertices(m, n, vertices)?;
    let expected = (m + 2) * n / 5;
    if set.len() != expected {
        return Err(Error::Construction(format!("pattern has {} vertices, expected {expected}", set.len())));
    }
    if !is_dominating(&set) {
        return Err(Error::Construction(format!("pattern does not dominate P_{m} x C_{n}")));
    }
    Ok(set)
}

/// Everything known about one cylinder size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub m: u32,
    pub n: u32,
    pub residue: u32,
    pub k: u32,
    pub lower_new: Option<u32>,
    pub lower_grid: Option<u32>,
    pub upper_construction: Option<u32>,
    pub upper_grid: Option<u32>,
    pub known_gamma: Option<u32>,
    pub flags: Vec<String>,
}

/// Assembles a [`BoundReport`]. The new lower bound comes from `table` when
/// given and applicable, otherwise from [`theorem_bound`].
pub fn bound_report(dims: CylinderDims, table: Option<&LTable>) -> BoundReport {
    let mut flags = Vec::new();
    let from_table = table.and_then(|t| lower_bound_from_l(dims, t).ok().map(|v| (v, t)));
    let lower_new = match from_table {
        Some((v, t)) => {
            flags.push(format!("lower_from_l_table_r{}", t.rows));
            if t.is_irregular(dims.n) {
                flags.push("irregular_l".to_string());
            }
            Some(v)
        }
        None => theorem_bound(dims).ok().inspect(|_| flags.push("lower_from_closed_form".to_string())),
    };
    let upper_construction = construction_upper_bound(dims).ok().map(|c| {
        if c.rounded {
            flags.push("construction_rounded".to_string());
        }
        c.value
    });
    let mut report = BoundReport {
        m: dims.m,
        n: dims.n,
        residue: dims.n % 5,
        k: dims.n / 5,
        lower_new,
        lower_grid: grid_lower_bound(dims).ok(),
        upper_construction,
        upper_grid: grid_upper_bound(dims).ok(),
        known_gamma: known_gamma(dims),
        flags,
    };
    if !report.is_consistent() {
        report.flags.push("inconsistent".to_string());
    }
    report
}

impl BoundReport {
    /// Every present lower bound is at most every present upper bound, and the
    /// known value (if any) lies between them.
    pub fn is_consistent(&self) -> bool {
        let lo = [self.lower_new, self.lower_grid].into_iter().flatten().max();
        let hi = [self.upper_construction, self.upper_grid].into_iter().flatten().min();
        let le = |a: Option<u32>, b: Option<u32>| match (a, b) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        };
        le(lo, hi) && le(lo, self.known_gamma) && le(self.known_gamma, hi)
    }
}
