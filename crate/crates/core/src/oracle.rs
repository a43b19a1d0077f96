//! Brute-force ground truth on small cylinders.
//!
//! Nothing here goes through the transfer matrix: subsets are enumerated as
//! raw bitmasks and neighbourhoods are computed straight from cylinder
//! adjacency. These routines are meant to be slow and obviously correct.

use std::collections::BTreeSet;

use crate::bounds::CylinderDims;
use crate::error::{Error, Result};
use crate::transfer::can_follow;
use crate::words::CorrectWord;

/// Largest `m · n` accepted by [`brute_force_gamma`].
pub const MAX_GAMMA_CELLS: u32 = 24;
/// Largest `r · n` accepted by [`brute_force_wasted_min`].
pub const MAX_WASTED_CELLS: u32 = 18;

pub type Vertex = (usize, usize);

/// A set of vertices `v_{row,col}` of a cylinder with `rows` rows and `cols`
/// columns. Columns wrap, rows do not.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    rows: usize,
    cols: usize,
    members: BTreeSet<Vertex>,
}

impl VertexSet {
    pub fn new(rows: usize, cols: usize) -> Self {
        VertexSet { rows, cols, members: BTreeSet::new() }
    }

    pub fn from_vertices(rows: usize, cols: usize, vs: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut s = Self::new(rows, cols);
        for v in vs {
            if v.0 >= rows || v.1 >= cols {
                return Err(Error::out_of_range(
                    "vertex row",
                    v.0 as u64,
                    format!("({}, {}) outside {rows}x{cols}", v.0, v.1),
                ));
            }
            s.members.insert(v);
        }
        Ok(s)
    }

    /// Every vertex of the cylinder.
    pub fn full(rows: usize, cols: usize) -> Self {
        let mut s = Self::new(rows, cols);
        s.members.extend((0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))));
        s
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.contains(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }
}

/// Closed neighbourhood of one vertex in a cylinder with `rows` rows.
fn closed_nbhd(v: Vertex, rows: usize, cols: usize) -> impl Iterator<Item = Vertex> {
    let (i, j) = v;
    let mut out = Vec::with_capacity(5);
    out.push((i, j));
    out.push((i, (j + 1) % cols));
    out.push((i, (j + cols - 1) % cols));
    if i > 0 {
        out.push((i - 1, j));
    }
    if i + 1 < rows {
        out.push((i + 1, j));
    }
    out.into_iter()
}

/// `N[S]`. With `outer`, the set lives in a strip that sits on top of one
/// extra row, and vertices of that row are included when reached.
pub fn closed_neighborhood(s: &VertexSet, outer: bool) -> VertexSet {
    let rows = if outer { s.rows + 1 } else { s.rows };
    let mut out = VertexSet::new(rows, s.cols);
    for v in s.iter() {
        out.members.extend(closed_nbhd(v, rows, s.cols));
    }
    out
}

pub fn is_dominating(s: &VertexSet) -> bool {
    closed_neighborhood(s, false).len() == s.rows * s.cols
}

/// Whether `s` dominates the first `rows - 1` rows of its strip.
pub fn is_almost_dominating(s: &VertexSet) -> bool {
    let n = closed_neighborhood(s, false);
    (0..s.rows.saturating_sub(1)).all(|i| (0..s.cols).all(|j| n.contains((i, j))))
}

/// `5 |S| − |N[S]|` with the neighbourhood taken in the outer cylinder.
pub fn wasted_outer(s: &VertexSet) -> u32 {
    5 * s.len() as u32 - closed_neighborhood(s, true).len() as u32
}

/// Exact `γ(P_m □ C_n)` by exhaustive search over increasing cardinalities.
pub fn brute_force_gamma(dims: CylinderDims) -> Result<u32> {
    let cells = dims.m * dims.n;
    if cells > MAX_GAMMA_CELLS {
        return Err(Error::out_of_range("m*n", cells, format!("exhaustive search allows m*n <= {MAX_GAMMA_CELLS}")));
    }
    let (rows, cols) = (dims.m as usize, dims.n as usize);
    let masks = neighborhood_masks(rows, cols, rows);
    let full: u32 = if cells == 32 { u32::MAX } else { (1 << cells) - 1 };
    for k in 0..=cells as usize {
        if exists_cover(&masks, full, k, 0, 0) {
            return Ok(k as u32);
        }
    }
    unreachable!("the full vertex set dominates")
}

fn exists_cover(masks: &[u32], full: u32, k: usize, start: usize, covered: u32) -> bool {
    if covered == full {
        return true;
    }
    if k == 0 {
        return false;
    }
    (start..masks.len()).any(|v| exists_cover(masks, full, k - 1, v + 1, covered | masks[v]))
}

/// Bitmask of `N[v]` for each strip vertex `v = row * cols + col`, computed in
/// a cylinder with `nb_rows` rows (`rows` or `rows + 1`).
fn neighborhood_masks(rows: usize, cols: usize, nb_rows: usize) -> Vec<u32> {
    (0..rows * cols)
        .map(|v| closed_nbhd((v / cols, v % cols), nb_rows, cols).fold(0u32, |m, (i, j)| m | 1 << (i * cols + j)))
        .collect()
}

fn mask_to_set(mask: u32, rows: usize, cols: usize) -> VertexSet {
    let mut s = VertexSet::new(rows, cols);
    s.members.extend((0..rows * cols).filter(|v| mask >> v & 1 == 1).map(|v| (v / cols, v % cols)));
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WastedResult {
    pub set: VertexSet,
    pub closed_neighborhood_size: u32,
    pub wasted: u32,
}

fn check_strip(r: u32, n: u32) -> Result<()> {
    if r < 2 || n < 3 {
        return Err(Error::out_of_range("rows", r, format!("strip {r}x{n} needs r >= 2 and n >= 3")));
    }
    if r * n > MAX_WASTED_CELLS {
        return Err(Error::out_of_range("r*n", r * n, format!("exhaustive search allows r*n <= {MAX_WASTED_CELLS}")));
    }
    Ok(())
}

/// Bitmasks of every almost-dominating set of the strip `P_r □ C_n`.
fn almost_dominating_masks(r: u32, n: u32) -> Vec<u32> {
    let (rows, cols) = (r as usize, n as usize);
    let masks = neighborhood_masks(rows, cols, rows);
    let inner: u32 = (1 << ((rows - 1) * cols)) - 1;
    (0..1u32 << (rows * cols))
        .filter(|&set| {
            let cover = (0..rows * cols).filter(|v| set >> v & 1 == 1).fold(0, |c, v| c | masks[v]);
            cover & inner == inner
        })
        .collect()
}

/// Every almost-dominating set of `P_r □ C_n`.
pub fn almost_dominating_sets(r: u32, n: u32) -> Result<Vec<VertexSet>> {
    check_strip(r, n)?;
    Ok(almost_dominating_masks(r, n).into_iter().map(|m| mask_to_set(m, r as usize, n as usize)).collect())
}

/// Minimum wasted domination over almost-dominating sets of `P_r □ C_n`,
/// with neighbourhoods counted in `P_{r+1} □ C_n`.
///
/// Ties go to the lexicographically least sorted vertex list.
pub fn brute_force_wasted_min(r: u32, n: u32) -> Result<WastedResult> {
    check_strip(r, n)?;
    let (rows, cols) = (r as usize, n as usize);
    let outer = neighborhood_masks(rows, cols, rows + 1);
    let mut best: Option<(u32, Vec<Vertex>, u32)> = None;
    for set in almost_dominating_masks(r, n) {
        let cover = (0..rows * cols).filter(|v| set >> v & 1 == 1).fold(0u32, |c, v| c | outer[v]);
        let size = cover.count_ones();
        let wasted = 5 * set.count_ones() - size;
        let better = match &best {
            None => true,
            Some((w, _, _)) if wasted < *w => true,
            Some((w, list, _)) if wasted == *w => mask_to_set(set, rows, cols).iter().collect::<Vec<_>>() < *list,
            _ => false,
        };
        if better {
            best = Some((wasted, mask_to_set(set, rows, cols).iter().collect(), size));
        }
    }
    let (wasted, list, size) = best.expect("the full strip is almost-dominating");
    Ok(WastedResult { set: VertexSet::from_vertices(rows, cols, list)?, closed_neighborhood_size: size, wasted })
}

/// Column words of an almost-dominating set.
///
/// Row `i` of word `j` is `0` if `v_{ij} ∈ R`, `1` if `v_{ij}` has an
/// `R`-neighbour in its own column or the previous one, `2` otherwise.
pub fn encode_words(set: &VertexSet) -> Result<Vec<CorrectWord>> {
    let (rows, cols) = (set.rows, set.cols);
    if rows < 2 || cols < 3 {
        return Err(Error::Encoding { column: 0, reason: format!("strip {rows}x{cols} is too small") });
    }
    let label = |i: usize, j: usize| -> u8 {
        if set.contains((i, j)) {
            0
        } else if (i > 0 && set.contains((i - 1, j)))
            || (i + 1 < rows && set.contains((i + 1, j)))
            || set.contains((i, (j + cols - 1) % cols))
        {
            1
        } else {
            2
        }
    };
    let nbhd = closed_neighborhood(set, false);
    (0..cols)
        .map(|j| {
            if let Some(i) = (0..rows - 1).find(|&i| !nbhd.contains((i, j))) {
                return Err(Error::Encoding {
                    column: j,
                    reason: format!("vertex ({i}, {j}) of the inner cylinder is not dominated"),
                });
            }
            let digits: Vec<u8> = (0..rows).map(|i| label(i, j)).collect();
            CorrectWord::from_digits(&digits).map_err(|e| Error::Encoding { column: j, reason: e.to_string() })
        })
        .collect()
}

/// The set `{v_{ij} : word j has a 0 in row i}`, after checking that each
/// word can follow its predecessor (cyclically).
pub fn decode_words(words: &[CorrectWord]) -> Result<VertexSet> {
    let cols = words.len();
    if cols < 3 {
        return Err(Error::Encoding { column: 0, reason: format!("a cycle needs at least 3 columns, got {cols}") });
    }
    let rows = words[0].len();
    for j in 0..cols {
        let prev = &words[(j + cols - 1) % cols];
        let ok = can_follow(prev, &words[j]).map_err(|e| Error::Encoding { column: j, reason: e.to_string() })?;
        if !ok {
            return Err(Error::Encoding { column: j, reason: format!("{} cannot follow {}", words[j], prev) });
        }
    }
    let mut s = VertexSet::new(rows, cols);
    for (j, w) in words.iter().enumerate() {
        s.members.extend((0..rows).filter(|&i| w.digit(i) == 0).map(|i| (i, j)));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: usize, cols: usize, vs: &[Vertex]) -> VertexSet {
        VertexSet::from_vertices(rows, cols, vs.iter().copied()).unwrap()
    }

    fn dims(m: u32, n: u32) -> CylinderDims {
        CylinderDims::new(m, n).unwrap()
    }

    #[test]
    fn neighborhoods() {
        assert_eq!(closed_neighborhood(&set(5, 5, &[(2, 2)]), false).len(), 5);
        let top = closed_neighborhood(&set(2, 4, &[(0, 0)]), false);
        assert_eq!(top, set(2, 4, &[(0, 0), (0, 1), (0, 3), (1, 0)]));
        assert_eq!(closed_neighborhood(&set(2, 4, &[(1, 0), (1, 2)]), true).len(), 8);
    }

    #[test]
    fn domination_checks() {
        assert!(is_dominating(&VertexSet::full(3, 4)));
        assert!(!is_dominating(&VertexSet::new(3, 4)));
        assert!(is_dominating(&set(2, 3, &[(0, 0), (1, 1)])));
        assert!(!is_dominating(&set(2, 3, &[(0, 0)])));
    }

    #[test]
    fn gamma_small() {
        assert_eq!(brute_force_gamma(dims(2, 4)).unwrap(), 2);
        assert_eq!(brute_force_gamma(dims(2, 3)).unwrap(), 2);
        assert!(brute_force_gamma(dims(2, 5)).unwrap() <= 4);
        assert!(matches!(brute_force_gamma(dims(5, 5)), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn wasted_two_by_four() {
        let res = brute_force_wasted_min(2, 4).unwrap();
        assert_eq!(res.wasted, 1);
        assert!(is_almost_dominating(&res.set));
        assert_eq!(wasted_outer(&res.set), res.wasted);
        assert_eq!(closed_neighborhood(&res.set, true).len() as u32, res.closed_neighborhood_size);
        // the hand witness reaches the same value
        assert_eq!(wasted_outer(&set(2, 4, &[(0, 0), (1, 2)])), 1);
    }

    #[test]
    fn wasted_guards() {
        assert!(brute_force_wasted_min(3, 7).is_err());
        assert!(brute_force_wasted_min(1, 5).is_err());
    }

    #[test]
    fn encode_all_vertices() {
        let words = encode_words(&VertexSet::full(2, 4)).unwrap();
        assert!(words.iter().all(|w| w.to_string() == "00"));
    }

    #[test]
    fn encode_round_trip() {
        let r = set(2, 4, &[(0, 0), (1, 2)]);
        let words = encode_words(&r).unwrap();
        assert_eq!(words.len(), 4);
        let text: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(text, ["01", "12", "10", "21"]);
        assert_eq!(decode_words(&words).unwrap(), r);
    }

    #[test]
    fn encode_reports_column() {
        let err = encode_words(&set(2, 4, &[(1, 0)])).unwrap_err();
        assert!(matches!(err, Error::Encoding { column: 1, .. }), "{err}");
    }

    #[test]
    fn decode_rejects_non_arcs() {
        let ws: Vec<CorrectWord> = ["00", "22", "00"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(matches!(decode_words(&ws), Err(Error::Encoding { column: 1, .. })));
    }

    #[test]
    fn waste_is_nonnegative() {
        for m in 2..=3 {
            for n in 3..=5 {
                for mask in 0..1u32 << (m * n) {
                    let s = mask_to_set(mask, m, n);
                    let nb = closed_neighborhood(&s, false).len();
                    assert!(5 * s.len() >= nb);
                }
            }
        }
    }
}
