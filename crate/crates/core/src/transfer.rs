//! Transfer digraph on correct words.
//!
//! Column `j` of an almost-dominating set is a correct word `q`; column
//! `j + 1` is a word `p` that may follow it. The arc `q → p` is labelled
//! with the wasted domination contributed by appending `p`:
//! `5 · zeros(p) − nd(q, p)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tropical::{MatrixMeta, TropicalMatrix, INF};
use crate::words::{count_correct_words, enumerate_correct_words, CorrectWord};

/// Largest word length for which a dense transfer matrix is built.
pub const MAX_TRANSFER_ROWS: u32 = 13;

/// Where a newly dominated vertex sits relative to the pair `(q, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellOffset {
    /// In the column of `q`.
    Prev,
    /// In the column of `p`.
    Current,
    /// In the column after `p`.
    Next,
    /// In the outer row below the strip, column of `p`.
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NdCell {
    pub row: usize,
    pub offset: CellOffset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewlyDominated {
    pub count: u32,
    pub cells: Vec<NdCell>,
}

fn check_pair(q: &CorrectWord, p: &CorrectWord) -> Result<usize> {
    if q.len() != p.len() {
        return Err(Error::Dimension(format!("words of length {} and {}", q.len(), p.len())));
    }
    if q.len() < 2 {
        return Err(Error::out_of_range("rows", q.len() as u64, "follow rules need at least 2 rows"));
    }
    Ok(q.len())
}

/// Whether `p` may be the column right after `q`.
pub fn can_follow(q: &CorrectWord, p: &CorrectWord) -> Result<bool> {
    check_pair(q, p)?;
    Ok(follows(q, p))
}

#[inline]
fn follows(q: &CorrectWord, p: &CorrectWord) -> bool {
    let r = q.len();
    let last = r - 1;
    for i in 0..r {
        let (y, x) = (q.digit(i), p.digit(i));
        let ok = match y {
            0 => x != 2,
            1 => x != 1 || has_zero_neighbor(p, i),
            _ if i < last => x == 0,
            _ => x != 1 || p.digit(last - 1) == 0,
        };
        if !ok {
            return false;
        }
    }
    true
}

#[inline]
fn has_zero_neighbor(p: &CorrectWord, i: usize) -> bool {
    (i > 0 && p.digit(i - 1) == 0) || (i + 1 < p.len() && p.digit(i + 1) == 0)
}

/// Counts (and locates) the vertices first dominated when `p` follows `q`.
pub fn newly_dominated(q: &CorrectWord, p: &CorrectWord) -> Result<NewlyDominated> {
    require_arc(q, p)?;
    let r = q.len();
    let mut cells = Vec::new();
    for i in 0..r {
        if p.digit(i) == 0 && q.digit(i) == 2 {
            cells.push(NdCell { row: i, offset: CellOffset::Prev });
        }
    }
    for i in 0..r {
        if p.digit(i) <= 1 && q.digit(i) >= 1 {
            cells.push(NdCell { row: i, offset: CellOffset::Current });
        }
    }
    for i in 0..r {
        if p.digit(i) == 0 {
            cells.push(NdCell { row: i, offset: CellOffset::Next });
        }
    }
    if p.digit(r - 1) == 0 {
        cells.push(NdCell { row: r, offset: CellOffset::Below });
    }
    Ok(NewlyDominated { count: cells.len() as u32, cells })
}

fn require_arc(q: &CorrectWord, p: &CorrectWord) -> Result<()> {
    if !can_follow(q, p)? {
        return Err(Error::NotAnArc { prev: q.to_string(), next: p.to_string() });
    }
    Ok(())
}

/// `nd(q, p)` without materialising the cells; `(q, p)` must be an arc.
#[inline]
fn nd_count(q: &CorrectWord, p: &CorrectWord) -> u32 {
    let r = q.len();
    let mut nd = 0;
    for i in 0..r {
        let (y, x) = (q.digit(i), p.digit(i));
        nd += (x == 0 && y == 2) as u32;
        nd += (x <= 1 && y >= 1) as u32;
        nd += (x == 0) as u32;
    }
    nd + (p.digit(r - 1) == 0) as u32
}

/// Label of the arc `q → p`: `5 · zeros(p) − nd(q, p)`.
pub fn arc_label(q: &CorrectWord, p: &CorrectWord) -> Result<u32> {
    require_arc(q, p)?;
    Ok(5 * p.zeros() - nd_count(q, p))
}

/// Dense transfer matrix for words of length `r`, indexed in word-table order.
pub fn build_transfer_matrix(r: u32) -> Result<TropicalMatrix> {
    if !(2..=MAX_TRANSFER_ROWS).contains(&r) {
        let bytes = count_correct_words(r).saturating_mul(count_correct_words(r)).saturating_mul(4);
        return Err(Error::out_of_range(
            "rows",
            r,
            format!(
                "transfer matrix supports 2..={MAX_TRANSFER_ROWS}; r = {r} would need {:.1} GiB dense",
                bytes as f64 / (1u64 << 30) as f64
            ),
        ));
    }
    let words: Vec<CorrectWord> = enumerate_correct_words(r)?.iter().collect();
    let dim = words.len();
    let mut data = vec![INF; dim * dim];
    data.par_chunks_mut(dim).enumerate().for_each(|(i, row)| {
        let q = &words[i];
        for (j, p) in words.iter().enumerate() {
            if follows(q, p) {
                row[j] = 5 * p.zeros() - nd_count(q, p);
            }
        }
    });
    Ok(TropicalMatrix::from_raw(dim, data)?.with_meta(MatrixMeta { rows: Some(r), power: Some(1) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::enumerate_correct_words;

    fn w(s: &str) -> CorrectWord {
        s.parse().unwrap()
    }

    #[test]
    fn follow_examples() {
        assert!(can_follow(&w("00"), &w("00")).unwrap());
        assert!(!can_follow(&w("00"), &w("22")).unwrap());
        assert!(!can_follow(&w("22"), &w("10")).unwrap());
        assert!(can_follow(&w("12"), &w("01")).unwrap());
        // rule 4: bottom 2 followed by 1 needs a zero above it
        assert!(!can_follow(&w("12"), &w("11")).unwrap());
        // rule 2 at row 0 only looks down
        assert!(can_follow(&w("11"), &w("10")).unwrap());
        assert!(!can_follow(&w("11"), &w("11")).unwrap());
    }

    #[test]
    fn follow_rejects_bad_shapes() {
        assert!(matches!(can_follow(&w("00"), &w("000")), Err(Error::Dimension(_))));
        assert!(matches!(can_follow(&w("0"), &w("0")), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn nd_examples() {
        let nd = newly_dominated(&w("22"), &w("00")).unwrap();
        assert_eq!(nd.count, 7);
        let count = |o| nd.cells.iter().filter(|c| c.offset == o).count();
        assert_eq!(count(CellOffset::Prev), 2);
        assert_eq!(count(CellOffset::Current), 2);
        assert_eq!(count(CellOffset::Next), 2);
        assert_eq!(count(CellOffset::Below), 1);

        assert_eq!(newly_dominated(&w("00"), &w("11")).unwrap().count, 0);
        assert_eq!(newly_dominated(&w("12"), &w("01")).unwrap().count, 3);
        assert_eq!(newly_dominated(&w("00"), &w("00")).unwrap().count, 3);
    }

    #[test]
    fn labels() {
        assert_eq!(arc_label(&w("22"), &w("00")).unwrap(), 3);
        assert_eq!(arc_label(&w("00"), &w("11")).unwrap(), 0);
        assert_eq!(arc_label(&w("00"), &w("00")).unwrap(), 7);
        assert!(matches!(arc_label(&w("00"), &w("22")), Err(Error::NotAnArc { .. })));
        assert!(matches!(newly_dominated(&w("00"), &w("22")), Err(Error::NotAnArc { .. })));
    }

    #[test]
    fn nd_bounds_on_every_arc() {
        for r in 2..=6 {
            let t = enumerate_correct_words(r).unwrap();
            for q in t.iter() {
                for p in t.iter().filter(|p| follows(&q, p)) {
                    let nd = newly_dominated(&q, &p).unwrap();
                    assert_eq!(nd.count, nd_count(&q, &p));
                    assert!(nd.count <= 5 * p.zeros(), "{q} -> {p}");
                    let label = arc_label(&q, &p).unwrap();
                    assert!(label <= 5 * p.zeros());
                }
            }
        }
    }

    #[test]
    fn two_row_matrix() {
        let a = build_transfer_matrix(2).unwrap();
        let t = enumerate_correct_words(2).unwrap();
        assert_eq!(a.dim(), 7);
        let (i00, i22) = (t.index_of(&w("00")).unwrap(), t.index_of(&w("22")).unwrap());
        assert!(a.get(i00, i22).is_infinite());
        assert_eq!(a.get(i22, i00).get(), Some(3));
        assert_eq!(a.meta.rows, Some(2));
    }

    #[test]
    fn matrix_range() {
        assert!(build_transfer_matrix(1).is_err());
        let err = build_transfer_matrix(14).unwrap_err().to_string();
        assert!(err.contains("GiB"), "{err}");
    }
}
