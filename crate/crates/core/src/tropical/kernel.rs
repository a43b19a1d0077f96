//! Blocked, panel-parallel `(min, +)` matrix product.
//!
//! The output is split into contiguous panels of rows, one rayon task per
//! panel. Inside a panel the loops run `j-block → k-block → i → k → j` so a
//! `KB x JB` tile of the right operand stays hot while every row of the
//! panel consumes it. Infinite entries of the left operand are skipped, which
//! makes products with a sparse left factor (the transfer matrix) cheap.
//!
//! Every output entry is a `min` over the same set of sums regardless of
//! blocking or scheduling, so results are bit-identical for every
//! configuration.

use rayon::prelude::*;

use super::{MatrixMeta, TropicalMatrix, INF};
use crate::error::{Error, Result};

pub const DEFAULT_PANEL_ROWS: usize = 256;
const DEFAULT_K_BLOCK: usize = 512;
const DEFAULT_J_BLOCK: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelConfig {
    /// Output rows per parallel task.
    pub panel_rows: usize,
    pub k_block: usize,
    pub j_block: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig { panel_rows: DEFAULT_PANEL_ROWS, k_block: DEFAULT_K_BLOCK, j_block: DEFAULT_J_BLOCK }
    }
}

/// `a ⊗ b` with the default blocking.
pub fn tropical_matmul(a: &TropicalMatrix, b: &TropicalMatrix) -> Result<TropicalMatrix> {
    tropical_matmul_with(a, b, &KernelConfig::default())
}

pub fn tropical_matmul_with(a: &TropicalMatrix, b: &TropicalMatrix, config: &KernelConfig) -> Result<TropicalMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("cannot multiply {0}x{0} by {1}x{1}", a.dim(), b.dim())));
    }
    if let (Some(x), Some(y)) = (a.max_finite(), b.max_finite()) {
        if x.checked_add(y).is_none_or(|s| s == INF) {
            return Err(Error::Overflow(format!("largest finite entries {x} and {y} can sum past the sentinel")));
        }
    }

    let dim = a.dim();
    let mut out = TropicalMatrix::infinite(dim);
    out.meta = product_meta(&a.meta, &b.meta);
    if dim == 0 {
        return Ok(out);
    }
    let panel_rows = config.panel_rows.max(1);
    let k_block = config.k_block.max(1);
    let j_block = config.j_block.max(1);
    let (a_raw, b_raw) = (a.as_raw(), b.as_raw());

    let blocks = Blocks { dim, panel_rows, k_block, j_block };
    let use_avx2 = avx2_available();
    out.as_raw_mut().par_chunks_mut(panel_rows * dim).enumerate().for_each(|(p, panel)| {
        if use_avx2 {
            #[cfg(target_arch = "x86_64")]
            // SAFETY: AVX2 support was detected at runtime.
            unsafe {
                panel_avx2(&blocks, p, panel, a_raw, b_raw)
            }
        } else {
            panel_product(&blocks, p, panel, a_raw, b_raw)
        }
    });
    Ok(out)
}

#[derive(Clone, Copy)]
struct Blocks {
    dim: usize,
    panel_rows: usize,
    k_block: usize,
    j_block: usize,
}

fn avx2_available() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::is_x86_feature_detected!("avx2")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn panel_avx2(blocks: &Blocks, p: usize, panel: &mut [u32], a: &[u32], b: &[u32]) {
    panel_product(blocks, p, panel, a, b)
}

/// Computes output panel `p` (rows `p * panel_rows ..`) of `a ⊗ b`.
#[inline(always)]
fn panel_product(blocks: &Blocks, p: usize, panel: &mut [u32], a_raw: &[u32], b_raw: &[u32]) {
    let Blocks { dim, panel_rows, k_block, j_block } = *blocks;
    let row0 = p * panel_rows;
    let rows = panel.len() / dim;
    // Finite entries of each left row: (k, a_ik), sorted by k.
    let finite: Vec<Vec<(u32, u32)>> = (0..rows)
        .map(|r| {
            let arow = &a_raw[(row0 + r) * dim..(row0 + r + 1) * dim];
            arow.iter().enumerate().filter(|(_, &v)| v != INF).map(|(k, &v)| (k as u32, v)).collect()
        })
        .collect();
    let mut cursor = vec![0usize; rows];

    for j0 in (0..dim).step_by(j_block) {
        let j1 = (j0 + j_block).min(dim);
        cursor.iter_mut().for_each(|c| *c = 0);
        for k0 in (0..dim).step_by(k_block) {
            let k1 = (k0 + k_block).min(dim) as u32;
            for r in 0..rows {
                let crow = &mut panel[r * dim + j0..r * dim + j1];
                let entries = &finite[r];
                let mut idx = cursor[r];
                while idx < entries.len() && entries[idx].0 < k1 {
                    let (k, aik) = entries[idx];
                    let k = k as usize;
                    relax_row(crow, &b_raw[k * dim + j0..k * dim + j1], aik);
                    idx += 1;
                }
                cursor[r] = idx;
            }
        }
    }
}

/// `c[j] = min(c[j], a + b[j])` with `∞ + a = ∞`.
///
/// `min(b, INF - a) + a` saturates at `INF` exactly when `b` is `∞`, given
/// the caller's guarantee that finite sums stay below the sentinel.
#[inline(always)]
fn relax_row(c: &mut [u32], b: &[u32], a: u32) {
    let lim = INF - a;
    for (cj, &bj) in c.iter_mut().zip(b) {
        *cj = (*cj).min(bj.min(lim) + a);
    }
}

fn product_meta(a: &MatrixMeta, b: &MatrixMeta) -> MatrixMeta {
    match (a.rows, b.rows, a.power, b.power) {
        (Some(ra), Some(rb), Some(pa), Some(pb)) if ra == rb => MatrixMeta { rows: Some(ra), power: Some(pa + pb) },
        _ => MatrixMeta::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::TropicalValue;

    fn naive(a: &TropicalMatrix, b: &TropicalMatrix) -> Vec<u32> {
        let n = a.dim();
        let mut c = vec![INF; n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y) = (a.get(i, k).raw(), b.get(k, j).raw());
                    if x != INF && y != INF {
                        c[i * n + j] = c[i * n + j].min(x + y);
                    }
                }
            }
        }
        c
    }

    #[test]
    fn two_by_two_hand_example() {
        let a = TropicalMatrix::from_rows(&[[Some(0), None], [Some(3), Some(1)]]).unwrap();
        let c = tropical_matmul(&a, &a).unwrap();
        let expect = TropicalMatrix::from_rows(&[[Some(0), None], [Some(3), Some(2)]]).unwrap();
        assert_eq!(c.as_raw(), expect.as_raw());
        assert_eq!(c.as_raw(), naive(&a, &a).as_slice());
    }

    #[test]
    fn identity_is_neutral() {
        let mut a = TropicalMatrix::infinite(5);
        for i in 0..5 {
            for j in 0..5 {
                if (i + 2 * j) % 3 != 0 {
                    a.set(i, j, TropicalValue::finite((i * 7 + j) as u32).unwrap());
                }
            }
        }
        let id = TropicalMatrix::identity(5);
        assert_eq!(tropical_matmul(&a, &id).unwrap().as_raw(), a.as_raw());
        assert_eq!(tropical_matmul(&id, &a).unwrap().as_raw(), a.as_raw());
    }

    #[test]
    fn tiny_blocks_match_naive() {
        let n = 13;
        let data: Vec<u32> = (0..n * n).map(|x| if x % 4 == 0 { INF } else { (x * 31 % 17) as u32 }).collect();
        let a = TropicalMatrix::from_raw(n, data).unwrap();
        let cfg = KernelConfig { panel_rows: 3, k_block: 2, j_block: 5 };
        assert_eq!(tropical_matmul_with(&a, &a, &cfg).unwrap().as_raw(), naive(&a, &a).as_slice());
    }

    #[test]
    fn rejects_mismatch_and_overflow() {
        let a = TropicalMatrix::identity(2);
        let b = TropicalMatrix::identity(3);
        assert!(matches!(tropical_matmul(&a, &b), Err(Error::Dimension(_))));
        let big = TropicalMatrix::from_rows(&[[Some(INF / 2 + 1)]]).unwrap();
        assert!(matches!(tropical_matmul(&big, &big), Err(Error::Overflow(_))));
    }

    #[test]
    fn empty_matrix() {
        let e = TropicalMatrix::infinite(0);
        assert_eq!(tropical_matmul(&e, &e).unwrap().dim(), 0);
    }
}
