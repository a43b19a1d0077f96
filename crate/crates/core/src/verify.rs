//! Cross-checks between the transfer-matrix pipeline and the brute-force
//! oracle on one small strip `P_r □ C_n`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::Result;
use crate::oracle::{
    almost_dominating_sets, brute_force_wasted_min, closed_neighborhood, decode_words, encode_words,
    is_almost_dominating, Vertex, VertexSet,
};
use crate::transfer::{arc_label, build_transfer_matrix, can_follow, newly_dominated, CellOffset};
use crate::tropical::{min_diagonal, tropical_pow, KernelConfig};
use crate::words::{enumerate_correct_words, CorrectWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        PropertyCheck { name, passed, detail }
    }
}

/// All closed walks of length `n` in the can-follow digraph, as word lists.
pub fn closed_word_cycles(r: u32, n: u32) -> Result<Vec<Vec<CorrectWord>>> {
    let words: Vec<CorrectWord> = enumerate_correct_words(r)?.iter().collect();
    let mut succ = vec![Vec::new(); words.len()];
    for (i, q) in words.iter().enumerate() {
        for (j, p) in words.iter().enumerate() {
            if can_follow(q, p)? {
                succ[i].push(j);
            }
        }
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n as usize);
    for start in 0..words.len() {
        path.push(start);
        extend_walk(&succ, n as usize, &mut path, &mut |p| out.push(p.iter().map(|&i| words[i]).collect()));
        path.pop();
    }
    Ok(out)
}

fn extend_walk(succ: &[Vec<usize>], n: usize, path: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    let last = *path.last().unwrap();
    if path.len() == n {
        if succ[last].contains(&path[0]) {
            emit(path);
        }
        return;
    }
    for &next in &succ[last] {
        path.push(next);
        extend_walk(succ, n, path, emit);
        path.pop();
    }
}

/// Absolute position of each newly dominated cell, with the strip of `r`
/// rows sitting on top of the outer row `r`.
fn nd_cells(q: &CorrectWord, p: &CorrectWord, col_of_q: usize, cols: usize) -> Result<Vec<Vertex>> {
    Ok(newly_dominated(q, p)?
        .cells
        .iter()
        .map(|c| {
            let col = match c.offset {
                CellOffset::Prev => col_of_q,
                CellOffset::Current | CellOffset::Below => col_of_q + 1,
                CellOffset::Next => col_of_q + 2,
            };
            (c.row, col % cols)
        })
        .collect())
}

/// Runs every cross-check for `P_r □ C_n` and reports each one.
pub fn verify_properties(r: u32, n: u32) -> Result<Vec<PropertyCheck>> {
    let sets = almost_dominating_sets(r, n)?;
    let cycles = closed_word_cycles(r, n)?;
    let cols = n as usize;
    let mut checks = Vec::new();

    // Closed walks and almost-dominating sets are in bijection.
    let mut decoded = HashSet::new();
    let mut cycle_failures = 0usize;
    for cyc in &cycles {
        let set = decode_words(cyc)?;
        if !is_almost_dominating(&set) || encode_words(&set).ok().as_ref() != Some(cyc) {
            cycle_failures += 1;
        }
        decoded.insert(set);
    }
    let mut set_failures = 0usize;
    for s in &sets {
        let ok = encode_words(s).and_then(|w| decode_words(&w)).is_ok_and(|back| &back == s);
        if !ok || !decoded.contains(s) {
            set_failures += 1;
        }
    }
    checks.push(PropertyCheck::new(
        "bijection",
        cycles.len() == sets.len() && decoded.len() == sets.len() && cycle_failures == 0 && set_failures == 0,
        format!(
            "{} closed walks, {} almost-dominating sets, {} bad walks, {} bad sets",
            cycles.len(),
            sets.len(),
            cycle_failures,
            set_failures
        ),
    ));

    // |N[R]| is the sum of nd along the walk, and the ND sets partition N[R].
    let mut nd_failures = 0usize;
    let mut label_failures = 0usize;
    for s in &sets {
        let words = encode_words(s)?;
        let nbhd = closed_neighborhood(s, true);
        let mut seen: Vec<Vertex> = Vec::new();
        let mut nd_sum = 0u32;
        let mut label_sum = 0u32;
        for j in 0..cols {
            let (q, p) = (&words[j], &words[(j + 1) % cols]);
            let cells = nd_cells(q, p, j, cols)?;
            nd_sum += cells.len() as u32;
            seen.extend(cells);
            label_sum += arc_label(q, p)?;
        }
        let unique: HashSet<Vertex> = seen.iter().copied().collect();
        let partition =
            unique.len() == seen.len() && unique.len() == nbhd.len() && seen.iter().all(|&v| nbhd.contains(v));
        if nd_sum as usize != nbhd.len() || !partition {
            nd_failures += 1;
        }
        if label_sum != 5 * s.len() as u32 - nbhd.len() as u32 {
            label_failures += 1;
        }
    }
    checks.push(PropertyCheck::new(
        "lemma_nd",
        nd_failures == 0,
        format!("{} of {} sets violate |N[R]| = sum nd", nd_failures, sets.len()),
    ));
    checks.push(PropertyCheck::new(
        "walk_label",
        label_failures == 0,
        format!("{} of {} sets violate sum of labels = w(R)", label_failures, sets.len()),
    ));

    // min diag(A^n) equals the exhaustive minimum.
    let a = build_transfer_matrix(r)?;
    let power = tropical_pow(&a, n as u64, &KernelConfig::default())?;
    let via_matrix = min_diagonal(&power);
    let oracle = brute_force_wasted_min(r, n)?;
    checks.push(PropertyCheck::new(
        "min_wasted",
        via_matrix.get() == Some(oracle.wasted),
        format!(
            "min diag(A^{n}) = {via_matrix}, exhaustive minimum = {} (witness {})",
            oracle.wasted,
            format_set(&oracle.set)
        ),
    ));
    Ok(checks)
}

pub fn format_set(s: &VertexSet) -> String {
    let vs: Vec<String> = s.iter().map(|(i, j)| format!("v{i},{j}")).collect();
    format!("{{{}}}", vs.join(" "))
}
