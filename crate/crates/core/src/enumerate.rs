//! Exhaustive enumeration of small simple graphs up to isomorphism, and random reduced graphs.

use crate::catalog;
use crate::graph_model::{GroupLabel, LabeledGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Largest order [`graphs_up_to_iso`] accepts; codes pack the upper triangle into a u64.
pub const ENUM_BOUND: usize = 9;

/// Adjacency rows as bitmasks over at most [`ENUM_BOUND`] vertices.
type Rows = Vec<u16>;

fn code(rows: &Rows, perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut c = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            c = c << 1 | u64::from(rows[perm[i]] >> perm[j] & 1);
        }
    }
    c
}

/// Smallest upper-triangle code over vertex orders that list vertices by a fixed invariant.
fn canonical(rows: &Rows) -> u64 {
    let n = rows.len();
    let deg: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let inv: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = (0..n).filter(|&u| rows[v] >> u & 1 == 1).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match cells.last_mut() {
            Some(c) if inv[c[0]] == inv[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    permute_cells(rows, &mut cells, 0, &mut perm, &mut best);
    best
}

fn permute_cells(rows: &Rows, cells: &mut [Vec<usize>], ci: usize, perm: &mut Vec<usize>, best: &mut u64) {
    if ci == cells.len() {
        *best = (*best).min(code(rows, perm));
        return;
    }
    let len = cells[ci].len();
    heap_permutations(rows, cells, ci, len, perm, best);
}

fn heap_permutations(rows: &Rows, cells: &mut [Vec<usize>], ci: usize, k: usize, perm: &mut Vec<usize>, best: &mut u64) {
    if k <= 1 {
        let base = perm.len();
        perm.extend(cells[ci].iter().copied());
        permute_cells(rows, cells, ci + 1, perm, best);
        perm.truncate(base);
        return;
    }
    for i in 0..k {
        heap_permutations(rows, cells, ci, k - 1, perm, best);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        cells[ci].swap(j, k - 1);
    }
}

/// One representative per isomorphism class of simple graphs on exactly `n` vertices,
/// as edge lists over `0..n`, in a deterministic order.
pub fn graphs_up_to_iso(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n <= ENUM_BOUND, "enumeration is limited to {ENUM_BOUND} vertices");
    let mut level: Vec<Rows> = vec![Vec::new()];
    for k in 0..n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 0u16..(1u16 << k) {
                let mut rows = g.clone();
                for (u, r) in rows.iter_mut().enumerate() {
                    *r |= (mask >> u & 1) << k;
                }
                rows.push(mask);
                if seen.insert(canonical(&rows)) {
                    next.push(rows);
                }
            }
        }
        level = next;
    }
    level
        .iter()
        .map(|rows| {
            let mut e = Vec::new();
            for (i, r) in rows.iter().enumerate() {
                for j in i + 1..rows.len() {
                    if r >> j & 1 == 1 {
                        e.push((i, j));
                    }
                }
            }
            e
        })
        .collect()
}

/// All isomorphism classes on `n` vertices with every vertex labelled `label`.
pub fn labeled_graphs(n: usize, label: GroupLabel) -> Vec<LabeledGraph> {
    graphs_up_to_iso(n).iter().map(|e| catalog::from_index_edges(n, e, label.clone())).collect()
}

/// G(n, p) sample with Z labels.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> LabeledGraph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    catalog::from_index_edges(n, &e, GroupLabel::z())
}

/// Random graph with Z labels in which no two vertices share a star.
pub fn random_reduced_graph(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize) -> LabeledGraph {
    loop {
        let n = rng.gen_range(min_n..=max_n);
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(rng, n, p);
        if g.is_reduced() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=6).map(|n| graphs_up_to_iso(n).len()).collect();
        assert_eq!(counts, [1, 2, 4, 11, 34, 156]);
    }
}
