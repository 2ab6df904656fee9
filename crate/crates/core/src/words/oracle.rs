//! Brute-force word problem: explore all words reachable by swapping adjacent commuting
//! syllables, merging adjacent syllables of one vertex and deleting trivial syllables.
//!
//! Swaps never change the element and merges only shorten, so exploring the swap class of the
//! current word and restarting after every merge ends in the full swap class of a reduced word.

use super::{Group, Syllable};
use crate::error::{capability, Result};
use std::collections::{BTreeSet, HashSet, VecDeque};

/// Default cap on the number of words held in one swap class.
pub const ORACLE_CAP: usize = 500_000;

fn trivial(group: &Group, s: &Syllable) -> bool {
    let n = group.order(s.vertex);
    s.exp == 0 || (n > 0 && s.exp.rem_euclid(n) == 0)
}

/// A word one merge or deletion shorter than `w`, if any.
fn shorten(group: &Group, w: &[Syllable]) -> Option<Vec<Syllable>> {
    if let Some(i) = w.iter().position(|s| trivial(group, s)) {
        let mut out = w.to_vec();
        out.remove(i);
        return Some(out);
    }
    let i = (0..w.len().saturating_sub(1)).find(|&i| w[i].vertex == w[i + 1].vertex)?;
    let mut out = w.to_vec();
    out[i].exp += out[i + 1].exp;
    out.remove(i + 1);
    if trivial(group, &out[i]) {
        out.remove(i);
    }
    Some(out)
}

/// The swap class of the reduced words of the element spelled by `word`.
pub fn reduced_class(group: &Group, word: &[Syllable], cap: usize) -> Result<BTreeSet<Vec<Syllable>>> {
    let mut current = word.to_vec();
    'restart: loop {
        let mut seen: HashSet<Vec<Syllable>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(current.clone());
        queue.push_back(current.clone());
        while let Some(w) = queue.pop_front() {
            if let Some(shorter) = shorten(group, &w) {
                current = shorter;
                continue 'restart;
            }
            for i in 0..w.len().saturating_sub(1) {
                if group.commute(w[i].vertex, w[i + 1].vertex) {
                    let mut s = w.clone();
                    s.swap(i, i + 1);
                    if seen.insert(s.clone()) {
                        if seen.len() > cap {
                            return capability(format!("rewriting closure exceeded {cap} words"));
                        }
                        queue.push_back(s);
                    }
                }
            }
        }
        return Ok(canonical_exponents(group, seen));
    }
}

/// Exponents of a reduced class, normalized the same way the normal form stores them.
fn canonical_exponents(group: &Group, class: HashSet<Vec<Syllable>>) -> BTreeSet<Vec<Syllable>> {
    class
        .into_iter()
        .map(|w| {
            w.into_iter()
                .map(|s| {
                    let n = group.order(s.vertex);
                    Syllable { vertex: s.vertex, exp: if n > 0 { s.exp.rem_euclid(n) } else { s.exp } }
                })
                .collect()
        })
        .collect()
}

/// Whether two words spell the same element.
pub fn oracle_equal(group: &Group, u: &[Syllable], v: &[Syllable], cap: usize) -> Result<bool> {
    let cu = reduced_class(group, u, cap)?;
    let first = cu.iter().next().cloned().unwrap_or_default();
    let cv = reduced_class(group, v, cap)?;
    Ok(cv.contains(&first) && cu.len() == cv.len())
}

/// The vertex-lexicographically least reduced word of the element.
pub fn oracle_normal_form(group: &Group, word: &[Syllable], cap: usize) -> Result<Vec<Syllable>> {
    let class = reduced_class(group, word, cap)?;
    Ok(class
        .into_iter()
        .min_by(|a, b| a.iter().map(|s| s.vertex).cmp(b.iter().map(|s| s.vertex)))
        .unwrap_or_default())
}
