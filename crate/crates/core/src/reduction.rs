//! Positive and almost-positive reduction: collapse join subgraphs Λ whose vertices share their star
//! outside Λ and whose join factors are single vertices or pairs of ℤ/2 vertices.

use crate::bitset::VSet;
use crate::error::{capability, Result};
use crate::graph_model::{labeled_iso, GraphJson, LabeledGraph, Morphism};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Above this many vertices the almost-positive search (exhaustive over subsets) refuses to run.
pub const ALMOST_POSITIVE_BOUND: usize = 20;
/// Largest number of candidates `find_collapsible` will list.
pub const CANDIDATE_LIST_BOUND: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Positive,
    AlmostPositive,
}

/// A collapsible Λ with its join split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub set: VSet,
    pub split: Vec<VSet>,
}

/// A factor is singular (one vertex) or a dihedral pair (two non-adjacent ℤ/2 vertices).
fn good_factor(g: &LabeledGraph, f: &VSet) -> bool {
    match f.len() {
        1 => true,
        2 => f.iter().all(|v| g.label(v).is_z2()),
        _ => false,
    }
}

/// Every member of `s` has the same star outside `s`.
pub fn same_outside_star(g: &LabeledGraph, s: &VSet) -> bool {
    let mut it = s.iter();
    let Some(first) = it.next() else { return true };
    let reference = g.st(first).minus(s);
    it.all(|v| g.st(v).minus(s) == reference)
}

/// Checks one set against the mode's definition, returning its split on success.
pub fn check_candidate(g: &LabeledGraph, s: &VSet, mode: Mode) -> Option<Candidate> {
    if s.len() < 2 || !same_outside_star(g, s) {
        return None;
    }
    let split = g.join_factors(s);
    let ok = match mode {
        Mode::Positive => split.iter().all(|f| good_factor(g, f)),
        Mode::AlmostPositive => split.iter().any(|f| good_factor(g, f)),
    };
    ok.then_some(Candidate { set: *s, split })
}

fn order_key(c: &VSet) -> (std::cmp::Reverse<usize>, Vec<usize>) {
    (std::cmp::Reverse(c.len()), c.to_vec())
}

/// Positive-mode groups: vertices sharing the extended star K, as singles (st = K)
/// and dihedral pairs {v,u} (st(v) ∪ {u} = st(u) ∪ {v} = K).
fn positive_groups(g: &LabeledGraph) -> Vec<Vec<VSet>> {
    let mut groups: BTreeMap<VSet, Vec<VSet>> = BTreeMap::new();
    for v in 0..g.n() {
        groups.entry(g.st(v)).or_default().push(VSet::singleton(v));
    }
    for v in 0..g.n() {
        if !g.label(v).is_z2() {
            continue;
        }
        for u in v + 1..g.n() {
            if g.has_edge(u, v) || !g.label(u).is_z2() {
                continue;
            }
            let k = g.st(v).with(u);
            if g.st(u).with(v) == k {
                groups.entry(k).or_default().push(VSet::from_iter([v, u]));
            }
        }
    }
    groups.into_values().filter(|items| items.iter().map(|i| i.len()).sum::<usize>() >= 2).collect()
}

/// All collapsible Λ in the mode, ordered by size descending then lexicographically.
pub fn find_collapsible(g: &LabeledGraph, mode: Mode) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    match mode {
        Mode::Positive => {
            for items in positive_groups(g) {
                if items.len() >= 21 || out.len() + (1usize << items.len()) > CANDIDATE_LIST_BOUND {
                    return capability("too many positive candidates to list");
                }
                for mask in 1u32..(1u32 << items.len()) {
                    let mut s = VSet::EMPTY;
                    for (k, it) in items.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            s = s.or(it);
                        }
                    }
                    if s.len() >= 2 {
                        out.push(check_candidate(g, &s, mode).expect("group unions are candidates"));
                    }
                }
            }
        }
        Mode::AlmostPositive => {
            let n = g.n();
            if n > ALMOST_POSITIVE_BOUND {
                return capability(format!("almost-positive search on {n} vertices exceeds {ALMOST_POSITIVE_BOUND}"));
            }
            for mask in 1u64..(1u64 << n) {
                if mask.count_ones() < 2 {
                    continue;
                }
                if let Some(c) = check_candidate(g, &VSet::from_mask(mask), mode) {
                    out.push(c);
                    if out.len() > CANDIDATE_LIST_BOUND {
                        return capability("too many almost-positive candidates to list");
                    }
                }
            }
        }
    }
    out.sort_by_key(|c| order_key(&c.set));
    Ok(out)
}

/// The first candidate of [`find_collapsible`] without listing the others.
pub fn first_collapsible(g: &LabeledGraph, mode: Mode) -> Result<Option<Candidate>> {
    match mode {
        Mode::Positive => {
            let best = positive_groups(g)
                .into_iter()
                .map(|items| items.iter().fold(VSet::EMPTY, |a, b| a.or(b)))
                .min_by_key(order_key);
            Ok(best.map(|s| check_candidate(g, &s, mode).expect("full groups are candidates")))
        }
        Mode::AlmostPositive => {
            let n = g.n();
            if n > ALMOST_POSITIVE_BOUND {
                return capability(format!("almost-positive search on {n} vertices exceeds {ALMOST_POSITIVE_BOUND}"));
            }
            for size in (2..=n).rev() {
                let mut comb: Vec<usize> = (0..size).collect();
                loop {
                    let s = VSet::from_iter(comb.iter().copied());
                    if let Some(c) = check_candidate(g, &s, mode) {
                        return Ok(Some(c));
                    }
                    if !next_combination(&mut comb, n) {
                        break;
                    }
                }
            }
            Ok(None)
        }
    }
}

/// Advances to the next k-subset of 0..n in lexicographic order.
pub fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Visits the k-subsets of 0..n in lexicographic order until `f` returns false.
/// Returns true when every subset was visited.
pub fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        if !f(&comb) {
            return false;
        }
        if !next_combination(&mut comb, n) {
            return true;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub lambda: Vec<String>,
    pub split: Vec<Vec<String>>,
    pub mode: Mode,
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub input: LabeledGraph,
    pub output: LabeledGraph,
    pub steps: Vec<ReductionStep>,
    pub morphism: Morphism,
    /// Whether every input label carries the theory flag the mode assumes.
    pub hypothesis_met: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepJson {
    pub lambda: Vec<String>,
    pub split: Vec<Vec<String>>,
    pub mode: Mode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionReportJson {
    pub input: GraphJson,
    pub output: GraphJson,
    pub steps: Vec<StepJson>,
    pub morphism: BTreeMap<String, String>,
    pub hypothesis_met: bool,
}

impl ReductionReport {
    pub fn to_json(&self) -> ReductionReportJson {
        ReductionReportJson {
            input: self.input.to_json(),
            output: self.output.to_json(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson { lambda: s.lambda.clone(), split: s.split.clone(), mode: s.mode })
                .collect(),
            morphism: self.morphism.named(),
            hypothesis_met: self.hypothesis_met,
        }
    }
}

fn hypothesis(g: &LabeledGraph, mode: Mode) -> bool {
    g.labels().iter().all(|l| match mode {
        Mode::Positive => l.flags().nontrivial_positive,
        Mode::AlmostPositive => l.flags().simple_ngap,
    })
}

fn collapse_candidate(g: &LabeledGraph, c: &Candidate, mode: Mode) -> Result<(LabeledGraph, Morphism, ReductionStep)> {
    let mut partition = vec![c.set];
    partition.extend(g.all().minus(&c.set).iter().map(VSet::singleton));
    let (q, m) = g.collapse(&partition)?;
    let step = ReductionStep {
        lambda: g.set_names(&c.set),
        split: c.split.iter().map(|f| g.set_names(f)).collect(),
        mode,
    };
    Ok((q, m, step))
}

/// Repeatedly collapses the first candidate until none is left.
pub fn reduce(g: &LabeledGraph, mode: Mode) -> Result<ReductionReport> {
    reduce_with(g, mode, |cur| first_collapsible(cur, mode))
}

fn reduce_with(
    g: &LabeledGraph,
    mode: Mode,
    mut pick: impl FnMut(&LabeledGraph) -> Result<Option<Candidate>>,
) -> Result<ReductionReport> {
    let mut cur = g.clone();
    let mut morphism = Morphism::identity(g);
    let mut steps = Vec::new();
    while let Some(c) = pick(&cur)? {
        let (q, m, step) = collapse_candidate(&cur, &c, mode)?;
        morphism = morphism.then(&m);
        steps.push(step);
        cur = q;
    }
    Ok(ReductionReport { input: g.clone(), output: cur, steps, morphism, hypothesis_met: hypothesis(g, mode) })
}

/// Reduction where each step collapses a uniformly random candidate.
pub fn reduce_random(g: &LabeledGraph, mode: Mode, rng: &mut ChaCha8Rng) -> Result<ReductionReport> {
    reduce_with(g, mode, |cur| {
        let all = find_collapsible(cur, mode)?;
        Ok(all.choose(rng).cloned())
    })
}

/// True iff `trials` randomized reductions all give pairwise isomorphic outputs.
pub fn reduction_unique(g: &LabeledGraph, mode: Mode, trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = reduce(g, mode)?.output;
    for _ in 0..trials.max(1) {
        let out = reduce_random(g, mode, &mut rng)?.output;
        if labeled_iso(&reference, &out)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_positive_reduced(g: &LabeledGraph) -> bool {
    positive_groups(g).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::graph_model::GroupLabel;

    fn brute_force(g: &LabeledGraph, mode: Mode) -> Vec<VSet> {
        let mut out: Vec<VSet> = (1u64..(1 << g.n()))
            .map(VSet::from_mask)
            .filter(|s| check_candidate(g, s, mode).is_some())
            .collect();
        out.sort_by_key(order_key);
        out
    }

    #[test]
    fn candidate_examples() {
        let e = catalog::path(2);
        let c = find_collapsible(&e, Mode::Positive).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].set, e.all());
        assert!(find_collapsible(&catalog::path(3), Mode::Positive).unwrap().is_empty());

        let cone = LabeledGraph::uniform(
            &["a", "v1", "v2", "v3", "v4"],
            &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1"), ("a", "v1"), ("a", "v2"), ("a", "v3"), ("a", "v4")],
            GroupLabel::z(),
        )
        .unwrap();
        let ap = find_collapsible(&cone, Mode::AlmostPositive).unwrap();
        let full = ap.iter().find(|c| c.set == cone.all()).unwrap();
        assert_eq!(full.split.len(), 3);
        assert!(!find_collapsible(&cone, Mode::Positive).unwrap().iter().any(|c| c.set == cone.all()));
    }

    #[test]
    fn positive_listing_matches_subset_enumeration() {
        let mut graphs = vec![catalog::complete(4), catalog::cycle(4), catalog::fig_gamma()];
        graphs.push(LabeledGraph::uniform(&["e1", "e2", "e3", "e4"], &[], GroupLabel::z2()).unwrap());
        graphs.push(
            LabeledGraph::uniform(
                &["a", "e1", "e2", "t"],
                &[("a", "e1"), ("a", "e2"), ("t", "e1"), ("t", "e2"), ("a", "t")],
                GroupLabel::z2(),
            )
            .unwrap(),
        );
        for g in graphs {
            for mode in [Mode::Positive, Mode::AlmostPositive] {
                let fast: Vec<VSet> = find_collapsible(&g, mode).unwrap().into_iter().map(|c| c.set).collect();
                assert_eq!(fast, brute_force(&g, mode), "{g} {mode:?}");
                assert_eq!(first_collapsible(&g, mode).unwrap().map(|c| c.set), fast.first().copied());
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&catalog::complete(3), Mode::Positive).unwrap();
        assert_eq!(r.output.n(), 1);
        assert_eq!(r.output.label(0), &GroupLabel::zm(3).unwrap());
        let c4 = catalog::cycle(4);
        let r = reduce(&c4, Mode::Positive).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.output, c4);
        let e4 = LabeledGraph::uniform(&["e1", "e2", "e3", "e4"], &[], GroupLabel::z2()).unwrap();
        let r = reduce(&e4, Mode::Positive).unwrap();
        assert_eq!(r.output.n(), 2);
        assert_eq!(r.output.edge_count(), 0);
        assert!(r.output.labels().iter().all(|l| *l == GroupLabel::dinf()));
        assert!(r.morphism.is_full().unwrap().full);
        assert!(reduce(&r.output, Mode::Positive).unwrap().steps.is_empty());
    }

    #[test]
    fn uniqueness_examples() {
        assert!(reduction_unique(&catalog::path(2), Mode::Positive, 5, 1).unwrap());
        let two_edges = LabeledGraph::uniform(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")], GroupLabel::z()).unwrap();
        assert!(reduction_unique(&two_edges, Mode::Positive, 10, 2).unwrap());
    }
}
