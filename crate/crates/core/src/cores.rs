//! Weak and redundant vertices, the minimal core, the core, cyclic classes and the extended core.
//!
//! A vertex `v` is weak when its label is elementarily equivalent to Z and some set `W` of
//! non-neighbours of `v` (possibly containing `v`) has `⋂_{w∈W} st(w) = lk(v)`. It is redundant
//! when such a `W` exists with `v ∉ W`.

use crate::bitset::VSet;
use crate::error::{capability, Result};
use crate::graph_model::{labeled_iso, GraphJson, GroupLabel, LabeledGraph};
use crate::reduction::{self, combinations, Mode, ReductionReport, ReductionReportJson};
use rand::seq::IteratorRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Subset checks spent on an exhaustive smallest-witness search before falling back to
/// greedy minimisation of the full candidate set.
const WITNESS_SEARCH_BUDGET: usize = 1 << 20;

/// Largest vertex count for which cyclic classes enumerate supports.
pub const SUPPORT_BOUND: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCert {
    pub vertex: String,
    pub witnesses: Vec<String>,
}

fn intersect_stars(g: &LabeledGraph, w: &VSet) -> VSet {
    w.iter().fold(g.all(), |acc, u| acc.and(&g.st(u)))
}

/// Non-neighbours of `v` (including `v`) whose star contains `lk(v)`.
fn witness_pool(g: &LabeledGraph, v: usize) -> VSet {
    let lk = g.lk(v);
    VSet::from_iter((0..g.n()).filter(|&w| !lk.contains(w) && lk.is_subset(&g.st(w))))
}

fn is_witness(g: &LabeledGraph, v: usize, w: &VSet) -> bool {
    !w.is_empty() && intersect_stars(g, w) == g.lk(v)
}

/// Smallest subset of `pool` meeting `ok`, searched by size then lexicographically.
/// Falls back to greedy shrinking of `pool` once the budget is spent.
fn smallest_subset(pool: &[usize], ok: impl Fn(&VSet) -> bool) -> Option<VSet> {
    let all = VSet::from_iter(pool.iter().copied());
    if !ok(&all) {
        return None;
    }
    let mut spent = 0usize;
    for k in 1..=pool.len() {
        let mut found = None;
        let exhausted = combinations(pool.len(), k, |comb| {
            spent += 1;
            let s = VSet::from_iter(comb.iter().map(|&i| pool[i]));
            if ok(&s) {
                found = Some(s);
                return false;
            }
            spent < WITNESS_SEARCH_BUDGET
        });
        if found.is_some() {
            return found;
        }
        if !exhausted {
            break;
        }
    }
    let mut cur = all;
    for &u in pool {
        let smaller = cur.without(u);
        if ok(&smaller) {
            cur = smaller;
        }
    }
    Some(cur)
}

/// Smallest witness with `v ∉ W`, if any.
fn redundant_witness(g: &LabeledGraph, v: usize) -> Option<VSet> {
    if !g.label(v).flags().eq_z {
        return None;
    }
    let pool = witness_pool(g, v).without(v).to_vec();
    smallest_subset(&pool, |s| is_witness(g, v, s))
}

/// Smallest witness for `v`, preferring sets that avoid `v` itself.
pub fn weak_witness(g: &LabeledGraph, v: usize) -> Option<VSet> {
    if !g.label(v).flags().eq_z {
        return None;
    }
    let pool = witness_pool(g, v);
    if !is_witness(g, v, &pool) {
        return None;
    }
    if let Some(w) = redundant_witness(g, v) {
        let with_v = smallest_subset(&pool.without(v).to_vec(), |s| is_witness(g, v, &s.with(v)));
        return Some(match with_v {
            Some(s) if s.len() + 1 < w.len() => s.with(v),
            _ => w,
        });
    }
    let rest = pool.without(v).to_vec();
    smallest_subset(&rest, |s| is_witness(g, v, &s.with(v))).map(|s| s.with(v))
}

pub fn is_weak(g: &LabeledGraph, v: usize) -> bool {
    g.label(v).flags().eq_z && is_witness(g, v, &witness_pool(g, v))
}

pub fn is_redundant(g: &LabeledGraph, v: usize) -> bool {
    g.label(v).flags().eq_z && is_witness(g, v, &witness_pool(g, v).without(v))
}

pub fn weak_set(g: &LabeledGraph) -> VSet {
    VSet::from_iter((0..g.n()).filter(|&v| is_weak(g, v)))
}

pub fn redundant_set(g: &LabeledGraph) -> VSet {
    VSet::from_iter((0..g.n()).filter(|&v| is_redundant(g, v)))
}

pub fn weak_vertices(g: &LabeledGraph) -> Vec<WitnessCert> {
    (0..g.n())
        .filter_map(|v| {
            weak_witness(g, v).map(|w| WitnessCert { vertex: g.name(v).to_string(), witnesses: g.set_names(&w) })
        })
        .collect()
}

pub fn redundant_vertices(g: &LabeledGraph) -> Vec<String> {
    g.set_names(&redundant_set(g))
}

/// Checks a certificate against `g`: all witnesses are non-neighbours and their stars meet in the link.
pub fn verify_witness(g: &LabeledGraph, cert: &WitnessCert) -> bool {
    let Some(v) = g.index_of(&cert.vertex) else { return false };
    let Ok(w) = g.set_of(&cert.witnesses.iter().map(String::as_str).collect::<Vec<_>>()) else { return false };
    g.label(v).flags().eq_z && !w.intersects(&g.lk(v)) && is_witness(g, v, &w)
}

fn dinf_rule(l: &GroupLabel) -> GroupLabel {
    if l.flags().eq_dinf {
        GroupLabel::dinf()
    } else {
        l.clone()
    }
}

/// Induced subgraph on the non-weak vertices.
pub fn min_core(g: &LabeledGraph) -> LabeledGraph {
    g.induced(&g.all().minus(&weak_set(g))).relabel(|_, l| dinf_rule(l))
}

#[derive(Clone, Debug)]
pub struct CoreReport {
    /// Positive reduction applied first; only [`core_of_reduced`] fills this in.
    pub reduction: Option<ReductionReport>,
    pub min_core: LabeledGraph,
    pub core: LabeledGraph,
    pub removed_redundant: Vec<String>,
    pub weak: Vec<WitnessCert>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoreReportJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionReportJson>,
    pub min_core: GraphJson,
    pub core: GraphJson,
    pub removed_redundant: Vec<String>,
    pub weak: Vec<WitnessCert>,
}

impl CoreReport {
    pub fn to_json(&self) -> CoreReportJson {
        CoreReportJson {
            reduction: self.reduction.as_ref().map(ReductionReport::to_json),
            min_core: self.min_core.to_json(),
            core: self.core.to_json(),
            removed_redundant: self.removed_redundant.clone(),
            weak: self.weak.clone(),
        }
    }
}

fn reduced_input(g: &LabeledGraph) -> Result<(LabeledGraph, Option<ReductionReport>)> {
    if g.is_reduced() {
        return Ok((g.clone(), None));
    }
    let rep = reduction::reduce(g, Mode::Positive)?;
    Ok((rep.output.clone(), Some(rep)))
}

fn core_with(base: &LabeledGraph, mut pick: impl FnMut(&VSet) -> usize) -> Result<CoreReport> {
    let weak = weak_set(base);
    let mut keep = base.all();
    let mut removed = Vec::new();
    loop {
        let cur = base.induced(&keep);
        let r = redundant_set(&cur);
        if r.is_empty() {
            break;
        }
        let local = pick(&r);
        let v = base.index(cur.name(local))?;
        keep.remove(v);
        removed.push(base.name(v).to_string());
    }
    let kept = keep.to_vec();
    let core = base.induced(&keep).relabel(|i, l| {
        if weak.contains(kept[i]) {
            GroupLabel::z()
        } else {
            dinf_rule(l)
        }
    });
    Ok(CoreReport { reduction: None, min_core: min_core(base), core, removed_redundant: removed, weak: weak_vertices(base) })
}

/// Removes the lexicographically least redundant vertex until none remain.
/// The graph is used as given; see [`core_of_reduced`] for the variant that reduces first.
pub fn core(g: &LabeledGraph) -> Result<CoreReport> {
    core_with(g, |r| r.first().expect("non-empty"))
}

/// [`core`] of the positive reduction of `g`, applied only when `g` is not reduced.
pub fn core_of_reduced(g: &LabeledGraph) -> Result<CoreReport> {
    let (base, red) = reduced_input(g)?;
    let mut rep = core(&base)?;
    rep.reduction = red;
    Ok(rep)
}

/// As [`core`], but each step removes a uniformly random redundant vertex.
pub fn core_random_order(g: &LabeledGraph, rng: &mut ChaCha8Rng) -> Result<CoreReport> {
    core_with(g, |r| r.iter().choose(rng).expect("non-empty"))
}

pub fn core_equal(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<bool> {
    Ok(labeled_iso(&core(g1)?.core, &core(g2)?.core)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicClass {
    pub link: Vec<String>,
    pub member_supports: Vec<Vec<String>>,
    pub singular_members: Vec<String>,
    pub multiplicity: u8,
}

/// A class of non-core vertices of the quotient sharing one link, in index form.
#[derive(Clone, Debug)]
struct RawClass {
    link: VSet,
    supports: Vec<VSet>,
    singular: VSet,
}

impl RawClass {
    /// Supports of every member, weak vertices included as singletons.
    fn members(&self) -> impl Iterator<Item = VSet> + '_ {
        self.supports.iter().copied().chain(self.singular.iter().map(VSet::singleton))
    }
}

fn torsion_free(g: &LabeledGraph) -> Result<()> {
    if let Some(v) = (0..g.n()).find(|&v| g.label(v).flags().has_order_2) {
        return capability(format!(
            "vertex {} has a label with elements of order 2; cyclic classes and the extended core cover torsion-free-of-order-2 labels only",
            g.name(v)
        ));
    }
    if g.n() > SUPPORT_BOUND {
        return capability(format!("cyclic classes enumerate supports only up to {SUPPORT_BOUND} vertices, got {}", g.n()));
    }
    Ok(())
}

/// Supports `Δ` (|Δ| ≥ 2, connected complement) grouped by link.
fn supports_by_link(g: &LabeledGraph) -> BTreeMap<VSet, Vec<VSet>> {
    let mut out: BTreeMap<VSet, Vec<VSet>> = BTreeMap::new();
    let n = g.n();
    let mut subsets: Vec<VSet> = (0u64..(1u64 << n))
        .filter(|m| m.count_ones() >= 2)
        .map(VSet::from_mask)
        .filter(|s| g.co_connected(s))
        .collect();
    subsets.sort_by_key(|s| (s.len(), s.to_vec()));
    for s in subsets {
        out.entry(g.link(&s)).or_default().push(s);
    }
    out
}

/// The quotient graph with one node per link class of supports: Γ-vertices keep their indices,
/// node `n + i` stands for `support_links[i]`.
struct Quotient {
    graph: LabeledGraph,
}

fn build_quotient(g: &LabeledGraph, support_classes: &[(VSet, Vec<VSet>)]) -> Result<Quotient> {
    let n = g.n();
    let mut names: Vec<String> = g.names().to_vec();
    let mut labels: Vec<GroupLabel> = g.labels().to_vec();
    for i in 0..support_classes.len() {
        names.push(format!("~class{i:03}"));
        labels.push(GroupLabel::z());
    }
    let mut edges: Vec<(usize, usize)> = g.edges();
    for (i, (link, _)) in support_classes.iter().enumerate() {
        for u in link.iter() {
            edges.push((u, n + i));
        }
        for (j, (_, supports2)) in support_classes.iter().enumerate().skip(i + 1) {
            if supports2.iter().any(|d| d.is_subset(link)) {
                edges.push((n + i, n + j));
            }
        }
    }
    // `from_indexed` sorts by name; the "~" prefix keeps class nodes after every valid vertex name.
    let graph = LabeledGraph::from_indexed(names, labels, &edges)?;
    Ok(Quotient { graph })
}

/// Weak in the quotient with every witness having a strictly larger link.
fn weak_with_larger_links(q: &LabeledGraph, m: usize) -> bool {
    let lk = q.lk(m);
    let pool = VSet::from_iter((0..q.n()).filter(|&w| {
        w != m && !lk.contains(w) && lk.is_subset(&q.st(w)) && lk.is_subset(&q.lk(w)) && lk != q.lk(w)
    }));
    !pool.is_empty() && intersect_stars(q, &pool) == lk
}

fn raw_classes(g: &LabeledGraph) -> Result<Vec<(RawClass, u8)>> {
    torsion_free(g)?;
    let weak = weak_set(g);
    let by_link = supports_by_link(g);
    let support_classes: Vec<(VSet, Vec<VSet>)> = by_link.iter().map(|(l, s)| (*l, s.clone())).collect();
    let q = build_quotient(g, &support_classes)?.graph;
    let n = g.n();

    let mut classes: BTreeMap<VSet, RawClass> = BTreeMap::new();
    let mut nodes: BTreeMap<VSet, usize> = BTreeMap::new();
    for (i, (l, s)) in support_classes.iter().enumerate() {
        classes.insert(*l, RawClass { link: *l, supports: s.clone(), singular: VSet::EMPTY });
        nodes.insert(*l, q.index(&format!("~class{i:03}"))?);
    }
    for v in weak.iter() {
        let l = g.lk(v);
        classes.entry(l).or_insert_with(|| RawClass { link: l, supports: Vec::new(), singular: VSet::EMPTY }).singular.insert(v);
    }
    let mut out = Vec::new();
    for (l, c) in classes {
        // Γ-vertices keep their indices in the quotient because class names sort last.
        let mut members: Vec<usize> = c.singular.iter().collect();
        debug_assert!(members.iter().all(|&v| v < n && q.name(v) == g.name(v)));
        if let Some(&node) = nodes.get(&l) {
            members.push(node);
        }
        let mult = if members.iter().any(|&m| weak_with_larger_links(&q, m)) { 1 } else { 2 };
        out.push((c, mult));
    }
    Ok(out)
}

/// Link classes of non-core vertices of the conjugacy quotient, with their multiplicities.
pub fn cyclic_classes(g: &LabeledGraph) -> Result<Vec<CyclicClass>> {
    Ok(raw_classes(g)?
        .into_iter()
        .map(|(c, m)| CyclicClass {
            link: g.set_names(&c.link),
            member_supports: c.supports.iter().map(|s| g.set_names(s)).collect(),
            singular_members: g.set_names(&c.singular),
            multiplicity: m,
        })
        .collect())
}

/// The graph before the final positive reduction: the minimal core plus
/// `multiplicity` fresh infinite cyclic vertices per class.
pub fn intermediate_graph(g: &LabeledGraph) -> Result<LabeledGraph> {
    let classes = raw_classes(g)?;
    let keep = g.all().minus(&weak_set(g));
    let core_idx = keep.to_vec();
    let mut names: Vec<String> = core_idx.iter().map(|&v| g.name(v).to_string()).collect();
    let mut labels: Vec<GroupLabel> = core_idx.iter().map(|&v| dinf_rule(g.label(v))).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (a, &u) in core_idx.iter().enumerate() {
        for (b, &w) in core_idx.iter().enumerate().skip(a + 1) {
            if g.has_edge(u, w) {
                edges.push((a, b));
            }
        }
    }
    let taken: std::collections::BTreeSet<String> = g.names().iter().cloned().collect();
    let mut copies: Vec<(usize, Vec<usize>)> = Vec::new();
    for (ci, (c, mult)) in classes.iter().enumerate() {
        let base = class_name(g, c);
        let mut ids = Vec::new();
        for k in 0..*mult {
            let mut name = if *mult == 1 { base.clone() } else { format!("{base}_{}", k + 1) };
            while taken.contains(&name) || names.contains(&name) {
                name.push('_');
            }
            ids.push(names.len());
            names.push(name);
            labels.push(GroupLabel::z());
        }
        for &id in &ids {
            for (a, &u) in core_idx.iter().enumerate() {
                if c.link.contains(u) {
                    edges.push((a, id));
                }
            }
        }
        copies.push((ci, ids));
    }
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let (ci, cj) = (&classes[i].0, &classes[j].0);
            if cj.members().any(|d| d.is_subset(&ci.link)) {
                for &a in &copies[i].1 {
                    for &b in &copies[j].1 {
                        edges.push((a, b));
                    }
                }
            }
        }
    }
    LabeledGraph::from_indexed(names, labels, &edges)
}

/// Name of a class vertex: the concatenated names of its largest member support.
fn class_name(g: &LabeledGraph, c: &RawClass) -> String {
    let widest = c.members().max_by_key(|s| (s.len(), std::cmp::Reverse(s.to_vec()))).expect("class has a member");
    g.set_names(&widest).concat()
}

/// Positive reduction of [`intermediate_graph`]; the input is positively reduced first if needed.
pub fn extended_core(g: &LabeledGraph) -> Result<LabeledGraph> {
    torsion_free(g)?;
    let (base, _) = reduced_input(g)?;
    Ok(reduction::reduce(&intermediate_graph(&base)?, Mode::Positive)?.output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::graph_model::isomorphic;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn weak_vertices_of_figure_graph() {
        let g = catalog::fig_gamma();
        let w = weak_vertices(&g);
        let vs: Vec<&str> = w.iter().map(|c| c.vertex.as_str()).collect();
        assert_eq!(vs, ["a1", "a2", "f"]);
        assert_eq!(w[0].witnesses, names(&["a2", "c"]));
        assert!(w.iter().all(|c| verify_witness(&g, c)));
        assert_eq!(redundant_vertices(&g), names(&["a1", "a2"]));
    }

    #[test]
    fn weak_vertices_of_small_families() {
        assert_eq!(weak_set(&catalog::cycle(4)).len(), 4);
        assert!(redundant_set(&catalog::cycle(4)).is_empty());
        assert_eq!(redundant_set(&catalog::edgeless(3)).len(), 3);
        let t = catalog::star(4);
        assert_eq!(weak_set(&t), t.all().without(0));
    }

    #[test]
    fn cores_of_figure_graph() {
        let rep = core(&catalog::fig_gamma()).unwrap();
        assert_eq!(rep.min_core.names(), names(&["b", "c", "d", "e", "x"]).as_slice());
        assert_eq!(rep.min_core.edge_count(), 5);
        assert_eq!(rep.core.names(), names(&["a2", "b", "c", "d", "e", "f", "x"]).as_slice());
        assert_eq!(rep.core.edge_count(), 7);
        assert_eq!(rep.removed_redundant, names(&["a1"]));
        assert!(rep.reduction.is_none());
    }

    #[test]
    fn cores_of_catalog_graphs() {
        let k = catalog::complete(4);
        assert!(isomorphic(&min_core(&k), &k).unwrap());
        assert_eq!(min_core(&catalog::edgeless(4)).n(), 0);
        assert_eq!(core(&catalog::edgeless(5)).unwrap().core.n(), 2);
        for n in 3..8 {
            let c = catalog::cycle(n);
            assert!(isomorphic(&core(&c).unwrap().core, &c).unwrap());
        }
        assert!(core_equal(&catalog::edgeless(2), &catalog::edgeless(5)).unwrap());
        assert!(!core_equal(&catalog::path(3), &catalog::cycle(4)).unwrap());
    }

    #[test]
    fn classes_of_figure_graph() {
        let g = catalog::fig_gamma();
        let cl = cyclic_classes(&g).unwrap();
        let find = |l: &[&str]| cl.iter().find(|c| c.link == names(l)).cloned();
        assert!(find(&["c"]).unwrap().member_supports.contains(&names(&["b", "d", "x"])));
        assert!(find(&["d"]).unwrap().member_supports.contains(&names(&["c", "e", "x"])));
        assert!(find(&[]).is_some());
        assert_eq!(find(&["b"]).unwrap().singular_members, names(&["a1", "a2"]));
    }

    #[test]
    fn classes_of_edgeless_two() {
        let cl = cyclic_classes(&catalog::edgeless(2)).unwrap();
        assert_eq!(cl.len(), 1);
        assert!(cl[0].link.is_empty());
        assert_eq!(cl[0].singular_members.len(), 2);
        assert_eq!(cl[0].member_supports, vec![names(&["v1", "v2"])]);
        assert_eq!(cl[0].multiplicity, 2);
        assert!(cyclic_classes(&catalog::complete(4)).unwrap().is_empty());
    }

    #[test]
    fn extended_core_keeps_cores() {
        for g in [catalog::fig_gamma(), catalog::edgeless(3), catalog::path(3), catalog::cycle(5), catalog::complete(3)] {
            let e = extended_core(&g).unwrap();
            let base = reduced_input(&g).unwrap().0;
            assert!(isomorphic(&min_core(&e), &min_core(&base)).unwrap(), "{g}");
            assert!(isomorphic(&core(&e).unwrap().core, &core_of_reduced(&g).unwrap().core).unwrap(), "{g}");
        }
    }

    #[test]
    fn extended_core_of_complete_graphs() {
        let k1 = catalog::complete(1);
        assert!(isomorphic(&extended_core(&k1).unwrap(), &k1).unwrap());
        for n in 2..6 {
            let k = catalog::complete(n);
            assert!(cyclic_classes(&k).unwrap().is_empty());
            let reduced = reduction::reduce(&k, Mode::Positive).unwrap().output;
            assert!(isomorphic(&extended_core(&k).unwrap(), &reduced).unwrap());
        }
    }

    #[test]
    fn extended_core_of_edgeless_graphs() {
        for n in 2..6 {
            let e = extended_core(&catalog::edgeless(n)).unwrap();
            assert!(isomorphic(&core(&e).unwrap().core, &catalog::edgeless(2)).unwrap());
        }
    }

    #[test]
    fn figure_intermediate_graph() {
        let i = intermediate_graph(&catalog::fig_gamma()).unwrap();
        for v in ["b", "c", "d", "e", "x", "bdx", "cex", "a1a2bcdefx"] {
            assert!(i.index_of(v).is_some(), "{v} missing from {i}");
        }
        let bdx = i.index("bdx").unwrap();
        assert_eq!(i.set_names(&i.lk(bdx)), names(&["c"]));
        // The figure draws one vertex each for the classes with links {b} and {e}; the
        // multiplicity rule gives two copies of each.
        for v in ["a1a2c_1", "a1a2c_2", "df_1", "df_2"] {
            assert!(i.index_of(v).is_some(), "{v} missing from {i}");
        }
        assert_eq!(i.n(), 12);
    }

    #[test]
    fn torsion_labels_rejected() {
        let g = catalog::edgeless_labeled(2, GroupLabel::z2());
        assert!(matches!(cyclic_classes(&g), Err(crate::GpError::Capability(_))));
    }
}
