//! Group-labelled simplicial graphs and the basic graph operations the rest of the crate builds on.
//!
//! Vertices are stored sorted by name, so vertex indices follow the lexicographic order of names.
//! A "path of length n" always means n edges and n + 1 vertices.

use crate::bitset::{VSet, MAX_VERTICES};
use crate::error::{capability, input, GpError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Exact-search bound for [`LabeledGraph::clique_number`].
pub const CLIQUE_BOUND: usize = 16;
/// Exact-search bound for [`labeled_iso`].
pub const ISO_BOUND: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelKind {
    InfiniteCyclic,
    FiniteCyclic(u32),
    FreeAbelian(u32),
    InfiniteDihedral,
    Opaque(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelFlags {
    #[serde(rename = "eq_Z")]
    pub eq_z: bool,
    #[serde(rename = "eq_Dinf")]
    pub eq_dinf: bool,
    pub nontrivial_positive: bool,
    pub simple_ngap: bool,
    pub has_order_2: bool,
}

/// A vertex group: a concrete kind plus the theory flags the graph algorithms consult.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupLabel {
    kind: LabelKind,
    flags: LabelFlags,
}

impl GroupLabel {
    pub fn z() -> GroupLabel {
        GroupLabel {
            kind: LabelKind::InfiniteCyclic,
            flags: LabelFlags { eq_z: true, eq_dinf: false, nontrivial_positive: true, simple_ngap: true, has_order_2: false },
        }
    }

    pub fn zn(n: u32) -> Result<GroupLabel> {
        if n < 2 {
            return input(format!("finite cyclic order must be at least 2, got {n}"));
        }
        Ok(GroupLabel {
            kind: LabelKind::FiniteCyclic(n),
            flags: LabelFlags {
                eq_z: false,
                eq_dinf: false,
                nontrivial_positive: true,
                simple_ngap: true,
                has_order_2: n.is_multiple_of(2),
            },
        })
    }

    pub fn z2() -> GroupLabel {
        GroupLabel::zn(2).expect("2 is a valid order")
    }

    pub fn zm(m: u32) -> Result<GroupLabel> {
        if m < 1 {
            return input("free abelian rank must be at least 1");
        }
        Ok(GroupLabel {
            kind: LabelKind::FreeAbelian(m),
            flags: LabelFlags { eq_z: m == 1, eq_dinf: false, nontrivial_positive: true, simple_ngap: true, has_order_2: false },
        })
    }

    pub fn dinf() -> GroupLabel {
        GroupLabel {
            kind: LabelKind::InfiniteDihedral,
            flags: LabelFlags { eq_z: false, eq_dinf: true, nontrivial_positive: true, simple_ngap: true, has_order_2: true },
        }
    }

    pub fn opaque(tag: &str, flags: LabelFlags) -> Result<GroupLabel> {
        if tag.is_empty() {
            return input("opaque label needs a non-empty tag");
        }
        Ok(GroupLabel { kind: LabelKind::Opaque(tag.to_string()), flags })
    }

    pub fn kind(&self) -> &LabelKind {
        &self.kind
    }

    pub fn flags(&self) -> LabelFlags {
        self.flags
    }

    /// `Some(0)` for ℤ, `Some(n)` for ℤ/n, `None` otherwise.
    pub fn cyclic_order(&self) -> Option<u32> {
        match self.kind {
            LabelKind::InfiniteCyclic => Some(0),
            LabelKind::FiniteCyclic(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_z2(&self) -> bool {
        self.kind == LabelKind::FiniteCyclic(2)
    }

    /// Kind string of the JSON format.
    pub fn kind_string(&self) -> String {
        match &self.kind {
            LabelKind::InfiniteCyclic => "Z".into(),
            LabelKind::FiniteCyclic(n) => format!("Z/{n}"),
            LabelKind::FreeAbelian(m) => format!("Z^{m}"),
            LabelKind::InfiniteDihedral => "Dinf".into(),
            LabelKind::Opaque(_) => "opaque".into(),
        }
    }

    fn short(&self) -> String {
        match &self.kind {
            LabelKind::Opaque(t) => t.clone(),
            _ => self.kind_string(),
        }
    }

    /// Direct product of the given labels: free abelian ranks add, anything else becomes an opaque product.
    pub fn product(parts: &[GroupLabel]) -> GroupLabel {
        if parts.len() == 1 {
            return parts[0].clone();
        }
        let mut rank = 0u32;
        let mut all_free_abelian = true;
        for p in parts {
            match p.kind {
                LabelKind::InfiniteCyclic => rank += 1,
                LabelKind::FreeAbelian(m) => rank += m,
                _ => all_free_abelian = false,
            }
        }
        if all_free_abelian {
            return GroupLabel::zm(rank).expect("rank is positive");
        }
        let mut names: Vec<String> = parts.iter().map(|p| p.short()).collect();
        names.sort();
        let flags = LabelFlags {
            eq_z: false,
            eq_dinf: false,
            nontrivial_positive: parts.iter().all(|p| p.flags.nontrivial_positive),
            simple_ngap: parts.iter().any(|p| p.flags.simple_ngap),
            has_order_2: parts.iter().any(|p| p.flags.has_order_2),
        };
        GroupLabel { kind: LabelKind::Opaque(format!("product:{}", names.join("x"))), flags }
    }

    /// Graph product over a directly indecomposable graph with at least two vertices.
    fn indecomposable(parts: &[GroupLabel]) -> GroupLabel {
        if parts.len() == 2 && parts.iter().all(|p| p.is_z2()) {
            return GroupLabel::dinf();
        }
        let mut names: Vec<String> = parts.iter().map(|p| p.short()).collect();
        names.sort();
        let flags = LabelFlags {
            eq_z: false,
            eq_dinf: false,
            nontrivial_positive: false,
            simple_ngap: false,
            has_order_2: parts.iter().any(|p| p.flags.has_order_2),
        };
        GroupLabel { kind: LabelKind::Opaque(format!("gp:{}", names.join("x"))), flags }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.short())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabelJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flags: Option<LabelFlags>,
}

impl LabelJson {
    pub fn from_label(l: &GroupLabel) -> LabelJson {
        match &l.kind {
            LabelKind::Opaque(t) => LabelJson { kind: "opaque".into(), tag: Some(t.clone()), flags: Some(l.flags) },
            _ => LabelJson { kind: l.kind_string(), tag: None, flags: None },
        }
    }

    pub fn to_label(&self) -> Result<GroupLabel> {
        let k = self.kind.trim();
        let parse_num = |s: &str| -> Result<u32> {
            s.parse::<u32>().map_err(|_| GpError::Input(format!("bad label kind {:?}", self.kind)))
        };
        if k == "Z" {
            Ok(GroupLabel::z())
        } else if k == "Dinf" {
            Ok(GroupLabel::dinf())
        } else if let Some(n) = k.strip_prefix("Z/") {
            GroupLabel::zn(parse_num(n)?)
        } else if let Some(m) = k.strip_prefix("Z^") {
            GroupLabel::zm(parse_num(m)?)
        } else if k == "opaque" {
            let tag = self.tag.as_deref().ok_or_else(|| GpError::Input("opaque label needs a tag".into()))?;
            GroupLabel::opaque(tag, self.flags.unwrap_or_default())
        } else {
            input(format!("unknown label kind {:?}", self.kind))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub label: LabelJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<(String, String)>,
}

pub fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighborhood {
    Link,
    Star,
}

/// A finite simplicial graph with one group label per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    names: Vec<String>,
    labels: Vec<GroupLabel>,
    adj: Vec<VSet>,
}

impl LabeledGraph {
    /// Builds from named vertices and name pairs; edges are deduplicated.
    pub fn new(vertices: Vec<(String, GroupLabel)>, edges: &[(String, String)]) -> Result<LabeledGraph> {
        let names: Vec<String> = vertices.iter().map(|(n, _)| n.clone()).collect();
        let mut pos = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return input(format!("invalid vertex id {n:?}"));
            }
            if pos.insert(n.clone(), i).is_some() {
                return input(format!("duplicate vertex id {n:?}"));
            }
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *pos.get(a).ok_or_else(|| GpError::Input(format!("edge endpoint {a:?} is not a vertex")))?;
            let ib = *pos.get(b).ok_or_else(|| GpError::Input(format!("edge endpoint {b:?} is not a vertex")))?;
            if ia == ib {
                return input(format!("loop at {a:?}"));
            }
            idx_edges.push((ia, ib));
        }
        let labels = vertices.into_iter().map(|(_, l)| l).collect();
        LabeledGraph::from_indexed(names, labels, &idx_edges)
    }

    /// Builds from parallel name/label vectors and index pairs, sorting vertices by name.
    pub fn from_indexed(names: Vec<String>, labels: Vec<GroupLabel>, edges: &[(usize, usize)]) -> Result<LabeledGraph> {
        let n = names.len();
        if n > MAX_VERTICES {
            return capability(format!("{n} vertices exceed the supported maximum of {MAX_VERTICES}"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        for w in order.windows(2) {
            if names[w[0]] == names[w[1]] {
                return input(format!("duplicate vertex id {:?}", names[w[0]]));
            }
        }
        let mut new_of = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let mut adj = vec![VSet::EMPTY; n];
        for &(a, b) in edges {
            if a == b {
                return input(format!("loop at {:?}", names[a]));
            }
            adj[new_of[a]].insert(new_of[b]);
            adj[new_of[b]].insert(new_of[a]);
        }
        let sorted_names = order.iter().map(|&o| names[o].clone()).collect();
        let sorted_labels = order.iter().map(|&o| labels[o].clone()).collect();
        Ok(LabeledGraph { names: sorted_names, labels: sorted_labels, adj })
    }

    /// Convenience constructor with one label for every vertex.
    pub fn uniform(names: &[&str], edges: &[(&str, &str)], label: GroupLabel) -> Result<LabeledGraph> {
        let vs = names.iter().map(|n| (n.to_string(), label.clone())).collect();
        let es: Vec<(String, String)> = edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        LabeledGraph::new(vs, &es)
    }

    pub fn from_json(j: &GraphJson) -> Result<LabeledGraph> {
        let mut vs = Vec::with_capacity(j.vertices.len());
        for v in &j.vertices {
            vs.push((v.id.clone(), v.label.to_label()?));
        }
        LabeledGraph::new(vs, &j.edges)
    }

    pub fn parse_json(text: &str) -> Result<LabeledGraph> {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| GpError::Input(format!("graph JSON: {e}")))?;
        LabeledGraph::from_json(&j)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: (0..self.n())
                .map(|i| VertexJson { id: self.names[i].clone(), label: LabelJson::from_label(&self.labels[i]) })
                .collect(),
            edges: self.edges().into_iter().map(|(a, b)| (self.names[a].clone(), self.names[b].clone())).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn label(&self, i: usize) -> &GroupLabel {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[GroupLabel] {
        &self.labels
    }

    pub fn adj(&self, i: usize) -> VSet {
        self.adj[i]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn all(&self) -> VSet {
        VSet::full(self.n())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| GpError::Input(format!("unknown vertex {name:?}")))
    }

    pub fn set_of(&self, names: &[&str]) -> Result<VSet> {
        let mut s = VSet::EMPTY;
        for n in names {
            s.insert(self.index(n)?);
        }
        Ok(s)
    }

    pub fn set_names(&self, s: &VSet) -> Vec<String> {
        s.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for b in self.adj[a].iter() {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Vertices adjacent to every member of `s`, excluding `s`.
    pub fn link(&self, s: &VSet) -> VSet {
        let mut acc = self.all();
        for v in s.iter() {
            acc = acc.and(&self.adj[v]);
        }
        acc.minus(s)
    }

    pub fn star(&self, s: &VSet) -> VSet {
        self.link(s).or(s)
    }

    pub fn lk(&self, v: usize) -> VSet {
        self.adj[v]
    }

    pub fn st(&self, v: usize) -> VSet {
        self.adj[v].with(v)
    }

    /// Name-level link/star of a non-empty vertex set.
    pub fn neighborhood(&self, s: &[&str], kind: Neighborhood) -> Result<Vec<String>> {
        if s.is_empty() {
            return input("neighborhood of an empty set");
        }
        let set = self.set_of(s)?;
        let r = match kind {
            Neighborhood::Link => self.link(&set),
            Neighborhood::Star => self.star(&set),
        };
        Ok(self.set_names(&r))
    }

    pub fn complement(&self) -> LabeledGraph {
        let full = self.all();
        let adj = (0..self.n()).map(|i| full.minus(&self.adj[i]).without(i)).collect();
        LabeledGraph { names: self.names.clone(), labels: self.labels.clone(), adj }
    }

    /// Induced subgraph; names keep their relative order, so indices are the rank within `s`.
    pub fn induced(&self, s: &VSet) -> LabeledGraph {
        let keep = s.to_vec();
        let mut pos = vec![usize::MAX; self.n()];
        for (k, &v) in keep.iter().enumerate() {
            pos[v] = k;
        }
        let adj = keep
            .iter()
            .map(|&v| VSet::from_iter(self.adj[v].and(s).iter().map(|u| pos[u])))
            .collect();
        LabeledGraph {
            names: keep.iter().map(|&v| self.names[v].clone()).collect(),
            labels: keep.iter().map(|&v| self.labels[v].clone()).collect(),
            adj,
        }
    }

    pub fn relabel(&self, f: impl Fn(usize, &GroupLabel) -> GroupLabel) -> LabeledGraph {
        let labels = (0..self.n()).map(|i| f(i, &self.labels[i])).collect();
        LabeledGraph { names: self.names.clone(), labels, adj: self.adj.clone() }
    }

    /// Connected components of the subgraph induced on `s`, ordered by least member.
    pub fn components(&self, s: &VSet) -> Vec<VSet> {
        let mut left = *s;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VSet::EMPTY;
                for v in frontier.iter() {
                    next = next.or(&self.adj[v].and(s));
                }
                frontier = next.minus(&comp);
                comp = comp.or(&frontier);
            }
            left = left.minus(&comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected_on(&self, s: &VSet) -> bool {
        self.components(s).len() <= 1
    }

    /// Join decomposition of the subgraph induced on `s`: components of its complement.
    pub fn join_factors(&self, s: &VSet) -> Vec<VSet> {
        let mut left = *s;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VSet::EMPTY;
                for v in frontier.iter() {
                    next = next.or(&s.minus(&self.adj[v]).without(v));
                }
                frontier = next.minus(&comp);
                comp = comp.or(&frontier);
            }
            left = left.minus(&comp);
            out.push(comp);
        }
        out
    }

    /// Whether the complement of the subgraph induced on `s` is connected.
    pub fn co_connected(&self, s: &VSet) -> bool {
        self.join_factors(s).len() == 1
    }

    /// No two vertices share a star.
    pub fn is_reduced(&self) -> bool {
        let mut stars: Vec<VSet> = (0..self.n()).map(|v| self.st(v)).collect();
        stars.sort();
        stars.windows(2).all(|w| w[0] != w[1])
    }

    /// AP_n: the complement has no induced path on n + 1 vertices.
    pub fn check_ap(&self, n: usize) -> ApCheck {
        let c = self.complement();
        match c.find_induced_path(n + 1) {
            Some(p) => ApCheck { holds: false, witness: Some(p.iter().map(|&i| self.names[i].clone()).collect()) },
            None => ApCheck { holds: true, witness: None },
        }
    }

    /// Smallest n ≥ 1 with AP_n, if it is at most `cap`.
    pub fn min_ap(&self, cap: usize) -> Option<usize> {
        let c = self.complement();
        let longest = c.longest_induced_path(cap + 1);
        if longest > cap {
            None
        } else {
            Some(longest.max(1))
        }
    }

    /// An induced path on exactly `k` vertices, if any.
    pub fn find_induced_path(&self, k: usize) -> Option<Vec<usize>> {
        if k == 0 {
            return Some(Vec::new());
        }
        let mut path = Vec::with_capacity(k);
        for s in 0..self.n() {
            path.push(s);
            if self.extend_path(&mut path, VSet::singleton(s), k) {
                return Some(path);
            }
            path.pop();
        }
        None
    }

    // `blocked` = path ∪ neighbours of every path vertex except the last.
    fn extend_path(&self, path: &mut Vec<usize>, blocked: VSet, k: usize) -> bool {
        if path.len() == k {
            return true;
        }
        let last = *path.last().expect("non-empty path");
        let cand = self.adj[last].minus(&blocked);
        let next_blocked = blocked.or(&self.adj[last]);
        for w in cand.iter() {
            path.push(w);
            if self.extend_path(path, next_blocked.with(w), k) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// Vertex count of a longest induced path, stopping early once `cap` is reached.
    pub fn longest_induced_path(&self, cap: usize) -> usize {
        let mut best = 0;
        let mut path = Vec::with_capacity(cap);
        for s in 0..self.n() {
            path.push(s);
            self.longest_from(&mut path, VSet::singleton(s), cap, &mut best);
            path.pop();
            if best >= cap {
                break;
            }
        }
        best.min(cap)
    }

    fn longest_from(&self, path: &mut Vec<usize>, blocked: VSet, cap: usize, best: &mut usize) {
        *best = (*best).max(path.len());
        if *best >= cap {
            return;
        }
        let last = *path.last().expect("non-empty path");
        let cand = self.adj[last].minus(&blocked);
        let next_blocked = blocked.or(&self.adj[last]);
        for w in cand.iter() {
            path.push(w);
            self.longest_from(path, next_blocked.with(w), cap, best);
            path.pop();
            if *best >= cap {
                return;
            }
        }
    }

    /// Size of a maximum clique; exact, bounded by [`CLIQUE_BOUND`].
    pub fn clique_number(&self) -> Result<usize> {
        self.clique_number_bounded(CLIQUE_BOUND)
    }

    pub fn clique_number_bounded(&self, bound: usize) -> Result<usize> {
        if self.n() > bound {
            return capability(format!("clique search on {} vertices exceeds the bound {bound}", self.n()));
        }
        let mut best = 0;
        self.clique_bb(0, self.all(), &mut best);
        Ok(best)
    }

    fn clique_bb(&self, size: usize, cand: VSet, best: &mut usize) {
        if cand.is_empty() {
            *best = (*best).max(size);
            return;
        }
        if size + cand.len() <= *best {
            return;
        }
        let mut rest = cand;
        while let Some(v) = rest.first() {
            if size + rest.len() <= *best {
                return;
            }
            rest.remove(v);
            self.clique_bb(size + 1, rest.and(&self.adj[v]), best);
        }
        *best = (*best).max(size);
    }

    /// Label of the vertex replacing `part`: the direct product over its join factors,
    /// where a factor made of two ℤ/2 vertices is ℤ/2 ∗ ℤ/2 = D∞.
    pub fn merged_label(&self, part: &VSet) -> GroupLabel {
        let factor_labels: Vec<GroupLabel> = self
            .join_factors(part)
            .iter()
            .map(|f| {
                let ls: Vec<GroupLabel> = f.iter().map(|v| self.labels[v].clone()).collect();
                if ls.len() == 1 {
                    ls[0].clone()
                } else {
                    GroupLabel::indecomposable(&ls)
                }
            })
            .collect();
        GroupLabel::product(&factor_labels)
    }

    /// Quotient by a partition of the vertex set; rejects quotients that are not full.
    pub fn collapse(&self, partition: &[VSet]) -> Result<(LabeledGraph, Morphism)> {
        let n = self.n();
        let mut part_of = vec![usize::MAX; n];
        for (k, p) in partition.iter().enumerate() {
            if p.is_empty() {
                return input("empty part in partition");
            }
            for v in p.iter() {
                if v >= n || part_of[v] != usize::MAX {
                    return input("partition does not cover the vertices exactly once");
                }
                part_of[v] = k;
            }
        }
        if part_of.contains(&usize::MAX) {
            return input("partition does not cover the vertices exactly once");
        }
        let m = partition.len();
        let mut quotient_edges = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let mut edge = None;
                let mut non_edge = None;
                for u in partition[a].iter() {
                    for v in partition[b].iter() {
                        if self.has_edge(u, v) {
                            edge.get_or_insert((u, v));
                        } else {
                            non_edge.get_or_insert((u, v));
                        }
                    }
                }
                match (edge, non_edge) {
                    (Some(_), Some((u, v))) => return Err(GpError::NotFull(self.names[u].clone(), self.names[v].clone())),
                    (Some(_), None) => quotient_edges.push((a, b)),
                    _ => {}
                }
            }
        }
        let mut taken: std::collections::BTreeSet<String> = partition
            .iter()
            .filter(|p| p.len() == 1)
            .map(|p| self.names[p.first().expect("non-empty")].clone())
            .collect();
        let mut names = Vec::with_capacity(m);
        let mut labels = Vec::with_capacity(m);
        for p in partition {
            let members = p.to_vec();
            let name = if members.len() == 1 {
                self.names[members[0]].clone()
            } else {
                let mut name = members.iter().map(|&v| self.names[v].as_str()).collect::<Vec<_>>().join("_");
                while taken.contains(&name) {
                    name.push('_');
                }
                taken.insert(name.clone());
                name
            };
            names.push(name);
            labels.push(self.merged_label(p));
        }
        let target = LabeledGraph::from_indexed(names.clone(), labels, &quotient_edges)?;
        let map = (0..n)
            .map(|v| target.index_of(&names[part_of[v]]).expect("quotient vertex exists"))
            .collect();
        let morphism = Morphism { source: self.clone(), target: target.clone(), map };
        Ok((target, morphism))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApCheck {
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

/// A total vertex map between two labelled graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: LabeledGraph,
    pub target: LabeledGraph,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullCheck {
    pub full: bool,
    pub violation: Option<(String, String)>,
}

impl Morphism {
    pub fn identity(g: &LabeledGraph) -> Morphism {
        Morphism { source: g.clone(), target: g.clone(), map: (0..g.n()).collect() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Morphism) -> Morphism {
        Morphism { source: self.source.clone(), target: next.target.clone(), map: self.map.iter().map(|&v| next.map[v]).collect() }
    }

    pub fn named(&self) -> BTreeMap<String, String> {
        self.map
            .iter()
            .enumerate()
            .map(|(v, &t)| (self.source.name(v).to_string(), self.target.name(t).to_string()))
            .collect()
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let mut inv = vec![usize::MAX; self.target.n()];
        for (v, &t) in self.map.iter().enumerate() {
            if inv[t] != usize::MAX {
                return None;
            }
            inv[t] = v;
        }
        if inv.contains(&usize::MAX) {
            return None;
        }
        Some(Morphism { source: self.target.clone(), target: self.source.clone(), map: inv })
    }

    /// For φ(u) ≠ φ(v): (u,v) is an edge iff (φ(u),φ(v)) is.
    pub fn is_full(&self) -> Result<FullCheck> {
        let mut hit = VSet::EMPTY;
        if self.map.len() != self.source.n() {
            return input("morphism is not total");
        }
        for &t in &self.map {
            if t >= self.target.n() {
                return input("morphism maps outside the target");
            }
            hit.insert(t);
        }
        if hit.len() != self.target.n() {
            return input("morphism is not surjective");
        }
        let n = self.source.n();
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = (self.map[u], self.map[v]);
                if a != b && self.source.has_edge(u, v) != self.target.has_edge(a, b) {
                    return Ok(FullCheck {
                        full: false,
                        violation: Some((self.source.name(u).to_string(), self.source.name(v).to_string())),
                    });
                }
            }
        }
        Ok(FullCheck { full: true, violation: None })
    }
}

pub fn is_full_morphism(m: &Morphism) -> Result<FullCheck> {
    m.is_full()
}

/// Invariant fingerprint compared before any isomorphism search.
fn iso_fingerprint(g: &LabeledGraph) -> Vec<(GroupLabel, usize, Vec<usize>)> {
    let mut f: Vec<(GroupLabel, usize, Vec<usize>)> = (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.adj(v).iter().map(|u| g.degree(u)).collect();
            nd.sort();
            (g.label(v).clone(), g.degree(v), nd)
        })
        .collect();
    f.sort();
    f
}

/// Label-preserving isomorphism, lexicographically least as a sequence of images; bounded by [`ISO_BOUND`].
pub fn labeled_iso(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<Option<Morphism>> {
    labeled_iso_bounded(g1, g2, ISO_BOUND)
}

pub fn labeled_iso_bounded(g1: &LabeledGraph, g2: &LabeledGraph, bound: usize) -> Result<Option<Morphism>> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    if iso_fingerprint(g1) != iso_fingerprint(g2) {
        return Ok(None);
    }
    if g1.n() > bound {
        return capability(format!("isomorphism search on {} vertices exceeds the bound {bound}", g1.n()));
    }
    let n = g1.n();
    let mut map = vec![usize::MAX; n];
    let mut used = VSet::EMPTY;
    if iso_extend(g1, g2, 0, &mut map, &mut used) {
        Ok(Some(Morphism { source: g1.clone(), target: g2.clone(), map }))
    } else {
        Ok(None)
    }
}

fn iso_extend(g1: &LabeledGraph, g2: &LabeledGraph, v: usize, map: &mut Vec<usize>, used: &mut VSet) -> bool {
    if v == g1.n() {
        return true;
    }
    for t in 0..g2.n() {
        if used.contains(t) || g1.label(v) != g2.label(t) || g1.degree(v) != g2.degree(t) {
            continue;
        }
        if (0..v).any(|u| g1.has_edge(u, v) != g2.has_edge(map[u], t)) {
            continue;
        }
        map[v] = t;
        used.insert(t);
        if iso_extend(g1, g2, v + 1, map, used) {
            return true;
        }
        used.remove(t);
        map[v] = usize::MAX;
    }
    false
}

pub fn isomorphic(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<bool> {
    Ok(labeled_iso(g1, g2)?.is_some())
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = (0..self.n()).map(|i| format!("{}:{}", self.names[i], self.labels[i])).collect();
        let es: Vec<String> = self.edges().iter().map(|&(a, b)| format!("{}-{}", self.names[a], self.names[b])).collect();
        write!(f, "[{}] {{{}}}", vs.join(" "), es.join(" "))
    }
}
