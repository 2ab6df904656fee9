//! Elements of graph products with cyclic vertex groups, kept in a canonical normal form.
//!
//! A word is a sequence of syllables `v^e`. Every element has reduced words (no two syllables of
//! one vertex can be shuffled next to each other), and its reduced words form one class under
//! swaps of adjacent commuting syllables. The canonical form is the lexicographically least member
//! of that class under the vertex order of the graph, so syntactic equality is group equality.
//!
//! Conventions: `x^w = w⁻¹ x w` and `[x, y] = x⁻¹ y⁻¹ x y`.

mod parse;
pub mod oracle;
pub mod structure;

pub use structure::*;

use crate::bitset::VSet;
use crate::error::{capability, input, Result};
use crate::graph_model::{LabelKind, LabeledGraph};
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Largest exponent magnitude accepted by the parser and produced by [`Element::power`].
pub const MAX_EXPONENT: i64 = 1 << 52;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub vertex: usize,
    pub exp: i64,
}

#[derive(Debug)]
struct GroupData {
    graph: LabeledGraph,
    /// 0 for infinite cyclic labels, n for Z/n.
    order: Vec<i64>,
    /// Vertices not adjacent to v, v itself included.
    blocks: Vec<VSet>,
}

/// A graph product whose vertex groups are all cyclic.
#[derive(Clone, Debug)]
pub struct Group(Arc<GroupData>);

impl PartialEq for Group {
    fn eq(&self, o: &Group) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.graph == o.0.graph
    }
}

impl Eq for Group {}

impl Group {
    pub fn new(graph: &LabeledGraph) -> Result<Group> {
        let mut order = Vec::with_capacity(graph.n());
        for v in 0..graph.n() {
            order.push(match graph.label(v).kind() {
                LabelKind::InfiniteCyclic => 0,
                LabelKind::FiniteCyclic(n) => i64::from(*n),
                _ => {
                    return capability(format!(
                        "word algebra needs Z or Z/n labels; vertex {} is {}",
                        graph.name(v),
                        graph.label(v).kind_string()
                    ))
                }
            });
        }
        let all = graph.all();
        let blocks = (0..graph.n()).map(|v| all.minus(&graph.lk(v))).collect();
        Ok(Group(Arc::new(GroupData { graph: graph.clone(), order, blocks })))
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.0.graph
    }

    pub fn n(&self) -> usize {
        self.0.graph.n()
    }

    /// 0 for an infinite cyclic vertex group, n for Z/n.
    pub fn order(&self, v: usize) -> i64 {
        self.0.order[v]
    }

    pub fn commute(&self, u: usize, v: usize) -> bool {
        u != v && self.0.graph.has_edge(u, v)
    }

    pub fn identity(&self) -> Element {
        Element { group: self.clone(), syl: Vec::new() }
    }

    /// Normalized exponent for `v`, or `None` if the syllable is trivial.
    fn normalize_exp(&self, v: usize, e: i64) -> Option<i64> {
        let n = self.0.order[v];
        let e = if n > 0 { e.rem_euclid(n) } else { e };
        (e != 0).then_some(e)
    }

    pub fn generator(&self, v: usize, e: i64) -> Element {
        self.from_syllables(&[Syllable { vertex: v, exp: e }])
    }

    pub fn vertex(&self, name: &str) -> Result<Element> {
        Ok(self.generator(self.0.graph.index(name)?, 1))
    }

    /// Normal form of an arbitrary syllable sequence.
    pub fn from_syllables(&self, syl: &[Syllable]) -> Element {
        let mut p = Piler::new(self);
        for s in syl {
            p.push(s.vertex, s.exp);
        }
        p.finish()
    }

    pub fn parse(&self, text: &str) -> Result<Element> {
        parse::parse(self, text)
    }
}

/// Accumulates syllables left to right, merging each one into the last syllable of its vertex
/// whenever everything after that syllable commutes with it.
struct Piler<'a> {
    group: &'a Group,
    out: Vec<Option<Syllable>>,
    /// Positions of live syllables per vertex, increasing.
    stacks: Vec<Vec<usize>>,
}

impl<'a> Piler<'a> {
    fn new(group: &'a Group) -> Piler<'a> {
        Piler { group, out: Vec::new(), stacks: vec![Vec::new(); group.n()] }
    }

    fn with(group: &'a Group, syl: &[Syllable]) -> Piler<'a> {
        let mut p = Piler::new(group);
        for s in syl {
            p.stacks[s.vertex].push(p.out.len());
            p.out.push(Some(*s));
        }
        p
    }

    fn push(&mut self, v: usize, e: i64) {
        let Some(e) = self.group.normalize_exp(v, e) else { return };
        if let Some(&p) = self.stacks[v].last() {
            let blocked = self.group.0.blocks[v]
                .without(v)
                .iter()
                .any(|u| self.stacks[u].last().is_some_and(|&q| q > p));
            if !blocked {
                let cur = self.out[p].expect("live syllable").exp;
                let sum = cur.checked_add(e).expect("exponent overflow");
                match self.group.normalize_exp(v, sum) {
                    Some(x) => self.out[p] = Some(Syllable { vertex: v, exp: x }),
                    None => {
                        self.out[p] = None;
                        self.stacks[v].pop();
                    }
                }
                return;
            }
        }
        self.stacks[v].push(self.out.len());
        self.out.push(Some(Syllable { vertex: v, exp: e }));
    }

    fn finish(self) -> Element {
        let live: Vec<Syllable> = self.out.into_iter().flatten().collect();
        Element { syl: canonical_order(self.group, &live), group: self.group.clone() }
    }
}

/// Sparse precedence DAG of a reduced word: each position points back to the last earlier
/// position of every vertex it does not commute with (itself included).
struct Precedence {
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
}

impl Precedence {
    fn build(group: &Group, syl: &[Syllable]) -> Precedence {
        let mut last: Vec<Option<usize>> = vec![None; group.n()];
        let mut preds = vec![Vec::new(); syl.len()];
        let mut succs = vec![Vec::new(); syl.len()];
        for (j, s) in syl.iter().enumerate() {
            for u in group.0.blocks[s.vertex].iter() {
                if let Some(i) = last[u] {
                    preds[j].push(i);
                    succs[i].push(j);
                }
            }
            last[s.vertex] = Some(j);
        }
        Precedence { preds, succs }
    }
}

/// Lexicographically least linear extension (by vertex index) of the precedence order.
fn canonical_order(group: &Group, syl: &[Syllable]) -> Vec<Syllable> {
    let dag = Precedence::build(group, syl);
    let mut indeg: Vec<usize> = dag.preds.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..syl.len()).filter(|&i| indeg[i] == 0).map(|i| Reverse((syl[i].vertex, i))).collect();
    let mut out = Vec::with_capacity(syl.len());
    while let Some(Reverse((_, i))) = heap.pop() {
        out.push(syl[i]);
        for &j in &dag.succs[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                heap.push(Reverse((syl[j].vertex, j)));
            }
        }
    }
    out
}

/// A group element in canonical normal form.
#[derive(Clone, Debug)]
pub struct Element {
    group: Group,
    syl: Vec<Syllable>,
}

impl PartialEq for Element {
    fn eq(&self, o: &Element) -> bool {
        self.syl == o.syl && self.group == o.group
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.syl.hash(h);
    }
}

fn same_group(a: &Element, b: &Element) -> Result<()> {
    if a.group != b.group {
        return input("elements belong to different graph products");
    }
    Ok(())
}

impl Element {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syl
    }

    /// Syllable length of the normal form.
    pub fn len(&self) -> usize {
        self.syl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syl.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syl.is_empty()
    }

    /// Product; panics if the elements live in different groups (see [`multiply`]).
    pub fn mul(&self, o: &Element) -> Element {
        assert!(self.group == o.group, "elements belong to different graph products");
        if o.syl.is_empty() {
            return self.clone();
        }
        let mut p = Piler::with(&self.group, &self.syl);
        for s in &o.syl {
            p.push(s.vertex, s.exp);
        }
        p.finish()
    }

    pub fn inverse(&self) -> Element {
        let rev: Vec<Syllable> = self
            .syl
            .iter()
            .rev()
            .map(|s| Syllable { vertex: s.vertex, exp: self.group.normalize_exp(s.vertex, -s.exp).expect("nonzero") })
            .collect();
        Element { syl: canonical_order(&self.group, &rev), group: self.group.clone() }
    }

    pub fn power(&self, k: i64) -> Result<Element> {
        let max = self.syl.iter().map(|s| s.exp.unsigned_abs()).max().unwrap_or(0);
        if (max as u128) * (k.unsigned_abs() as u128) > MAX_EXPONENT as u128 {
            return capability(format!("power {k} would exceed the exponent bound {MAX_EXPONENT}"));
        }
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = self.group.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// `w⁻¹ · self · w`.
    pub fn conj(&self, w: &Element) -> Element {
        w.inverse().mul(self).mul(w)
    }

    /// `self⁻¹ · o⁻¹ · self · o`.
    pub fn commutator(&self, o: &Element) -> Element {
        self.inverse().mul(&o.inverse()).mul(self).mul(o)
    }

    pub fn commutes_with(&self, o: &Element) -> bool {
        self.mul(o) == o.mul(self)
    }

    pub fn support(&self) -> VSet {
        VSet::from_iter(self.syl.iter().map(|s| s.vertex))
    }

    /// Canonical word text; the identity prints as `1`.
    pub fn to_word(&self) -> String {
        if self.syl.is_empty() {
            return "1".into();
        }
        self.to_json_word()
    }

    /// Canonical word text with the identity as the empty string.
    pub fn to_json_word(&self) -> String {
        let g = self.group.graph();
        self.syl
            .iter()
            .map(|s| if s.exp == 1 { g.name(s.vertex).to_string() } else { format!("{}^{}", g.name(s.vertex), s.exp) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word())
    }
}

impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_json_word())
    }
}

pub fn multiply(g: &Element, h: &Element) -> Result<Element> {
    same_group(g, h)?;
    Ok(g.mul(h))
}

pub fn equals(g: &Element, h: &Element) -> Result<bool> {
    same_group(g, h)?;
    Ok(g.syl == h.syl)
}

pub fn parse_word(group: &Group, text: &str) -> Result<Element> {
    group.parse(text)
}

/// Result of [`cyclic_reduce`]: `g = conjugator · core · conjugator⁻¹`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CyclicReduction {
    pub core: Element,
    pub conjugator: Element,
}

/// Conjugates away every first syllable that can merge with a last syllable of the same vertex.
pub fn cyclic_reduce(g: &Element) -> CyclicReduction {
    let group = &g.group;
    let syl = &g.syl;
    let dag = Precedence::build(group, syl);
    let len = syl.len();
    let mut exp: Vec<i64> = syl.iter().map(|s| s.exp).collect();
    let mut alive = vec![true; len];
    let mut indeg: Vec<usize> = dag.preds.iter().map(Vec::len).collect();
    let mut outdeg: Vec<usize> = dag.succs.iter().map(Vec::len).collect();
    // At most one live source and one live sink per vertex.
    let mut source: Vec<Option<usize>> = vec![None; group.n()];
    let mut sink: Vec<Option<usize>> = vec![None; group.n()];
    for i in 0..len {
        if indeg[i] == 0 {
            source[syl[i].vertex] = Some(i);
        }
        if outdeg[i] == 0 {
            sink[syl[i].vertex] = Some(i);
        }
    }
    let mut conj = Vec::new();
    let mut queue: Vec<usize> = (0..group.n()).collect();
    while let Some(v) = queue.pop() {
        let (Some(s), Some(t)) = (source[v], sink[v]) else { continue };
        if s == t {
            continue;
        }
        conj.push(Syllable { vertex: v, exp: exp[s] });
        let merged = group.normalize_exp(v, exp[t].checked_add(exp[s]).expect("exponent overflow"));
        // Drop the source.
        alive[s] = false;
        source[v] = None;
        for &j in &dag.succs[s] {
            indeg[j] -= 1;
            if indeg[j] == 0 && alive[j] {
                source[syl[j].vertex] = Some(j);
                queue.push(syl[j].vertex);
            }
        }
        match merged {
            Some(e) => exp[t] = e,
            None => {
                alive[t] = false;
                sink[v] = None;
                for &i in &dag.preds[t] {
                    outdeg[i] -= 1;
                    if outdeg[i] == 0 && alive[i] {
                        sink[syl[i].vertex] = Some(i);
                        queue.push(syl[i].vertex);
                    }
                }
                if source[v] == Some(t) {
                    source[v] = None;
                }
            }
        }
        queue.push(v);
    }
    let core: Vec<Syllable> =
        (0..len).filter(|&i| alive[i]).map(|i| Syllable { vertex: syl[i].vertex, exp: exp[i] }).collect();
    CyclicReduction {
        core: Element { syl: canonical_order(group, &core), group: group.clone() },
        conjugator: group.from_syllables(&conj),
    }
}

/// Vertices with a syllable that can be shuffled to the front of the word.
pub fn first_letters(g: &Element) -> Vec<Syllable> {
    let dag = Precedence::build(&g.group, &g.syl);
    (0..g.syl.len()).filter(|&i| dag.preds[i].is_empty()).map(|i| g.syl[i]).collect()
}

/// Vertices with a syllable that can be shuffled to the back of the word.
pub fn last_letters(g: &Element) -> Vec<Syllable> {
    let dag = Precedence::build(&g.group, &g.syl);
    (0..g.syl.len()).filter(|&i| dag.succs[i].is_empty()).map(|i| g.syl[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn f2() -> Group {
        Group::new(&catalog::f2()).unwrap()
    }

    fn z2sq() -> Group {
        Group::new(&catalog::z2_squared()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = f2();
        assert_eq!(g.parse("a b a^-1").unwrap().len(), 3);
        assert_eq!(g.parse("a b a^-1 a b^-1").unwrap().to_word(), "a");
        assert_eq!(z2sq().parse("b a").unwrap().to_word(), "a b");
        assert!(g.parse("").unwrap().is_identity());
        assert!(g.parse("1").unwrap().is_identity());
        assert!(g.parse("a^0").is_err());
        assert!(g.parse("c").is_err());
        assert!(g.parse("(a b").is_err());
    }

    #[test]
    fn multiplication_examples() {
        let g = f2();
        let x = g.parse("a b a^-1 b^2").unwrap();
        assert!(x.mul(&x.inverse()).is_identity());
        let z = z2sq();
        assert_eq!(z.parse("(a b)^3").unwrap().to_word(), "a^3 b^3");
        let p = Group::new(&catalog::pentagon(crate::GroupLabel::z2())).unwrap();
        assert_eq!(p.parse("(a0 a2)^2").unwrap().to_word(), "a0 a2 a0 a2");
        assert_eq!(p.parse("a0 a0").unwrap().to_word(), "1");
    }

    #[test]
    fn equality_examples() {
        let z = z2sq();
        assert!(equals(&z.parse("a b").unwrap(), &z.parse("b a").unwrap()).unwrap());
        assert!(z.parse("[a,b]").unwrap().is_identity());
        let g = f2();
        assert!(!equals(&g.parse("a b").unwrap(), &g.parse("b a").unwrap()).unwrap());
        assert!(equals(&g.parse("a").unwrap(), &z.parse("a").unwrap()).is_err());
    }

    #[test]
    fn cyclic_reduction_examples() {
        let ex = Group::new(&catalog::example_graph()).unwrap();
        let w = ex.parse("c^-1 a1 a2 c").unwrap();
        let r = cyclic_reduce(&w);
        assert_eq!(r.core.to_word(), "a1 a2");
        assert_eq!(r.conjugator.to_word(), "c^-1");
        assert_eq!(r.conjugator.mul(&r.core).mul(&r.conjugator.inverse()), w);
        let g = f2();
        let r = cyclic_reduce(&g.parse("b a b^-1").unwrap());
        assert_eq!(r.core.to_word(), "a");
        let r = cyclic_reduce(&g.parse("a b").unwrap());
        assert!(r.conjugator.is_identity());
        let w = g.parse("a^2 b a^-1").unwrap();
        let r = cyclic_reduce(&w);
        assert_eq!(r.core.len(), 2);
        assert_eq!(r.conjugator.mul(&r.core).mul(&r.conjugator.inverse()), w);
    }

    #[test]
    fn display_round_trip() {
        let g = Group::new(&catalog::example_graph()).unwrap();
        let w = g.parse("[a3, c]^(d b) a1^-2").unwrap();
        assert_eq!(g.parse(&w.to_word()).unwrap(), w);
        assert_eq!(g.parse(&w.to_json_word()).unwrap(), w);
    }
}
