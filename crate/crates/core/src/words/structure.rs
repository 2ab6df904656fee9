//! Supports, envelopes, join factors, retractions, tree actions, cyclic pairs and centralizers.

use super::{cyclic_reduce, first_letters, last_letters, same_group, Element, Syllable};
use crate::bitset::VSet;
use crate::error::{capability, contract, input, Result};
use serde::Serialize;
use std::collections::{BinaryHeap, HashMap, HashSet};

/// States explored by [`envelope_tuple`] before it gives up on certifying minimality.
pub const ENVELOPE_BUDGET: usize = 20_000;

/// The envelope search also stops after this many expansions without improving its best state.
/// Exponents can drift between the ends of words at constant syllable length, so the reachable
/// state space is often infinite.
pub const ENVELOPE_STALL: usize = 1_000;

pub fn support(g: &Element) -> VSet {
    g.support()
}

/// Support of the cyclically reduced core together with the conjugator `c` such that
/// `g = c · core · c⁻¹`.
pub fn essential_support(g: &Element) -> (VSet, Element) {
    let r = cyclic_reduce(g);
    (r.core.support(), r.conjugator)
}

/// Retraction onto the subgroup generated by the vertices of `delta`.
pub fn project(g: &Element, delta: &VSet) -> Element {
    let kept: Vec<Syllable> = g.syl.iter().copied().filter(|s| delta.contains(s.vertex)).collect();
    g.group.from_syllables(&kept)
}

/// `Some(order)` for torsion elements, `None` for elements of infinite order.
pub fn element_order(g: &Element) -> Option<u64> {
    let core = cyclic_reduce(g).core;
    let graph = g.group.graph();
    let s = core.support();
    let clique = s.iter().all(|v| s.without(v).is_subset(&graph.adj(v)));
    if !clique {
        return None;
    }
    let mut order = 1u64;
    for syl in &core.syl {
        let n = g.group.order(syl.vertex);
        if n == 0 {
            return None;
        }
        let k = (n / gcd(n, syl.exp.rem_euclid(n))) as u64;
        order = lcm(order, k);
    }
    Some(order)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / (gcd(a as i64, b as i64) as u64) * b
}

#[derive(Clone, Debug, Serialize)]
pub struct Envelope {
    /// `h` with every `c_i ∈ h⁻¹ 𝒢(Δ) h`.
    pub conjugator: Element,
    #[serde(skip)]
    pub support: VSet,
    /// `h c_i h⁻¹`, all supported in Δ.
    pub conjugated: Vec<Element>,
    /// False when the search budget ran out before the reachable states were exhausted.
    pub certified: bool,
}

fn total_len(ys: &[Element]) -> usize {
    ys.iter().map(Element::len).sum()
}

fn union_support(ys: &[Element]) -> VSet {
    ys.iter().fold(VSet::EMPTY, |a, y| a.or(&y.support()))
}

/// Smallest subgraph product containing every `c_i` after one simultaneous conjugation.
///
/// A single element is handled exactly by cyclic reduction. For tuples, a best-first search
/// conjugates all entries by first syllables (or inverses of last syllables) of some entry, keeps
/// states whose total length stays within `2k` of the start, and returns the state with the fewest
/// support vertices, then the shortest total length.
pub fn envelope_tuple(cs: &[Element], budget: usize) -> Result<Envelope> {
    let Some(first) = cs.first() else { return input("envelope needs at least one element") };
    for c in cs {
        same_group(first, c)?;
    }
    let group = first.group.clone();
    if cs.len() == 1 {
        let r = cyclic_reduce(first);
        return Ok(Envelope {
            support: r.core.support(),
            conjugator: r.conjugator.inverse(),
            conjugated: vec![r.core],
            certified: true,
        });
    }
    let start_len = total_len(cs);
    let limit = start_len + 2 * cs.len();
    let mut states: Vec<(Vec<Element>, Element)> = vec![(cs.to_vec(), group.identity())];
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    seen.insert(cs.to_vec());
    let mut heap = BinaryHeap::new();
    heap.push(std::cmp::Reverse((start_len, 0usize)));
    let key = |ys: &[Element]| (union_support(ys).len(), total_len(ys));
    let mut best = 0usize;
    let mut expanded = 0usize;
    let mut improved_at = 0usize;
    let mut certified = true;
    while let Some(std::cmp::Reverse((_, idx))) = heap.pop() {
        if expanded >= budget || expanded - improved_at >= ENVELOPE_STALL {
            certified = false;
            break;
        }
        expanded += 1;
        let (ys, t) = states[idx].clone();
        if key(&ys) < key(&states[best].0) {
            best = idx;
            improved_at = expanded;
        }
        let mut moves: Vec<Syllable> = Vec::new();
        for y in &ys {
            moves.extend(first_letters(y));
            moves.extend(last_letters(y).into_iter().map(|s| Syllable { vertex: s.vertex, exp: -s.exp }));
        }
        moves.sort();
        moves.dedup();
        for m in moves {
            let x = group.generator(m.vertex, m.exp);
            let next: Vec<Element> = ys.iter().map(|y| y.conj(&x)).collect();
            let len = total_len(&next);
            if len > limit || seen.contains(&next) {
                continue;
            }
            seen.insert(next.clone());
            states.push((next, x.inverse().mul(&t)));
            heap.push(std::cmp::Reverse((len, states.len() - 1)));
        }
    }
    let (ys, t) = states.swap_remove(best);
    Ok(Envelope { support: union_support(&ys), conjugator: t, conjugated: ys, certified })
}

#[derive(Clone, Debug, Serialize)]
pub struct Factor {
    #[serde(skip)]
    pub component: VSet,
    pub vertices: Vec<String>,
    pub singular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorDecomposition {
    pub conjugator: Element,
    #[serde(skip)]
    pub support: VSet,
    pub support_vertices: Vec<String>,
    pub factors: Vec<Factor>,
    #[serde(skip)]
    pub conjugated: Vec<Element>,
    pub certified: bool,
}

/// Join factors of the envelope's support.
pub fn factors(cs: &[Element]) -> Result<FactorDecomposition> {
    let env = envelope_tuple(cs, ENVELOPE_BUDGET)?;
    let graph = env.conjugator.group.graph();
    let factors = graph
        .join_factors(&env.support)
        .into_iter()
        .map(|c| Factor { component: c, vertices: graph.set_names(&c), singular: c.len() == 1 })
        .collect();
    Ok(FactorDecomposition {
        support_vertices: graph.set_names(&env.support),
        conjugator: env.conjugator,
        support: env.support,
        factors,
        conjugated: env.conjugated,
        certified: env.certified,
    })
}

/// Link of the envelope support: the vertices of the largest subgraph product orthogonal to the tuple.
pub fn orthogonal(cs: &[Element]) -> Result<VSet> {
    let env = envelope_tuple(cs, ENVELOPE_BUDGET)?;
    Ok(env.conjugator.group.graph().link(&env.support))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ActionKind {
    Elliptic,
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeActionInfo {
    pub vertex: String,
    pub kind: ActionKind,
    pub translation_length: u64,
}

/// Action on the Bass–Serre tree of the splitting over `lk(v)`; edges have length 1.
pub fn tree_action(g: &Element, v: usize) -> Result<TreeActionInfo> {
    let graph = g.group.graph();
    if v >= graph.n() {
        return input(format!("vertex index {v} out of range"));
    }
    if graph.st(v) == graph.all() {
        return capability(format!("vertex {} is adjacent to every other vertex; its tree is a point", graph.name(v)));
    }
    let core = cyclic_reduce(g).core;
    let s = core.support();
    let elliptic = !s.contains(v) || s.is_subset(&graph.st(v));
    let tl = if elliptic { 0 } else { 2 * core.syl.iter().filter(|x| x.vertex == v).count() as u64 };
    Ok(TreeActionInfo {
        vertex: graph.name(v).to_string(),
        kind: if elliptic { ActionKind::Elliptic } else { ActionKind::Hyperbolic },
        translation_length: tl,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub cyclic: bool,
    /// False when the relation search hit its exponent bound without a decision.
    pub certified: bool,
}

/// Whether `⟨g, h⟩` is infinite cyclic.
///
/// For commuting elements of infinite order the relation lattice `{(x, y) : gˣ hʸ = 1}` has rank
/// at most one; the group is infinite cyclic exactly when the least `p ≥ 1` with `gᵖ ∈ ⟨h⟩` comes
/// with a `q` coprime to `p`. The search runs over `|p|, |q| ≤ 2·max(L_g, L_h) + 2`, where `L` is
/// the cyclically reduced syllable length.
pub fn cyclic_pair(g: &Element, h: &Element) -> Result<PairVerdict> {
    same_group(g, h)?;
    let decided = |cyclic| Ok(PairVerdict { cyclic, certified: true });
    match (g.is_identity(), h.is_identity()) {
        (true, true) => return decided(false),
        (true, false) => return decided(element_order(h).is_none()),
        (false, true) => return decided(element_order(g).is_none()),
        _ => {}
    }
    if element_order(g).is_some() || element_order(h).is_some() || !g.commutes_with(h) {
        return decided(false);
    }
    let lg = cyclic_reduce(g).core.len() as i64;
    let lh = cyclic_reduce(h).core.len() as i64;
    let bound = 2 * lg.max(lh) + 2;
    let mut h_powers: HashMap<Element, i64> = HashMap::new();
    let (mut up, mut down) = (h.clone(), h.inverse());
    let hinv = h.inverse();
    for q in 1..=bound {
        h_powers.insert(up.clone(), q);
        h_powers.insert(down.clone(), -q);
        up = up.mul(h);
        down = down.mul(&hinv);
    }
    let mut gp = g.clone();
    for p in 1..=bound {
        if let Some(&q) = h_powers.get(&gp) {
            return decided(gcd(p, q) == 1);
        }
        gp = gp.mul(g);
    }
    Ok(PairVerdict { cyclic: false, certified: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    Linear,
    Dihedral,
    Irreducible,
}

fn is_involution(x: &Element) -> bool {
    !x.is_identity() && x.mul(x).is_identity()
}

fn all_pairs_cyclic(xs: &[Element]) -> Result<bool> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if !cyclic_pair(&xs[i], &xs[j])?.cyclic {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Linear, dihedral or irreducible behaviour of the tuple's projection to a non-singular factor.
pub fn classify_in_factor(cs: &[Element], component: usize) -> Result<Classification> {
    let dec = factors(cs)?;
    let Some(f) = dec.factors.get(component) else {
        return input(format!("factor index {component} out of range ({} factors)", dec.factors.len()));
    };
    if f.singular {
        return contract(format!("factor {:?} is singular", f.vertices));
    }
    let proj: Vec<Element> =
        dec.conjugated.iter().map(|y| project(y, &f.component)).filter(|p| !p.is_identity()).collect();
    classify_elements(&proj)
}

/// Classification of the subgroup generated by `xs` (identity entries ignored).
pub fn classify_elements(xs: &[Element]) -> Result<Classification> {
    let xs: Vec<Element> = xs.iter().filter(|x| !x.is_identity()).cloned().collect();
    if xs.len() <= 1 {
        return Ok(Classification::Linear);
    }
    let (invs, rest): (Vec<Element>, Vec<Element>) = xs.iter().cloned().partition(is_involution);
    if invs.is_empty() {
        if rest.iter().any(|x| element_order(x).is_some()) {
            return Ok(if all_torsion_commute(&rest) { Classification::Linear } else { Classification::Irreducible });
        }
        return Ok(if all_pairs_cyclic(&rest)? { Classification::Linear } else { Classification::Irreducible });
    }
    if rest.iter().any(|x| element_order(x).is_some()) {
        return Ok(Classification::Irreducible);
    }
    // Translations of a would-be dihedral group: products of involutions and the other generators.
    let s0 = &invs[0];
    let mut translations: Vec<Element> = invs[1..].iter().map(|s| s0.mul(s)).filter(|t| !t.is_identity()).collect();
    translations.extend(rest.iter().cloned());
    if translations.is_empty() {
        return Ok(Classification::Linear);
    }
    if translations.iter().any(|t| element_order(t).is_some()) {
        return Ok(Classification::Irreducible);
    }
    if !all_pairs_cyclic(&translations)? {
        return Ok(Classification::Irreducible);
    }
    let t0 = &translations[0];
    let flips = invs.iter().all(|s| s.mul(t0).mul(s) == t0.inverse());
    Ok(if flips { Classification::Dihedral } else { Classification::Irreducible })
}

fn all_torsion_commute(xs: &[Element]) -> bool {
    xs.iter().enumerate().all(|(i, x)| xs[i + 1..].iter().all(|y| x.commutes_with(y)))
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularPart {
    pub vertex: String,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonsingularPart {
    pub component: Vec<String>,
    /// A root of the projection, expressed in the frame of `g`.
    pub root: Element,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralizerDescription {
    pub orthogonal_part: Vec<String>,
    /// Conjugator `c` with `g = c · core · c⁻¹`; every part below is conjugated by it.
    pub conjugator: Element,
    pub singular_parts: Vec<SingularPart>,
    pub nonsingular_parts: Vec<NonsingularPart>,
}

/// Primitive root of a cyclically reduced element on a co-connected support.
///
/// Powers of such an element never merge syllables, so if `p = rᵐ` the syllables of `r` are the
/// first `count_v / m` syllables of each vertex `v` in `p`. One candidate per `m` decides.
pub fn primitive_root(p: &Element) -> (Element, bool) {
    let mut counts: HashMap<usize, i64> = HashMap::new();
    for s in &p.syl {
        *counts.entry(s.vertex).or_default() += 1;
    }
    let g = counts.values().fold(0, |a, &c| gcd(a, c));
    for m in (2..=g).rev().filter(|m| g % m == 0) {
        let mut taken: HashMap<usize, i64> = HashMap::new();
        let picked: Vec<Syllable> = p
            .syl
            .iter()
            .filter(|s| {
                let t = taken.entry(s.vertex).or_default();
                *t += 1;
                *t <= counts[&s.vertex] / m
            })
            .copied()
            .collect();
        let r = p.group.from_syllables(&picked);
        if r.power(m).ok().as_ref() == Some(p) {
            return (r, true);
        }
    }
    (p.clone(), cyclic_reduce(p).conjugator.is_identity())
}

/// Centralizer of `g` as a product: vertex groups of singular factors, cyclic groups generated
/// by roots of the non-singular factor projections, and the orthogonal subgroup product.
pub fn centralizer_description(g: &Element) -> CentralizerDescription {
    let graph = g.group.graph();
    let r = cyclic_reduce(g);
    let delta = r.core.support();
    let mut singular_parts = Vec::new();
    let mut nonsingular_parts = Vec::new();
    for c in graph.join_factors(&delta) {
        if c.len() == 1 {
            let v = c.first().expect("non-empty");
            singular_parts.push(SingularPart { vertex: graph.name(v).to_string(), label: graph.label(v).kind_string() });
        } else {
            let (root, certified) = primitive_root(&project(&r.core, &c));
            let root = root.conj(&r.conjugator.inverse());
            nonsingular_parts.push(NonsingularPart { component: graph.set_names(&c), root, certified });
        }
    }
    CentralizerDescription {
        orthogonal_part: graph.set_names(&graph.link(&delta)),
        conjugator: r.conjugator,
        singular_parts,
        nonsingular_parts,
    }
}

/// Generators of the centralizer described above, as elements of the group.
pub fn centralizer_generators(g: &Element, d: &CentralizerDescription) -> Vec<Element> {
    let graph = g.group.graph();
    let c = &d.conjugator;
    let cinv = c.inverse();
    let vertex = |name: &str| g.group.generator(graph.index_of(name).expect("vertex of the graph"), 1);
    let mut out: Vec<Element> = d.orthogonal_part.iter().map(|v| vertex(v).conj(&cinv)).collect();
    out.extend(d.singular_parts.iter().map(|p| vertex(&p.vertex).conj(&cinv)));
    out.extend(d.nonsingular_parts.iter().map(|p| p.root.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::words::Group;
    use crate::GroupLabel;

    fn ex() -> Group {
        Group::new(&catalog::example_graph()).unwrap()
    }

    fn names(g: &Group, s: &VSet) -> Vec<String> {
        g.graph().set_names(s)
    }

    #[test]
    fn supports_and_envelopes() {
        let g = ex();
        let h = g.parse("a1 a2").unwrap().conj(&g.parse("c").unwrap());
        let (s, _) = essential_support(&h);
        assert_eq!(names(&g, &s), ["a1", "a2"]);
        assert!(essential_support(&g.identity()).0.is_empty());
        let tuple = [h.clone(), g.parse("a3").unwrap(), g.parse("b").unwrap()];
        let env = envelope_tuple(&tuple, ENVELOPE_BUDGET).unwrap();
        assert_eq!(names(&g, &env.support), ["a1", "a2", "a3", "b"]);
        for (c, y) in tuple.iter().zip(&env.conjugated) {
            assert_eq!(&y.conj(&env.conjugator), c);
        }
        let f2 = Group::new(&catalog::f2()).unwrap();
        let env = envelope_tuple(&[f2.parse("a").unwrap(), f2.parse("b").unwrap()], ENVELOPE_BUDGET).unwrap();
        assert_eq!(env.support.len(), 2);
        assert!(env.conjugator.is_identity());
    }

    #[test]
    fn factor_examples() {
        let g = ex();
        let h = g.parse("a1 a2").unwrap().conj(&g.parse("c").unwrap());
        let d = factors(std::slice::from_ref(&h)).unwrap();
        assert_eq!(d.conjugator.to_word(), "c");
        let parts: Vec<(Vec<String>, bool)> = d.factors.iter().map(|f| (f.vertices.clone(), f.singular)).collect();
        assert_eq!(parts, [(vec!["a1".to_string()], true), (vec!["a2".to_string()], true)]);
        assert_eq!(names(&g, &orthogonal(std::slice::from_ref(&h)).unwrap()), ["b"]);
        let t = [h, g.parse("a3").unwrap(), g.parse("b").unwrap()];
        assert!(orthogonal(&t).unwrap().is_empty());
        assert_eq!(orthogonal(&[g.identity()]).unwrap(), g.graph().all());
        let p = Group::new(&catalog::pentagon(GroupLabel::z2())).unwrap();
        let d = factors(&[p.parse("a0").unwrap(), p.parse("a2").unwrap()]).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert!(!d.factors[0].singular);
        assert_eq!(d.factors[0].vertices, ["a0", "a2"]);
    }

    #[test]
    fn projection_examples() {
        let f2 = Group::new(&catalog::f2()).unwrap();
        let a = f2.graph().set_of(&["a"]).unwrap();
        assert_eq!(project(&f2.parse("a b a").unwrap(), &a).to_word(), "a^2");
        let w = f2.parse("a b^-2 a b").unwrap();
        assert_eq!(project(&w, &f2.graph().all()), w);
        let p = Group::new(&catalog::pentagon(GroupLabel::z2())).unwrap();
        let d = p.graph().set_of(&["a0", "a2"]).unwrap();
        assert_eq!(project(&p.parse("a0 a1 a2").unwrap(), &d).to_word(), "a0 a2");
    }

    #[test]
    fn tree_action_examples() {
        let f2 = Group::new(&catalog::f2()).unwrap();
        let a = 0;
        let t = tree_action(&f2.parse("a b").unwrap(), a).unwrap();
        assert_eq!((t.kind, t.translation_length), (ActionKind::Hyperbolic, 2));
        assert_eq!(tree_action(&f2.parse("b").unwrap(), a).unwrap().kind, ActionKind::Elliptic);
        assert_eq!(tree_action(&f2.parse("(a b)^3").unwrap(), a).unwrap().translation_length, 6);
        let z = Group::new(&catalog::z2_squared()).unwrap();
        assert!(tree_action(&z.parse("a").unwrap(), 0).is_err());
    }

    #[test]
    fn cyclic_pair_examples() {
        let f2 = Group::new(&catalog::f2()).unwrap();
        let w = f2.parse("a b^-1 a^2").unwrap();
        assert!(cyclic_pair(&w, &w.power(3).unwrap()).unwrap().cyclic);
        assert!(!cyclic_pair(&f2.parse("a").unwrap(), &f2.parse("b").unwrap()).unwrap().cyclic);
        assert!(cyclic_pair(&f2.parse("a^2").unwrap(), &f2.parse("a^3").unwrap()).unwrap().cyclic);
        assert!(cyclic_pair(&f2.parse("a^2").unwrap(), &f2.parse("a^4").unwrap()).unwrap().cyclic);
        let mut mixed = crate::LabeledGraph::uniform(&["a", "e"], &[("a", "e")], GroupLabel::z()).unwrap();
        mixed = mixed.relabel(|i, l| if i == 1 { GroupLabel::z2() } else { l.clone() });
        let m = Group::new(&mixed).unwrap();
        assert!(!cyclic_pair(&m.parse("a").unwrap(), &m.parse("a e").unwrap()).unwrap().cyclic);
        let z = Group::new(&catalog::z2_squared()).unwrap();
        assert!(!cyclic_pair(&z.parse("a").unwrap(), &z.parse("b").unwrap()).unwrap().cyclic);
    }

    #[test]
    fn classification_examples() {
        let p = Group::new(&catalog::pentagon(GroupLabel::z2())).unwrap();
        let t = [p.parse("a0").unwrap(), p.parse("a2").unwrap()];
        assert_eq!(classify_in_factor(&t, 0).unwrap(), Classification::Dihedral);
        let f2 = Group::new(&catalog::f2()).unwrap();
        let t = [f2.parse("a b").unwrap(), f2.parse("(a b)^2").unwrap()];
        assert_eq!(classify_in_factor(&t, 0).unwrap(), Classification::Linear);
        let t = [f2.parse("a").unwrap(), f2.parse("b").unwrap()];
        assert_eq!(classify_in_factor(&t, 0).unwrap(), Classification::Irreducible);
        let g = ex();
        assert!(matches!(
            classify_in_factor(&[g.parse("a1 a2").unwrap()], 0),
            Err(crate::GpError::Contract(_))
        ));
    }

    #[test]
    fn centralizer_examples() {
        let g = ex();
        let x = g.parse("a1 a2").unwrap();
        let d = centralizer_description(&x);
        assert_eq!(d.orthogonal_part, ["b"]);
        let singular: Vec<&str> = d.singular_parts.iter().map(|p| p.vertex.as_str()).collect();
        assert_eq!(singular, ["a1", "a2"]);
        assert!(d.nonsingular_parts.is_empty());
        assert!(centralizer_generators(&x, &d).iter().all(|y| y.commutes_with(&x)));
        let whole = centralizer_description(&g.identity());
        assert_eq!(whole.orthogonal_part.len(), 6);
        let f2 = Group::new(&catalog::f2()).unwrap();
        let x = f2.parse("(a b)^2").unwrap();
        let d = centralizer_description(&x);
        assert_eq!(d.nonsingular_parts.len(), 1);
        assert_eq!(d.nonsingular_parts[0].root.to_word(), "a b");
        let x = f2.parse("b^-1 (a b^2)^3 b").unwrap();
        let d = centralizer_description(&x);
        let root = &d.nonsingular_parts[0].root;
        assert_eq!(root.power(3).unwrap(), x);
    }

    #[test]
    fn orders() {
        let p = Group::new(&catalog::pentagon(GroupLabel::z2())).unwrap();
        assert_eq!(element_order(&p.parse("a0 a1").unwrap()), Some(2));
        assert_eq!(element_order(&p.parse("a0 a2").unwrap()), None);
        assert_eq!(element_order(&p.parse("a2 a0 a2").unwrap()), Some(2));
    }
}
