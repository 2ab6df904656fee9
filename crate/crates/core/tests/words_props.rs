//! Word algebra against the brute-force rewriting oracle, plus the structural laws of supports,
//! translation lengths, factors and centralizers.

use gp_core::catalog;
use gp_core::words::oracle::{oracle_equal, oracle_normal_form, reduced_class, ORACLE_CAP};
use gp_core::words::{
    classify_in_factor, cyclic_pair, cyclic_reduce, centralizer_description, centralizer_generators, element_order,
    factors, support, tree_action, ActionKind, Classification, Element, Group, Syllable,
};
use gp_core::{GroupLabel, LabeledGraph};
use proptest::prelude::*;
use std::collections::BTreeMap;

/// Graph on `n ≤ 5` vertices; `edge_bits` picks edges, `label_bits` picks Z (0), Z/2 (1) or Z/3 (2).
fn graph(n: usize, edge_bits: u32, labels: &[u8]) -> LabeledGraph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for a in 0..n {
        for b in a + 1..n {
            if edge_bits >> bit & 1 == 1 {
                edges.push((a, b));
            }
            bit += 1;
        }
    }
    let labels = labels[..n]
        .iter()
        .map(|l| match l % 3 {
            0 => GroupLabel::z(),
            1 => GroupLabel::z2(),
            _ => GroupLabel::zn(3).unwrap(),
        })
        .collect();
    LabeledGraph::from_indexed(catalog::vertex_names(n), labels, &edges).unwrap()
}

fn syllables(n: usize, raw: &[(usize, i64)]) -> Vec<Syllable> {
    raw.iter().map(|&(v, e)| Syllable { vertex: v % n, exp: e }).collect()
}

fn nonzero_exp() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

prop_compose! {
    fn any_graph(torsion: bool)(n in 2usize..=5, edges in any::<u32>(), labels in prop::collection::vec(0u8..3, 5))
        -> LabeledGraph {
        let labels: Vec<u8> = if torsion { labels } else { vec![0; 5] };
        graph(n, edges, &labels)
    }
}

fn word() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..5, nonzero_exp()), 0..=12)
}

/// Rewrites a word without changing its element: commuting swaps and inserted cancelling pairs.
fn scramble(g: &Group, w: &[Syllable], moves: &[(usize, u8, i64)]) -> Vec<Syllable> {
    let mut w = w.to_vec();
    for &(at, kind, e) in moves {
        match kind % 3 {
            0 if w.len() >= 2 => {
                let i = at % (w.len() - 1);
                if g.commute(w[i].vertex, w[i + 1].vertex) {
                    w.swap(i, i + 1);
                }
            }
            1 => {
                let i = at % (w.len() + 1);
                let v = at % g.n();
                w.splice(i..i, [Syllable { vertex: v, exp: e }, Syllable { vertex: v, exp: -e }]);
            }
            _ if !w.is_empty() => {
                // Split a syllable into two pieces of the same vertex.
                let i = at % w.len();
                let s = w[i];
                w.splice(i..=i, [Syllable { vertex: s.vertex, exp: s.exp - e }, Syllable { vertex: s.vertex, exp: e }]);
            }
            _ => {}
        }
    }
    w
}

fn per_vertex_multiset(w: &[Syllable]) -> BTreeMap<usize, Vec<i64>> {
    let mut m: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for s in w {
        m.entry(s.vertex).or_default().push(s.exp);
    }
    m
}

fn non_cone_vertices(g: &LabeledGraph) -> Vec<usize> {
    (0..g.n()).filter(|&v| g.st(v) != g.all()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn equality_matches_oracle_on_random_pairs(g in any_graph(true), u in word(), v in word()) {
        let grp = Group::new(&g).unwrap();
        let (u, v) = (syllables(g.n(), &u), syllables(g.n(), &v));
        let fast = grp.from_syllables(&u) == grp.from_syllables(&v);
        prop_assert_eq!(fast, oracle_equal(&grp, &u, &v, ORACLE_CAP).unwrap());
    }

    #[test]
    fn equality_matches_oracle_on_rewritten_pairs(
        g in any_graph(true),
        u in word(),
        moves in prop::collection::vec((0usize..64, 0u8..3, nonzero_exp()), 0..6),
    ) {
        let grp = Group::new(&g).unwrap();
        let u = syllables(g.n(), &u);
        let v = scramble(&grp, &u, &moves);
        prop_assert!(oracle_equal(&grp, &u, &v, ORACLE_CAP).unwrap());
        prop_assert_eq!(grp.from_syllables(&u), grp.from_syllables(&v));
    }

    #[test]
    fn normal_form_is_oracle_normal_form(g in any_graph(true), u in word()) {
        let grp = Group::new(&g).unwrap();
        let u = syllables(g.n(), &u);
        let nf = grp.from_syllables(&u);
        prop_assert_eq!(nf.syllables().to_vec(), oracle_normal_form(&grp, &u, ORACLE_CAP).unwrap());
    }

    #[test]
    fn reduced_words_share_syllable_multisets(g in any_graph(true), u in word()) {
        let grp = Group::new(&g).unwrap();
        let class = reduced_class(&grp, &syllables(g.n(), &u), ORACLE_CAP).unwrap();
        let first = per_vertex_multiset(class.iter().next().unwrap());
        for w in &class {
            prop_assert_eq!(&per_vertex_multiset(w), &first);
        }
    }

    #[test]
    fn group_axioms_hold(g in any_graph(true), a in word(), b in word(), c in word()) {
        let grp = Group::new(&g).unwrap();
        let [a, b, c] = [a, b, c].map(|w| grp.from_syllables(&syllables(g.n(), &w)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_identity());
        prop_assert_eq!(a.mul(&grp.identity()), a.clone());
        prop_assert_eq!(grp.parse(&a.to_word()).unwrap(), a);
    }

    #[test]
    fn support_laws(g in any_graph(true), a in word(), b in word()) {
        let grp = Group::new(&g).unwrap();
        let [a, b] = [a, b].map(|w| grp.from_syllables(&syllables(g.n(), &w)));
        prop_assert!(support(&a.mul(&b)).is_subset(&support(&a).or(&support(&b))));
        prop_assert_eq!(support(&a.inverse()), support(&a));
    }

    #[test]
    fn cyclic_reduction_conjugates_back(g in any_graph(true), a in word(), w in word()) {
        let grp = Group::new(&g).unwrap();
        let [a, w] = [a, w].map(|x| grp.from_syllables(&syllables(g.n(), &x)));
        let r = cyclic_reduce(&a);
        prop_assert_eq!(r.conjugator.mul(&r.core).mul(&r.conjugator.inverse()), a.clone());
        let again = cyclic_reduce(&r.core);
        prop_assert!(again.conjugator.is_identity());
        prop_assert_eq!(&again.core, &r.core);
        // Conjugates have cores of the same length.
        prop_assert_eq!(cyclic_reduce(&a.conj(&w)).core.len(), r.core.len());
    }

    #[test]
    fn translation_length_laws(g in any_graph(true), a in word(), w in word(), k in 1i64..=4) {
        let grp = Group::new(&g).unwrap();
        let [a, w] = [a, w].map(|x| grp.from_syllables(&syllables(g.n(), &x)));
        for v in non_cone_vertices(&g) {
            let t = tree_action(&a, v).unwrap();
            prop_assert_eq!(t.kind == ActionKind::Elliptic, t.translation_length == 0);
            prop_assert_eq!(t.translation_length % 2, 0);
            prop_assert_eq!(tree_action(&a.conj(&w), v).unwrap().translation_length, t.translation_length);
            let tk = tree_action(&a.power(k).unwrap(), v).unwrap();
            prop_assert_eq!(tk.translation_length, k as u64 * t.translation_length);
        }
    }

    #[test]
    fn centralizer_generators_commute(g in any_graph(true), a in word()) {
        let grp = Group::new(&g).unwrap();
        let a = grp.from_syllables(&syllables(g.n(), &a));
        let d = centralizer_description(&a);
        for x in centralizer_generators(&a, &d) {
            prop_assert!(x.commutes_with(&a), "{} does not commute with {}", x, a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn factors_of_powers_torsion_free(g in any_graph(false), a in word(), p in prop_oneof![-4i64..=-1, 1i64..=4]) {
        let grp = Group::new(&g).unwrap();
        let a = grp.from_syllables(&syllables(g.n(), &a));
        let f = factors(std::slice::from_ref(&a)).unwrap();
        let fp = factors(&[a.power(p).unwrap()]).unwrap();
        let comps = |d: &gp_core::words::FactorDecomposition| d.factors.iter().map(|f| f.vertices.clone()).collect::<Vec<_>>();
        prop_assert_eq!(comps(&fp), comps(&f));
    }

    #[test]
    fn factors_of_powers_with_torsion_shrink(g in any_graph(true), a in word(), p in 1i64..=6) {
        let grp = Group::new(&g).unwrap();
        let a = grp.from_syllables(&syllables(g.n(), &a));
        let f = factors(std::slice::from_ref(&a)).unwrap();
        let fp = factors(&[a.power(p).unwrap()]).unwrap();
        for c in &fp.factors {
            prop_assert!(f.factors.iter().any(|d| d.vertices == c.vertices), "{:?} not a factor of {}", c.vertices, a);
        }
    }

    #[test]
    fn powers_have_common_roots(g in any_graph(false), a in word(), k in 2i64..=4) {
        let grp = Group::new(&g).unwrap();
        let a = grp.from_syllables(&syllables(g.n(), &a));
        prop_assume!(!a.is_identity());
        prop_assert!(cyclic_pair(&a, &a.power(k).unwrap()).unwrap().cyclic);
        prop_assert!(cyclic_pair(&a.power(2).unwrap(), &a.power(3).unwrap()).unwrap().cyclic);
    }

    #[test]
    fn irreducibility_survives_some_power(
        g in any_graph(false),
        a in word(),
        b in word(),
        (p, q) in prop_oneof![Just((2i64, 3i64)), Just((3, 4)), Just((2, 5))],
    ) {
        let grp = Group::new(&g).unwrap();
        let [a, b] = [a, b].map(|x| grp.from_syllables(&syllables(g.n(), &x)));
        prop_assume!(!a.is_identity() && !b.is_identity());
        let dec = factors(&[a.clone(), b.clone()]).unwrap();
        for (i, f) in dec.factors.iter().enumerate() {
            if f.singular || classify_in_factor(&[a.clone(), b.clone()], i).unwrap() != Classification::Irreducible {
                continue;
            }
            let mut kept = false;
            for s in [p, q] {
                for t in [p, q] {
                    let pair = [a.power(s).unwrap(), b.power(t).unwrap()];
                    let dp = factors(&pair).unwrap();
                    if let Some(j) = dp.factors.iter().position(|d| d.vertices == f.vertices) {
                        kept |= classify_in_factor(&pair, j).unwrap() == Classification::Irreducible;
                    }
                }
            }
            prop_assert!(kept, "no power pair keeps ({}, {}) irreducible on {:?}", a, b, f.vertices);
        }
    }
}

#[test]
fn worked_examples() {
    let f2 = Group::new(&catalog::f2()).unwrap();
    let z2 = Group::new(&catalog::z2_squared()).unwrap();
    assert_eq!(f2.parse("a b a^-1").unwrap().len(), 3);
    assert_eq!(f2.parse("a b a^-1 a b^-1").unwrap().to_word(), "a");
    assert_eq!(z2.parse("b a").unwrap().to_word(), "a b");
    assert_eq!(z2.parse("(a b)^3").unwrap().to_word(), "a^3 b^3");
    assert!(z2.parse("[a,b]").unwrap().is_identity());
    assert_ne!(f2.parse("a b").unwrap(), f2.parse("b a").unwrap());
    let pent = Group::new(&catalog::pentagon(GroupLabel::z2())).unwrap();
    let x: Element = pent.parse("(a0 a2)^2").unwrap();
    assert_eq!(x.to_word(), "a0 a2 a0 a2");
    assert!(oracle_normal_form(&pent, x.syllables(), ORACLE_CAP).unwrap().len() == 4);
    assert_eq!(element_order(&x), None);
}
