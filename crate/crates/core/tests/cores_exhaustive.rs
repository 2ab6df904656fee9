//! Core and extended-core invariants over every reduced graph on few vertices.

use gp_core::cores::{core, extended_core, min_core, redundant_set, weak_set};
use gp_core::enumerate::labeled_graphs;
use gp_core::graph_model::isomorphic;
use gp_core::GroupLabel;

fn reduced_graphs(max_n: usize) -> Vec<gp_core::LabeledGraph> {
    (1..=max_n).flat_map(|n| labeled_graphs(n, GroupLabel::z())).filter(|g| g.is_reduced()).collect()
}

#[test]
fn weak_vertices_have_minimal_stars() {
    for g in reduced_graphs(7) {
        for v in weak_set(&g).iter() {
            let sv = g.st(v);
            assert!((0..g.n()).all(|u| u == v || !(g.st(u).is_subset(&sv) && g.st(u) != sv)), "{g}");
        }
    }
}

#[test]
fn core_contains_min_core_and_is_stable() {
    for g in reduced_graphs(7) {
        let rep = core(&g).unwrap();
        for v in rep.min_core.names() {
            assert!(rep.core.index_of(v).is_some(), "{g}");
        }
        assert!(redundant_set(&rep.core).is_empty(), "{g}");
        assert!(core(&rep.core).unwrap().removed_redundant.is_empty(), "{g}");
    }
}

#[test]
fn extended_core_preserves_both_cores() {
    let mut failures = Vec::new();
    for g in reduced_graphs(7) {
        let e = extended_core(&g).unwrap();
        let mc = isomorphic(&min_core(&e), &min_core(&g)).unwrap();
        let c = isomorphic(&core(&e).unwrap().core, &core(&g).unwrap().core).unwrap();
        if !(mc && c) {
            failures.push(format!("{g} -> {e} (min_core {mc}, core {c})"));
        }
    }
    assert!(failures.is_empty(), "{} failures:\n{}", failures.len(), failures.join("\n"));
}
