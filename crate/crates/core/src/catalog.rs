//! Named graph families and the worked example graphs used throughout tests and the CLI.

use crate::graph_model::{GroupLabel, LabeledGraph};

/// Vertex names `v1..vn`, zero-padded from ten vertices on so that name order matches numeric order.
pub fn vertex_names(n: usize) -> Vec<String> {
    let width = if n >= 10 { 2 } else { 1 };
    (1..=n).map(|i| format!("v{i:0width$}")).collect()
}

pub fn from_index_edges(n: usize, edges: &[(usize, usize)], label: GroupLabel) -> LabeledGraph {
    let names = vertex_names(n);
    LabeledGraph::from_indexed(names, vec![label; n], edges).expect("catalog graphs are well formed")
}

pub fn path_labeled(n: usize, label: GroupLabel) -> LabeledGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    from_index_edges(n, &edges, label)
}

/// Path on `n` vertices, all labels ℤ.
pub fn path(n: usize) -> LabeledGraph {
    path_labeled(n, GroupLabel::z())
}

pub fn cycle_labeled(n: usize, label: GroupLabel) -> LabeledGraph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    from_index_edges(n, &edges, label)
}

pub fn cycle(n: usize) -> LabeledGraph {
    cycle_labeled(n, GroupLabel::z())
}

pub fn complete_labeled(n: usize, label: GroupLabel) -> LabeledGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    from_index_edges(n, &edges, label)
}

pub fn complete(n: usize) -> LabeledGraph {
    complete_labeled(n, GroupLabel::z())
}

pub fn edgeless_labeled(n: usize, label: GroupLabel) -> LabeledGraph {
    from_index_edges(n, &[], label)
}

pub fn edgeless(n: usize) -> LabeledGraph {
    edgeless_labeled(n, GroupLabel::z())
}

/// K_{1,k}: centre `v1`, leaves `v2..`.
pub fn star(k: usize) -> LabeledGraph {
    let edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
    from_index_edges(k + 1, &edges, GroupLabel::z())
}

/// The eight-vertex graph Γ of the core figures.
pub fn fig_gamma() -> LabeledGraph {
    LabeledGraph::uniform(
        &["a1", "a2", "b", "c", "d", "e", "f", "x"],
        &[("a1", "b"), ("a2", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("c", "x"), ("d", "x")],
        GroupLabel::z(),
    )
    .expect("figure graph is well formed")
}

/// Six-vertex graph of the factor/orthogonality example.
pub fn example_graph() -> LabeledGraph {
    LabeledGraph::uniform(
        &["a1", "a2", "a3", "b", "c", "d"],
        &[("a1", "a2"), ("a1", "a3"), ("a1", "b"), ("a2", "b"), ("a3", "c"), ("b", "c"), ("c", "d")],
        GroupLabel::z(),
    )
    .expect("example graph is well formed")
}

/// Pentagon `a0..a4` with the given label on every vertex.
pub fn pentagon(label: GroupLabel) -> LabeledGraph {
    LabeledGraph::uniform(
        &["a0", "a1", "a2", "a3", "a4"],
        &[("a0", "a1"), ("a1", "a2"), ("a2", "a3"), ("a3", "a4"), ("a4", "a0")],
        label,
    )
    .expect("pentagon is well formed")
}

/// Free group on `a, b`.
pub fn f2() -> LabeledGraph {
    LabeledGraph::uniform(&["a", "b"], &[], GroupLabel::z()).expect("well formed")
}

/// ℤ² on `a, b`.
pub fn z2_squared() -> LabeledGraph {
    LabeledGraph::uniform(&["a", "b"], &[("a", "b")], GroupLabel::z()).expect("well formed")
}

/// Disjoint union of a graph with `k` isolated vertices named `i1..ik`, labelled like vertex 0.
pub fn with_isolated(g: &LabeledGraph, k: usize) -> LabeledGraph {
    let mut names: Vec<String> = g.names().to_vec();
    let mut labels: Vec<GroupLabel> = g.labels().to_vec();
    let label = labels.first().cloned().unwrap_or_else(GroupLabel::z);
    for i in 1..=k {
        names.push(format!("i{i}"));
        labels.push(label.clone());
    }
    LabeledGraph::from_indexed(names, labels, &g.edges()).expect("fresh names are distinct")
}
