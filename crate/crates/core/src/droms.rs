//! Droms graphs (no induced path or cycle on four or more vertices), their recursive
//! decomposition into central splittings and free products, and canonical descriptors of the
//! elementary-equivalence classes of the associated right-angled Artin and Coxeter groups.

use crate::bitset::VSet;
use crate::cores::core_equal;
use crate::error::{contract, input, GpError, Result};
use crate::graph_model::{LabelKind, LabeledGraph};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Raag,
    Racg,
}

impl std::str::FromStr for Family {
    type Err = GpError;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "raag" => Ok(Family::Raag),
            "racg" => Ok(Family::Racg),
            other => input(format!("unknown family {other:?}; expected raag or racg")),
        }
    }
}

/// The family given by uniform labels: all infinite cyclic or all of order 2.
pub fn family_of(g: &LabeledGraph) -> Result<Family> {
    let z = g.labels().iter().all(|l| matches!(l.kind(), LabelKind::InfiniteCyclic));
    let z2 = g.labels().iter().all(|l| l.is_z2());
    match (z, z2) {
        (true, false) => Ok(Family::Raag),
        (false, true) => Ok(Family::Racg),
        // The empty graph is both; treat it as a RAAG.
        (true, true) => Ok(Family::Raag),
        (false, false) => input("Droms classification needs all labels Z or all labels Z/2"),
    }
}

fn check_family(g: &LabeledGraph, family: Option<Family>) -> Result<Family> {
    let f = family_of(g)?;
    match family {
        Some(want) if want != f && g.n() > 0 => input(format!("graph labels give {f:?}, not the requested {want:?}")),
        _ => Ok(f),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DromsCheck {
    pub droms: bool,
    /// Vertices of an induced path on 4 vertices or an induced 4-cycle, in order.
    pub witness: Option<Vec<String>>,
}

fn induced_c4(g: &LabeledGraph) -> Option<Vec<usize>> {
    // Opposite corners (a, c) and (b, d) are non-adjacent with both common neighbours.
    let n = g.n();
    for a in 0..n {
        for c in a + 1..n {
            if g.has_edge(a, c) {
                continue;
            }
            let common: Vec<usize> = g.adj(a).and(&g.adj(c)).iter().collect();
            for (i, &b) in common.iter().enumerate() {
                if let Some(&d) = common[i + 1..].iter().find(|&&d| !g.has_edge(b, d)) {
                    return Some(vec![a, b, c, d]);
                }
            }
        }
    }
    None
}

/// Whether the graph has no induced P4 and no induced cycle on ≥ 4 vertices.
///
/// A chordless cycle on ≥ 5 vertices contains an induced P4, so only 4-cycles need a separate search.
pub fn is_droms(g: &LabeledGraph) -> Result<DromsCheck> {
    family_of(g)?;
    let witness = g.find_induced_path(4).or_else(|| induced_c4(g));
    Ok(DromsCheck { droms: witness.is_none(), witness: witness.map(|w| w.iter().map(|&v| g.name(v).to_string()).collect()) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecompositionNode {
    /// `m` vertices adjacent to everything else at this stage, over the free product of the rest
    /// (absent when nothing remains).
    CentralSplit { m: usize, central: Vec<String>, rest: Option<Box<DecompositionNode>> },
    /// Connected components of a disconnected stage.
    FreeProduct { children: Vec<DecompositionNode> },
    Atom { vertex: String },
}

fn decompose_on(g: &LabeledGraph, s: &VSet) -> Result<DecompositionNode> {
    if s.len() == 1 {
        return Ok(DecompositionNode::Atom { vertex: g.name(s.first().expect("one vertex")).to_string() });
    }
    if g.is_connected_on(s) {
        let central = VSet::from_iter(s.iter().filter(|&v| s.without(v).is_subset(&g.adj(v))));
        if central.is_empty() {
            return contract(format!("stage {:?} is connected without a central vertex, so the graph is not Droms", g.set_names(s)));
        }
        let rest = s.minus(&central);
        let rest = if rest.is_empty() { None } else { Some(Box::new(decompose_on(g, &rest)?)) };
        return Ok(DecompositionNode::CentralSplit { m: central.len(), central: g.set_names(&central), rest });
    }
    let children = g.components(s).iter().map(|c| decompose_on(g, c)).collect::<Result<_>>()?;
    Ok(DecompositionNode::FreeProduct { children })
}

/// Recursive decomposition: strip central vertices, split the rest into components.
pub fn decompose(g: &LabeledGraph) -> Result<DecompositionNode> {
    let check = is_droms(g)?;
    if !check.droms {
        return contract(format!("not a Droms graph; witness {:?}", check.witness.unwrap_or_default()));
    }
    if g.n() == 0 {
        return Ok(DecompositionNode::FreeProduct { children: Vec::new() });
    }
    decompose_on(g, &g.all())
}

/// Canonical class descriptor of a Droms RAAG or RACG.
///
/// A central split prints as `Z^m x (…)` (or `Z2^m x (…)`); a free product prints as
/// `F[c₁,…,c_t;code]` with its non-atomic child classes sorted and the atom count normalized:
///
/// * RAAG: `t = 0` keeps `r ≤ 1` and maps `r ≥ 2` to `2+`; `t = 1` keeps `r = 0` and maps
///   `r ≥ 1` to `1+`; `t ≥ 2` maps every `r` to `*`.
/// * RACG: two atoms alone are `Dinf`; other counts are exact unless `collapse` is set, which
///   maps `t = 0, r ≥ 3` to `3+` and otherwise follows the RAAG rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DromsClass {
    pub family: Family,
    pub shape: String,
}

impl std::fmt::Display for DromsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", if self.family == Family::Raag { "raag" } else { "racg" }, self.shape)
    }
}

fn free_code(family: Family, collapse: bool, t: usize, r: usize) -> String {
    match (family, collapse, t, r) {
        (Family::Racg, _, 0, 2) => "Dinf".into(),
        (Family::Racg, false, _, r) => r.to_string(),
        (Family::Racg, true, 0, r) if r >= 3 => "3+".into(),
        (_, _, 0, r) if r >= 2 => "2+".into(),
        (_, _, 1, r) if r >= 1 => "1+".into(),
        (_, _, t, _) if t >= 2 => "*".into(),
        (_, _, _, r) => r.to_string(),
    }
}

fn shape(node: &DecompositionNode, family: Family, collapse: bool) -> String {
    let atom = if family == Family::Raag { "Z" } else { "Z2" };
    match node {
        DecompositionNode::Atom { .. } => atom.to_string(),
        DecompositionNode::CentralSplit { m, rest, .. } => {
            let inner = rest.as_ref().map_or_else(|| "1".to_string(), |r| shape(r, family, collapse));
            format!("{atom}^{m} x ({inner})")
        }
        DecompositionNode::FreeProduct { children } => {
            let r = children.iter().filter(|c| matches!(c, DecompositionNode::Atom { .. })).count();
            let mut parts: Vec<String> = children
                .iter()
                .filter(|c| !matches!(c, DecompositionNode::Atom { .. }))
                .map(|c| shape(c, family, collapse))
                .collect();
            parts.sort();
            format!("F[{};{}]", parts.join(","), free_code(family, collapse, parts.len(), r))
        }
    }
}

/// The class descriptor; `family` defaults to the one given by the labels.
pub fn eq_class(g: &LabeledGraph, family: Option<Family>, collapse_racg_free: bool) -> Result<DromsClass> {
    let family = check_family(g, family)?;
    let node = decompose(g)?;
    Ok(DromsClass { family, shape: shape(&node, family, collapse_racg_free) })
}

/// Elementary equivalence of two Droms groups of one family, by class descriptors.
pub fn eq(g1: &LabeledGraph, g2: &LabeledGraph, family: Option<Family>, collapse_racg_free: bool) -> Result<bool> {
    let f1 = check_family(g1, family)?;
    let f2 = check_family(g2, family)?;
    if f1 != f2 && g1.n() > 0 && g2.n() > 0 {
        return input(format!("family mismatch: {f1:?} vs {f2:?}"));
    }
    Ok(eq_class(g1, Some(f1), collapse_racg_free)? == eq_class(g2, Some(f1), collapse_racg_free)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqCoreReport {
    pub eq: bool,
    pub core_equal: bool,
    /// `eq ⇒ core_equal`.
    pub consistent: bool,
}

/// Checks that elementarily equivalent Droms groups have isomorphic cores.
pub fn eq_implies_core(g1: &LabeledGraph, g2: &LabeledGraph, family: Option<Family>, collapse_racg_free: bool) -> Result<EqCoreReport> {
    let e = eq(g1, g2, family, collapse_racg_free)?;
    let c = core_equal(g1, g2)?;
    Ok(EqCoreReport { eq: e, core_equal: c, consistent: !e || c })
}
