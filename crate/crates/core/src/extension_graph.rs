//! Finite pieces of the extension graph, built by repeatedly doubling a graph along vertex stars.
//!
//! Doubling `G` along `st(v)` keeps `st(v)` once and every other vertex twice; the second copy of
//! `w` is named `w_p` (or `w_p<step>` inside a trace), with `_` appended until the name is free.

use crate::bitset::MAX_VERTICES;
use crate::error::{GpError, Result};
use crate::graph_model::{GraphJson, LabeledGraph};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Default vertex bound for [`extension_ball`].
pub const DEFAULT_BALL_BOUND: usize = 200;

/// Doubles `g` along the star of `v`; copies get `w` + `suffix`.
pub fn double_along_star_with_suffix(g: &LabeledGraph, v: &str, suffix: &str) -> Result<LabeledGraph> {
    let vi = g.index(v)?;
    let star = g.st(vi);
    let outside = g.all().minus(&star).to_vec();
    let n = g.n();
    let total = 2 * n - star.len();
    if total > MAX_VERTICES {
        return Err(GpError::Capability(format!("doubling gives {total} vertices, above {MAX_VERTICES}")));
    }
    let mut names: Vec<String> = g.names().to_vec();
    let mut labels = g.labels().to_vec();
    let mut copy_of = vec![usize::MAX; n];
    for &w in &outside {
        let mut name = format!("{}{suffix}", g.name(w));
        while g.index_of(&name).is_some() || names[n..].contains(&name) {
            name.push('_');
        }
        copy_of[w] = names.len();
        names.push(name);
        labels.push(g.label(w).clone());
    }
    let mut edges = g.edges();
    for (a, b) in g.edges() {
        match (star.contains(a), star.contains(b)) {
            (true, true) => {}
            (true, false) => edges.push((a, copy_of[b])),
            (false, true) => edges.push((copy_of[a], b)),
            (false, false) => edges.push((copy_of[a], copy_of[b])),
        }
    }
    LabeledGraph::from_indexed(names, labels, &edges)
}

/// Doubles `g` along the star of `v`, naming copies `w_p`.
pub fn double_along_star(g: &LabeledGraph, v: &str) -> Result<LabeledGraph> {
    double_along_star_with_suffix(g, v, "_p")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "vertices")]
pub enum Schedule {
    /// Every vertex of the base graph once per round, in name order.
    AllVerticesPerRound,
    /// The listed base vertices once per round, in the given order.
    Explicit(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct DoublingStep {
    pub vertex: String,
    pub graph: LabeledGraph,
}

#[derive(Clone, Debug)]
pub struct DoublingTrace {
    pub base: LabeledGraph,
    pub steps: Vec<DoublingStep>,
    pub result: LabeledGraph,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DoublingStepJson {
    pub vertex: String,
    pub graph: GraphJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DoublingTraceJson {
    pub base: GraphJson,
    pub steps: Vec<DoublingStepJson>,
    pub result: GraphJson,
}

impl DoublingTrace {
    pub fn to_json(&self) -> DoublingTraceJson {
        DoublingTraceJson {
            base: self.base.to_json(),
            steps: self.steps.iter().map(|s| DoublingStepJson { vertex: s.vertex.clone(), graph: s.graph.to_json() }).collect(),
            result: self.result.to_json(),
        }
    }
}

/// A ball computation stopped early; `partial` holds every step completed before the failure.
#[derive(Clone, Debug)]
pub struct BallError {
    pub error: GpError,
    pub partial: DoublingTrace,
}

impl From<BallError> for GpError {
    fn from(e: BallError) -> GpError {
        e.error
    }
}

/// Iterated doubling along the stars of base vertices, `rounds` times over the schedule.
pub fn extension_ball(
    g: &LabeledGraph,
    rounds: usize,
    schedule: &Schedule,
    bound: usize,
) -> std::result::Result<DoublingTrace, BallError> {
    let mut trace = DoublingTrace { base: g.clone(), steps: Vec::new(), result: g.clone() };
    let order: Vec<String> = match schedule {
        Schedule::AllVerticesPerRound => g.names().to_vec(),
        Schedule::Explicit(vs) => vs.clone(),
    };
    if let Some(bad) = order.iter().find(|v| g.index_of(v).is_none()) {
        return Err(BallError { error: GpError::Input(format!("unknown vertex {bad:?} in schedule")), partial: trace });
    }
    for _ in 0..rounds {
        for v in &order {
            let cur = &trace.result;
            let st = cur.st(cur.index_of(v).expect("base vertices survive doubling")).len();
            let next_n = 2 * cur.n() - st;
            if next_n > bound {
                let error = GpError::Capability(format!(
                    "doubling at {v} after {} steps gives {next_n} vertices, above the bound {bound}",
                    trace.steps.len()
                ));
                return Err(BallError { error, partial: trace });
            }
            let suffix = format!("_p{}", trace.steps.len() + 1);
            let next = match double_along_star_with_suffix(cur, v, &suffix) {
                Ok(next) => next,
                Err(error) => return Err(BallError { error, partial: trace }),
            };
            trace.steps.push(DoublingStep { vertex: v.clone(), graph: next.clone() });
            trace.result = next;
        }
    }
    Ok(trace)
}

/// Plain undirected graph description for external renderers.
pub fn to_dot(g: &LabeledGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {} [label=\"{}:{}\"];", g.name(v), g.name(v), g.label(v).kind_string());
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", g.name(a), g.name(b));
    }
    out.push_str("}\n");
    out
}
