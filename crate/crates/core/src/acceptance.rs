//! The acceptance suite: golden examples and seeded property sweeps, one check per criterion.
//!
//! Shared by the `acceptance` test target and `gp selftest`. Every tolerance (sample counts,
//! sizes, time limits) is a constant in this file.

use crate::catalog;
use crate::cores::{core, core_of_reduced, core_random_order, core_equal, extended_core, min_core};
use crate::droms::{decompose, eq, eq_class, is_droms, Family};
use crate::enumerate::{graphs_up_to_iso, labeled_graphs, random_reduced_graph};
use crate::extension_graph::double_along_star_with_suffix;
use crate::graph_model::{isomorphic, labeled_iso};
use crate::reduction::{reduce, Mode};
use crate::smallcancel::{
    capture_test, center_instance, default_w, generic_center_instance, search_formal_solutions,
    verify_formal_solution, wcn_harness, DEFAULT_P, SYLLABLE_BUDGET,
};
use crate::words::oracle::{oracle_equal, ORACLE_CAP};
use crate::words::{
    classify_in_factor, essential_support, factors, orthogonal, tree_action, ActionKind, Classification, Element,
    Group, Syllable,
};
use crate::{GpError, GroupLabel, LabeledGraph, Result, VSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Scope {
    /// Golden examples and the seeded sampling sweeps.
    Fast,
    /// Every criterion, including the exhaustive small-graph sweeps.
    Full,
}

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub limit_secs: f64,
    pub fast: bool,
    pub run: fn(u64) -> Result<Verdict>,
}

pub struct Verdict {
    pub passed: bool,
    pub detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { passed, detail: detail.into() })
}

/// The first counterexample as a detail suffix, or nothing when there is none.
fn first<T: std::fmt::Debug>(bad: &[T]) -> String {
    bad.first().map_or_else(String::new, |b| format!(", first {b:?}"))
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    /// Wall-clock time; left out of JSON so reports stay byte-identical across runs.
    #[serde(skip)]
    pub seconds: f64,
    pub limit_secs: f64,
    pub detail: String,
    /// Why the criterion cannot pass as stated, when that is known.
    pub known_deviation: Option<String>,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("{status} [{:>2}] {} ({:.2}s, limit {}s): {}", self.id, self.title, self.seconds, self.limit_secs, self.detail);
        if let Some(k) = &self.known_deviation {
            s.push_str(&format!(" [known deviation: {k}]"));
        }
        s
    }
}

/// Criteria whose stated expectation contradicts the definitions it is computed from.
pub const KNOWN_DEVIATIONS: &[(u8, &str)] = &[(
    9,
    "the listed factors of G split b from a3, but b and a3 are not adjacent in the example graph, \
     so they lie in one complement component and hence in one join factor",
)];

pub const DEFAULT_SEED: u64 = 1;

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "golden core figures", limit_secs: 1.0, fast: true, run: golden_figures },
        Criterion { id: 2, title: "catalogue cores", limit_secs: 6.0, fast: true, run: catalogue_cores },
        Criterion { id: 3, title: "core uniqueness over removal orders", limit_secs: 120.0, fast: true, run: core_uniqueness },
        Criterion { id: 4, title: "extended core fixed points", limit_secs: 300.0, fast: false, run: ecore_fixed_points },
        Criterion { id: 5, title: "K_n implies AP_2n", limit_secs: 300.0, fast: false, run: clique_implies_ap },
        Criterion { id: 6, title: "doubling preserves AP_n", limit_secs: 300.0, fast: false, run: doubling_preserves_ap },
        Criterion { id: 7, title: "word equality against the rewriting oracle", limit_secs: 180.0, fast: true, run: oracle_pairs },
        Criterion { id: 8, title: "translation length laws", limit_secs: 60.0, fast: true, run: tl_laws },
        Criterion { id: 9, title: "factor example values", limit_secs: 1.0, fast: true, run: factor_example },
        Criterion { id: 10, title: "multiple conjugation lemma", limit_secs: 120.0, fast: false, run: wcn_lemma },
        Criterion { id: 11, title: "Droms classification", limit_secs: 300.0, fast: false, run: droms_criterion },
        Criterion { id: 12, title: "pentagon dihedral pair", limit_secs: 1.0, fast: true, run: pentagon_dihedral },
        Criterion { id: 13, title: "formal solutions", limit_secs: 60.0, fast: true, run: formal_solutions },
        Criterion { id: 14, title: "capture diagnostics", limit_secs: 120.0, fast: false, run: capture_diagnostics },
    ]
}

pub fn run_criterion(c: &Criterion, seed: u64) -> Outcome {
    let start = Instant::now();
    let res = (c.run)(seed);
    let seconds = start.elapsed().as_secs_f64();
    let (ok, mut detail) = match res {
        Ok(v) => (v.passed, v.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = seconds <= c.limit_secs;
    if !in_time {
        detail.push_str(" (time limit exceeded)");
    }
    Outcome {
        id: c.id,
        title: c.title.to_string(),
        passed: ok && in_time,
        seconds,
        limit_secs: c.limit_secs,
        detail,
        known_deviation: KNOWN_DEVIATIONS.iter().find(|(id, _)| *id == c.id).map(|(_, why)| why.to_string()),
    }
}

pub fn run(scope: Scope, seed: u64) -> Vec<Outcome> {
    criteria().iter().filter(|c| scope == Scope::Full || c.fast).map(|c| run_criterion(c, seed)).collect()
}

fn uniform(names: &[&str], edges: &[(&str, &str)]) -> LabeledGraph {
    LabeledGraph::uniform(names, edges, GroupLabel::z()).expect("hand-written graph is well formed")
}

fn iso(a: &LabeledGraph, b: &LabeledGraph) -> Result<bool> {
    Ok(labeled_iso(a, b)?.is_some())
}

fn golden_figures(_: u64) -> Result<Verdict> {
    let want_min = uniform(&["b", "c", "d", "e", "x"], &[("b", "c"), ("c", "d"), ("d", "e"), ("c", "x"), ("d", "x")]);
    let want_core = uniform(
        &["a2", "b", "c", "d", "e", "f", "x"],
        &[("a2", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("c", "x"), ("d", "x")],
    );
    let rep = core(&catalog::fig_gamma())?;
    let m = iso(&rep.min_core, &want_min)?;
    let c = iso(&rep.core, &want_core)?;
    verdict(m && c, format!("min core {} ({m}), core {} ({c})", rep.min_core, rep.core))
}

fn catalogue_cores(_: u64) -> Result<Verdict> {
    let mut bad = Vec::new();
    let mut check = |name: String, ok: bool| {
        if !ok {
            bad.push(name);
        }
    };
    for k in 2..=6 {
        check(format!("edgeless {k}"), iso(&core(&catalog::edgeless(k))?.core, &catalog::edgeless(2))?);
    }
    for k in 3..=7 {
        let c = catalog::cycle(k);
        check(format!("C{k}"), iso(&core(&c)?.core, &c)?);
    }
    check("C4 min core".into(), min_core(&catalog::cycle(4)).n() == 0);
    for k in 2..=6 {
        check(format!("K1,{k}"), iso(&core(&catalog::star(k))?.core, &catalog::path(3))?);
    }
    check("P4".into(), iso(&core(&catalog::path(4))?.core, &catalog::path(4))?);
    let passed = bad.is_empty();
    verdict(passed, if passed { "17 catalogue graphs exact".to_string() } else { format!("mismatches: {bad:?}") })
}

const UNIQUENESS_GRAPHS: usize = 200;
const UNIQUENESS_ORDERS: usize = 50;
const UNIQUENESS_MAX_N: usize = 8;

fn core_uniqueness(seed: u64) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..UNIQUENESS_GRAPHS {
        let g = random_reduced_graph(&mut rng, 2, UNIQUENESS_MAX_N);
        let reference = core(&g)?.core;
        for _ in 0..UNIQUENESS_ORDERS {
            if !iso(&core_random_order(&g, &mut rng)?.core, &reference)? {
                bad.push(g.to_string());
                break;
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("{UNIQUENESS_GRAPHS} graphs x {UNIQUENESS_ORDERS} orders, {} non-unique{}", bad.len(), first(&bad)),
    )
}

const ECORE_MAX_N: usize = 7;

fn ecore_fixed_points(_: u64) -> Result<Verdict> {
    let mut total = 0;
    let mut bad = Vec::new();
    for n in 1..=ECORE_MAX_N {
        for g in labeled_graphs(n, GroupLabel::z()) {
            total += 1;
            let base = if g.is_reduced() { g.clone() } else { reduce(&g, Mode::Positive)?.output };
            let e = extended_core(&g)?;
            let mc = isomorphic(&min_core(&e), &min_core(&base))?;
            let c = isomorphic(&core(&e)?.core, &core_of_reduced(&g)?.core)?;
            if !(mc && c) {
                bad.push(g.to_string());
            }
        }
    }
    verdict(bad.is_empty(), format!("{total} graphs, {} violations{}", bad.len(), first(&bad)))
}

const CLIQUE_AP_MAX_N: usize = 7;

fn clique_implies_ap(_: u64) -> Result<Verdict> {
    let mut total = 0;
    let mut bad = Vec::new();
    for n in 1..=CLIQUE_AP_MAX_N {
        for g in labeled_graphs(n, GroupLabel::z()) {
            total += 1;
            let k = g.clique_number()?;
            if !g.check_ap(2 * k).holds {
                bad.push(g.to_string());
            }
        }
    }
    verdict(bad.is_empty(), format!("{total} graphs, {} violations{}", bad.len(), first(&bad)))
}

const DOUBLING_MAX_N: usize = 6;
const DOUBLING_STEPS: usize = 3;
const DOUBLING_AP_MAX: usize = 6;

fn doubling_preserves_ap(_: u64) -> Result<Verdict> {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for n in 1..=DOUBLING_MAX_N {
        for g in labeled_graphs(n, GroupLabel::z()) {
            // AP_n is monotone in n, so it suffices to test the smallest n the input satisfies.
            let Some(ap) = g.min_ap(DOUBLING_AP_MAX) else { continue };
            let mut frontier = vec![g.clone()];
            for step in 1..=DOUBLING_STEPS {
                let mut next = Vec::new();
                for h in &frontier {
                    for v in h.names() {
                        let d = double_along_star_with_suffix(h, v, &format!("_p{step}"))?;
                        checked += 1;
                        if !d.check_ap(ap).holds {
                            bad.push(format!("{g} at {v}"));
                        }
                        next.push(d);
                    }
                }
                frontier = next;
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} doubled graphs, {} violations{}", bad.len(), first(&bad)))
}

/// Random graph on 2..=5 vertices with Z or Z/2 labels.
fn random_mixed_graph(rng: &mut ChaCha8Rng, allow_z3: bool) -> LabeledGraph {
    let n = rng.gen_range(2..=5);
    let labels = (0..n)
        .map(|_| match rng.gen_range(0..if allow_z3 { 3 } else { 2 }) {
            0 => GroupLabel::z(),
            1 => GroupLabel::z2(),
            _ => GroupLabel::zn(3).expect("3 ≥ 2"),
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    LabeledGraph::from_indexed(catalog::vertex_names(n), labels, &edges).expect("generated graph is well formed")
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<Syllable> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let e = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
            Syllable { vertex: rng.gen_range(0..n), exp: e }
        })
        .collect()
}

/// Same element, different spelling: commuting swaps and inserted cancelling pairs.
fn rewrite(rng: &mut ChaCha8Rng, g: &Group, w: &[Syllable], max_len: usize) -> Vec<Syllable> {
    let mut w = w.to_vec();
    for _ in 0..rng.gen_range(1..=6) {
        if rng.gen_bool(0.6) && w.len() >= 2 {
            let i = rng.gen_range(0..w.len() - 1);
            if g.commute(w[i].vertex, w[i + 1].vertex) {
                w.swap(i, i + 1);
            }
        } else if w.len() + 2 <= max_len {
            let i = rng.gen_range(0..=w.len());
            let v = rng.gen_range(0..g.n());
            let e = rng.gen_range(1..=2);
            w.splice(i..i, [Syllable { vertex: v, exp: e }, Syllable { vertex: v, exp: -e }]);
        }
    }
    w
}

const ORACLE_PAIRS: usize = 10_000;
const ORACLE_MAX_SYLLABLES: usize = 12;

fn oracle_pairs(seed: u64) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut equal, mut bad) = (0, Vec::new());
    for i in 0..ORACLE_PAIRS {
        let graph = random_mixed_graph(&mut rng, false);
        let group = Group::new(&graph)?;
        let u = random_word(&mut rng, graph.n(), ORACLE_MAX_SYLLABLES);
        // Half the pairs are rewrites of one word, so both verdicts are well represented.
        let v = if i % 2 == 0 {
            rewrite(&mut rng, &group, &u, ORACLE_MAX_SYLLABLES)
        } else {
            random_word(&mut rng, graph.n(), ORACLE_MAX_SYLLABLES)
        };
        let fast = group.from_syllables(&u) == group.from_syllables(&v);
        let slow = oracle_equal(&group, &u, &v, ORACLE_CAP)?;
        equal += usize::from(slow);
        if fast != slow {
            bad.push(format!("{graph}: {u:?} vs {v:?}"));
        }
    }
    verdict(bad.is_empty(), format!("{ORACLE_PAIRS} pairs ({equal} equal), {} discrepancies{}", bad.len(), first(&bad)))
}

const TL_SAMPLES: usize = 1_000;

fn tl_laws(seed: u64) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut done, mut bad) = (0, Vec::new());
    while done < TL_SAMPLES {
        let graph = random_mixed_graph(&mut rng, true);
        let v = rng.gen_range(0..graph.n());
        if graph.st(v) == graph.all() {
            continue;
        }
        let group = Group::new(&graph)?;
        let g = group.from_syllables(&random_word(&mut rng, graph.n(), 8));
        let h = group.from_syllables(&random_word(&mut rng, graph.n(), 6));
        let k = rng.gen_range(2..=5);
        let t = tree_action(&g, v)?;
        let tp = tree_action(&g.power(k)?, v)?;
        let tc = tree_action(&g.conj(&h), v)?;
        let ess = essential_support(&g).0;
        let criterion = !ess.contains(v) || ess.is_subset(&graph.st(v));
        let elliptic = t.kind == ActionKind::Elliptic;
        let ok = tp.translation_length == k as u64 * t.translation_length
            && tc.translation_length == t.translation_length
            && elliptic == (t.translation_length == 0)
            && elliptic == criterion;
        if !ok {
            bad.push(format!("{graph}: g = {g}, h = {h}, v = {}", graph.name(v)));
        }
        done += 1;
    }
    verdict(bad.is_empty(), format!("{TL_SAMPLES} samples, {} violations{}", bad.len(), first(&bad)))
}

fn names_of(graph: &LabeledGraph, s: &VSet) -> Vec<String> {
    graph.set_names(s)
}

fn sorted_sets(mut sets: Vec<Vec<String>>) -> Vec<Vec<String>> {
    for s in &mut sets {
        s.sort();
    }
    sets.sort();
    sets
}

fn factor_example(_: u64) -> Result<Verdict> {
    let graph = catalog::example_graph();
    let group = Group::new(&graph)?;
    let hw = group.parse("(a1 a2)^(c)")?;
    let gs = [hw.clone(), group.parse("a3")?, group.parse("b")?];
    let expect = |v: &[&[&str]]| sorted_sets(v.iter().map(|s| s.iter().map(|x| x.to_string()).collect()).collect());
    let mut mismatches = Vec::new();
    for (name, tuple, supp, ff, perp) in [
        ("H", std::slice::from_ref(&hw), vec!["a1", "a2"], expect(&[&["a1"], &["a2"]]), vec!["b"]),
        ("G", &gs[..], vec!["a1", "a2", "a3", "b"], expect(&[&["a2", "a3"], &["a1"], &["b"]]), vec![]),
    ] {
        let dec = factors(tuple)?;
        let got_ff = sorted_sets(dec.factors.iter().map(|f| f.vertices.clone()).collect());
        let got_perp = names_of(&graph, &orthogonal(tuple)?);
        if dec.support_vertices != supp {
            mismatches.push(format!("supp({name}) = {:?}, expected {supp:?}", dec.support_vertices));
        }
        if got_ff != ff {
            mismatches.push(format!("ff({name}) = {got_ff:?}, expected {ff:?}"));
        }
        if got_perp != perp {
            mismatches.push(format!("{name}^perp = {got_perp:?}, expected {perp:?}"));
        }
    }
    let passed = mismatches.is_empty();
    verdict(passed, if passed { "all eight values match".to_string() } else { mismatches.join("; ") })
}

const WCN_SAMPLES: usize = 100;
const WCN_MAX_LEN: usize = 4;

fn wcn_lemma(seed: u64) -> Result<Verdict> {
    let mut parts = Vec::new();
    let mut passed = true;
    for (name, graph) in [("F2", catalog::f2()), ("pentagon", catalog::pentagon(GroupLabel::z2()))] {
        let h = wcn_harness(&graph, WCN_SAMPLES, seed, WCN_MAX_LEN)?;
        passed &= h.violations.is_empty() && h.samples == WCN_SAMPLES;
        parts.push(format!("{name}: {} pairs at power {}, {} violations", h.samples, h.power, h.violations.len()));
    }
    verdict(passed, parts.join("; "))
}

const DROMS_MAX_N: usize = 6;

fn droms_criterion(_: u64) -> Result<Verdict> {
    let mut corpus = Vec::new();
    for n in 1..=DROMS_MAX_N {
        for e in graphs_up_to_iso(n) {
            let g = catalog::from_index_edges(n, &e, GroupLabel::z());
            if is_droms(&g)?.droms {
                corpus.push(g);
            }
        }
    }
    let mut classes = Vec::with_capacity(corpus.len());
    for g in &corpus {
        decompose(g)?;
        classes.push(eq_class(g, Some(Family::Raag), false)?);
        let racg = g.relabel(|_, _| GroupLabel::z2());
        eq_class(&racg, Some(Family::Racg), false)?;
    }
    let mut violations = 0;
    for i in 0..corpus.len() {
        for j in i + 1..corpus.len() {
            if classes[i] == classes[j] && !core_equal(&corpus[i], &corpus[j])? {
                violations += 1;
            }
        }
    }
    let z2 = catalog::z2_squared();
    let identities = [
        ("Z^2*Z = Z^2*F3", eq(&catalog::with_isolated(&z2, 1), &catalog::with_isolated(&z2, 3), None, false)?),
        ("F2 = F5", eq(&catalog::edgeless(2), &catalog::edgeless(5), None, false)?),
        ("Z^2 != Z^2*Z", !eq(&z2, &catalog::with_isolated(&z2, 1), None, false)?),
    ];
    let failed: Vec<&str> = identities.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    let distinct: std::collections::BTreeSet<_> = classes.iter().collect();
    verdict(
        failed.is_empty() && violations == 0,
        format!(
            "{} Droms graphs in {} classes, {violations} eq without core equality, failed identities {failed:?}",
            corpus.len(),
            distinct.len()
        ),
    )
}

fn pentagon_dihedral(_: u64) -> Result<Verdict> {
    let group = Group::new(&catalog::pentagon(GroupLabel::z2()))?;
    let pair = [group.parse("a0")?, group.parse("a2")?];
    let dec = factors(&pair)?;
    let class = if dec.factors.len() == 1 { Some(classify_in_factor(&pair, 0)?) } else { None };
    verdict(
        dec.support_vertices == ["a0", "a2"] && class == Some(Classification::Dihedral),
        format!("support {:?}, {} factors, class {class:?}", dec.support_vertices, dec.factors.len()),
    )
}

const FORMAL_SEARCH_LEN: usize = 4;

fn formal_solutions(_: u64) -> Result<Verdict> {
    let generic = verify_formal_solution(&generic_center_instance("x"))?.holds;
    let search = search_formal_solutions(&center_instance("x"), FORMAL_SEARCH_LEN)?;
    verdict(
        generic && search.solutions.is_empty(),
        format!(
            "y := x solves the generic formula: {generic}; center formula: {} solutions among {} substitutions of length <= {FORMAL_SEARCH_LEN}",
            search.solutions.len(),
            search.tried
        ),
    )
}

/// The tuples whose capture reports are emitted; `n = 1` keeps the evaluated words small.
pub fn capture_tuples() -> Result<Vec<(String, Vec<Element>)>> {
    let f2 = Group::new(&catalog::f2())?;
    let ex = Group::new(&catalog::example_graph())?;
    Ok(vec![
        ("(a, b) in F2".into(), vec![f2.parse("a")?, f2.parse("b")?]),
        ("(a, a^2) in F2".into(), vec![f2.parse("a")?, f2.parse("a^2")?]),
        ("((a1 a2)^c, a3, b) in the example graph".into(), vec![ex.parse("(a1 a2)^(c)")?, ex.parse("a3")?, ex.parse("b")?]),
    ])
}

const CAPTURE_N: usize = 1;

fn capture_diagnostics(seed: u64) -> Result<Verdict> {
    let w = default_w();
    let mut parts = Vec::new();
    for (name, tuple) in capture_tuples()? {
        let rep = match capture_test(&tuple, DEFAULT_P, CAPTURE_N, seed, &w, SYLLABLE_BUDGET) {
            Ok(r) => r,
            Err(GpError::Capability(e)) => return verdict(false, format!("{name}: {e}")),
            Err(e) => return Err(e),
        };
        let rates: Vec<String> =
            rep.factors.iter().map(|f| format!("{:?} {}/{}", f.factor, f.captured, f.evaluated)).collect();
        parts.push(format!("{name}: [{}]", rates.join(", ")));
    }
    verdict(true, parts.join("; "))
}
