//! Word constructors over tuples of group elements (conjugation words, second-derived-subgroup
//! twists, iterated substitutions), harnesses for their tree-action consequences, and
//! verification of plain formal solutions in free groups.
//!
//! Abstract words live in free groups on named variables, represented as graph products over an
//! edgeless graph with infinite cyclic labels.

use crate::error::{capability, contract, input, GpError, Result};
use crate::graph_model::{GroupLabel, LabeledGraph};
use crate::words::{classify_in_factor, factors, tree_action, ActionKind, Classification, Element, Group};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Default exponent of the iterated substitution; 13 is the coprime partner.
pub const DEFAULT_P: i64 = 11;
pub const DEFAULT_Q: i64 = 13;

/// Default twist word, an element of the second derived subgroup of F(x, y).
pub const DEFAULT_W: &str = "[[x,y],[x,y^2]]";

/// Largest syllable length an evaluation may reach before it is abandoned.
pub const SYLLABLE_BUDGET: usize = 2_000_000;

/// Largest letter length accepted by the derived-subgroup test.
const FOX_LETTER_CAP: u64 = 1 << 22;

/// Substitutes the named values for the variables of `w`.
fn evaluate_named(w: &Element, values: &BTreeMap<&str, Element>, budget: usize) -> Result<Element> {
    let graph = w.group().graph();
    let image: Vec<Element> = (0..graph.n())
        .map(|i| values.get(graph.name(i)).cloned().ok_or_else(|| GpError::Input(format!("no value for {}", graph.name(i)))))
        .collect::<Result<_>>()?;
    evaluate(w, &image, budget)
}

/// Free group on the given variable names; vertex indices follow the graph's name order.
pub fn free_group(vars: &[&str]) -> Result<Group> {
    let vs: Vec<(String, GroupLabel)> = vars.iter().map(|v| (v.to_string(), GroupLabel::z())).collect();
    Group::new(&LabeledGraph::new(vs, &[])?)
}

fn budget_check(e: &Element, budget: usize) -> Result<()> {
    if e.len() > budget {
        return capability(format!("budget_exceeded: intermediate word has {} syllables, above {budget}", e.len()));
    }
    Ok(())
}

/// Substitutes `values[i]` for the i-th variable of the free group of `w`.
pub fn evaluate(w: &Element, values: &[Element], budget: usize) -> Result<Element> {
    if values.len() != w.group().n() {
        return input(format!("word has {} variables, got {} values", w.group().n(), values.len()));
    }
    let target = match values.first() {
        Some(v) => v.group().clone(),
        None => return Ok(w.clone()),
    };
    let mut acc = target.identity();
    for s in w.syllables() {
        let piece = values[s.vertex].power(s.exp)?;
        if piece.group() != &target {
            return input("substituted values belong to different graph products");
        }
        acc = acc.mul(&piece);
        budget_check(&acc, budget)?;
    }
    Ok(acc)
}

fn two_vars() -> Group {
    free_group(&["x", "y"]).expect("valid variable names")
}

/// `v(x, y) = x^(y^x)`.
pub fn v_word(g: &Element, h: &Element) -> Element {
    g.conj(&h.conj(g))
}

/// `w_cn(x, y) = y^(v(x, y)) · x`.
pub fn w_cn(g: &Element, h: &Element) -> Result<Element> {
    if g.group() != h.group() {
        return input("elements belong to different graph products");
    }
    Ok(h.conj(&v_word(g, h)).mul(g))
}

/// The default twist word in F(x, y).
pub fn default_w() -> Element {
    two_vars().parse(DEFAULT_W).expect("default twist word parses")
}

/// Parses a twist word over the variables `x`, `y`.
pub fn parse_w(text: &str) -> Result<Element> {
    two_vars().parse(text)
}

type Laurent = HashMap<Vec<i64>, i64>;

/// Whether a free word lies in the second derived subgroup `F''`.
///
/// Through the Magnus embedding `F/F'' → [[F^ab, Z[F^ab]^k], [0, 1]]`, `w ∈ F''` exactly when its
/// abelianization vanishes and every Fox derivative vanishes in `Z[F^ab]`.
pub fn in_second_derived(w: &Element) -> Result<bool> {
    let k = w.group().n();
    let letters: u64 = w.syllables().iter().map(|s| s.exp.unsigned_abs()).sum();
    if letters > FOX_LETTER_CAP {
        return capability(format!("word has {letters} letters, above the derived-subgroup test cap {FOX_LETTER_CAP}"));
    }
    let mut at = vec![0i64; k];
    let mut fox: Vec<Laurent> = vec![Laurent::new(); k];
    for s in w.syllables() {
        for _ in 0..s.exp.unsigned_abs() {
            if s.exp > 0 {
                *fox[s.vertex].entry(at.clone()).or_default() += 1;
                at[s.vertex] += 1;
            } else {
                at[s.vertex] -= 1;
                *fox[s.vertex].entry(at.clone()).or_default() -= 1;
            }
        }
    }
    Ok(at.iter().all(|&a| a == 0) && fox.iter().all(|d| d.values().all(|&c| c == 0)))
}

/// `w*(x, y) = x · w(x, y)` at `(g, h)`; `w` must lie in `F''` of F(x, y).
pub fn w_star(g: &Element, h: &Element, w: &Element) -> Result<Element> {
    w_star_budget(g, h, w, SYLLABLE_BUDGET)
}

fn w_star_budget(g: &Element, h: &Element, w: &Element, budget: usize) -> Result<Element> {
    if w.group().n() != 2 {
        return input("twist word must be over the two variables x, y");
    }
    if !in_second_derived(w)? {
        return contract(format!("twist word {w} is not in the second derived subgroup"));
    }
    let r = g.mul(&evaluate(w, &[g.clone(), h.clone()], budget)?);
    budget_check(&r, budget)?;
    Ok(r)
}

/// `Λ_{i₁}(Λ_{i₂}(… Λ_{iₘ}(v)))` at the tuple `c`, where `Λ_j(u) = w*(uᵖ, c_j)`; indices are 1-based.
pub fn lambda(seq: &[usize], base: &Element, c: &[Element], p: i64, w: &Element) -> Result<Element> {
    lambda_budget(seq, base, c, p, w, SYLLABLE_BUDGET)
}

pub fn lambda_budget(seq: &[usize], base: &Element, c: &[Element], p: i64, w: &Element, budget: usize) -> Result<Element> {
    if p < 2 {
        return input(format!("Λ exponent must be at least 2, got {p}"));
    }
    if let Some(&bad) = seq.iter().find(|&&i| i == 0 || i > c.len()) {
        return input(format!("index {bad} out of range 1..{}", c.len()));
    }
    let mut acc = base.clone();
    for &j in seq.iter().rev() {
        let x = acc.power(p)?;
        budget_check(&x, budget)?;
        acc = w_star_budget(&x, &c[j - 1], w, budget)?;
    }
    Ok(acc)
}

/// One member `Λ_τ(b)` of the capture family, with `b` a product of at most two of the `y_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptureWord {
    /// 1-based indices applied outermost first.
    pub tau: Vec<usize>,
    /// 1-based indices of the positive-ball element `y_{b₁} y_{b₂} …`.
    pub base: Vec<usize>,
}

impl CaptureWord {
    pub fn describe(&self) -> String {
        let tau: Vec<String> = self.tau.iter().map(usize::to_string).collect();
        let base =
            if self.base.is_empty() { "1".to_string() } else { self.base.iter().map(|i| format!("y{i}")).collect::<Vec<_>>().join(" ") };
        format!("Λ_({})({base})", tau.join(","))
    }

    /// Evaluates the word at the tuple `c`.
    pub fn evaluate(&self, c: &[Element], p: i64, w: &Element, budget: usize) -> Result<Element> {
        let group = c.first().map(|x| x.group().clone()).ok_or_else(|| GpError::Input("empty tuple".into()))?;
        if let Some(&bad) = self.base.iter().find(|&&i| i == 0 || i > c.len()) {
            return input(format!("index {bad} out of range 1..{}", c.len()));
        }
        let base = self.base.iter().fold(group.identity(), |a, &i| a.mul(&c[i - 1]));
        lambda_budget(&self.tau, &base, c, p, w, budget)
    }

    /// The abstract word in F(y1, …, yk).
    pub fn expand(&self, k: usize, p: i64, w: &Element, budget: usize) -> Result<Element> {
        let names: Vec<String> = (1..=k).map(|i| format!("y{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let f = free_group(&refs)?;
        let ys: Vec<Element> = names.iter().map(|y| f.vertex(y)).collect::<Result<_>>()?;
        self.evaluate(&ys, p, w, budget)
    }
}

/// `{Λ_τ(b) : b ∈ B₂(y₁, …, y_k)}` with `τ` equal to `n` copies of `(1, …, k)`.
pub fn capture_words(k: usize, n: usize) -> Vec<CaptureWord> {
    let tau: Vec<usize> = (0..n).flat_map(|_| 1..=k).collect();
    let mut bases = vec![Vec::new()];
    bases.extend((1..=k).map(|i| vec![i]));
    bases.extend((1..=k).flat_map(|i| (1..=k).map(move |j| vec![i, j])));
    bases.into_iter().map(|base| CaptureWord { tau: tau.clone(), base }).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CaptureOutcome {
    pub word: String,
    /// `None` when the evaluation exceeded the syllable budget.
    pub captured: Option<bool>,
    pub syllables: Option<usize>,
    pub budget_exceeded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorCapture {
    pub factor: Vec<String>,
    pub outcomes: Vec<CaptureOutcome>,
    pub evaluated: usize,
    pub captured: usize,
    /// Captured words over evaluated words.
    pub rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaptureReport {
    pub r: i64,
    pub p: i64,
    pub n: usize,
    pub seed: u64,
    pub twist: String,
    pub factors: Vec<FactorCapture>,
}

/// Whether `𝒢(Δ)^h` (with `h` the decomposition conjugator, `c = h⁻¹ y h`) is one of the factors of `dec`.
fn has_factor(dec: &crate::words::FactorDecomposition, delta: &crate::bitset::VSet, h: &Element) -> bool {
    let normalizer = h.group().graph().star(delta);
    dec.factors.iter().any(|f| f.component == *delta) && dec.conjugator.mul(&h.inverse()).support().is_subset(&normalizer)
}

/// For every irreducible factor of `c`, evaluates each capture word at `(c_i^r)` with
/// `r = 10(n + 4)` and records whether the factor reappears among the factors of the result.
///
/// Diagnostic only. `seed` is recorded for reproducibility; the evaluation is deterministic.
pub fn capture_test(c: &[Element], p: i64, n: usize, seed: u64, w: &Element, budget: usize) -> Result<CaptureReport> {
    if c.is_empty() {
        return input("capture needs a non-empty tuple");
    }
    let r = 10 * (n as i64 + 4);
    let dec = factors(c)?;
    let powered: Vec<Element> = c.iter().map(|x| x.power(r)).collect::<Result<_>>()?;
    let words = capture_words(c.len(), n);
    let mut out = Vec::new();
    for (idx, f) in dec.factors.iter().enumerate() {
        if f.singular || classify_in_factor(c, idx)? != Classification::Irreducible {
            continue;
        }
        let mut outcomes = Vec::new();
        for u in &words {
            let o = match u.evaluate(&powered, p, w, budget) {
                Ok(e) => {
                    let du = factors(std::slice::from_ref(&e))?;
                    let captured = has_factor(&du, &f.component, &dec.conjugator);
                    CaptureOutcome { word: u.describe(), captured: Some(captured), syllables: Some(e.len()), budget_exceeded: false }
                }
                Err(GpError::Capability(_)) => {
                    CaptureOutcome { word: u.describe(), captured: None, syllables: None, budget_exceeded: true }
                }
                Err(e) => return Err(e),
            };
            outcomes.push(o);
        }
        let evaluated = outcomes.iter().filter(|o| o.captured.is_some()).count();
        let captured = outcomes.iter().filter(|o| o.captured == Some(true)).count();
        let rate = if evaluated == 0 { 0.0 } else { captured as f64 / evaluated as f64 };
        out.push(FactorCapture { factor: f.vertices.clone(), outcomes, evaluated, captured, rate });
    }
    Ok(CaptureReport { r, p, n, seed, twist: w.to_word(), factors: out })
}

#[derive(Clone, Debug, Serialize)]
pub struct WcnVertexOutcome {
    pub vertex: String,
    pub tl_g: u64,
    pub tl_h: u64,
    pub tl_w: u64,
    pub hyperbolic: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WcnReport {
    pub skipped: bool,
    pub reason: Option<String>,
    pub power: i64,
    /// Smallest n with AP_n for the graph.
    pub ap_n: Option<usize>,
    pub factors: Vec<Vec<String>>,
    pub w_syllables: usize,
    pub outcomes: Vec<WcnVertexOutcome>,
    pub holds: bool,
}

/// Largest AP parameter probed when checking the power hypothesis.
pub const AP_CAP: usize = 12;

/// Checks that `w_cn(gᴾ, hᴾ)` is hyperbolic on `T_v` with `tl ≥ max(tl(gᴾ), tl(hᴾ))` for every
/// vertex `v` of every factor on which `⟨gᴾ, hᴾ⟩` is irreducible. Requires `P ≥ 10(n + 3)` with `n`
/// the AP parameter of the graph; otherwise the report is skipped.
pub fn wcn_check(g: &Element, h: &Element, power: i64) -> Result<WcnReport> {
    let graph = g.group().graph();
    let ap_n = graph.min_ap(AP_CAP);
    let mut report = WcnReport {
        skipped: true,
        reason: None,
        power,
        ap_n,
        factors: Vec::new(),
        w_syllables: 0,
        outcomes: Vec::new(),
        holds: true,
    };
    let Some(n) = ap_n else {
        report.reason = Some(format!("AP parameter above {AP_CAP}"));
        return Ok(report);
    };
    if power < 10 * (n as i64 + 3) {
        report.reason = Some(format!("power {power} below 10(n+3) = {} for AP_{n}", 10 * (n + 3)));
        return Ok(report);
    }
    let (gp, hp) = (g.power(power)?, h.power(power)?);
    let pair = [gp.clone(), hp.clone()];
    let dec = factors(&pair)?;
    let mut vertices = BTreeSet::new();
    for (i, f) in dec.factors.iter().enumerate() {
        if !f.singular && classify_in_factor(&pair, i)? == Classification::Irreducible {
            report.factors.push(f.vertices.clone());
            vertices.extend(f.component.iter().filter(|&v| graph.st(v) != graph.all()));
        }
    }
    if vertices.is_empty() {
        report.reason = Some("pair is not irreducible on any factor".into());
        return Ok(report);
    }
    let w = w_cn(&gp, &hp)?;
    report.skipped = false;
    report.w_syllables = w.len();
    for v in vertices {
        let (tg, th, tw) = (tree_action(&gp, v)?, tree_action(&hp, v)?, tree_action(&w, v)?);
        let hyperbolic = tw.kind == ActionKind::Hyperbolic;
        let holds = hyperbolic && tw.translation_length >= tg.translation_length.max(th.translation_length);
        report.holds &= holds;
        report.outcomes.push(WcnVertexOutcome {
            vertex: graph.name(v).to_string(),
            tl_g: tg.translation_length,
            tl_h: th.translation_length,
            tl_w: tw.translation_length,
            hyperbolic,
            holds,
        });
    }
    Ok(report)
}

/// A uniformly random word of `len` syllables with exponents in `±1..=max_exp`, merged into normal form.
pub fn random_element(group: &Group, rng: &mut ChaCha8Rng, len: usize, max_exp: i64) -> Element {
    let syl: Vec<crate::words::Syllable> = (0..len)
        .map(|_| {
            let e = rng.gen_range(1..=max_exp);
            crate::words::Syllable { vertex: rng.gen_range(0..group.n()), exp: if rng.gen_bool(0.5) { e } else { -e } }
        })
        .collect();
    group.from_syllables(&syl)
}

#[derive(Clone, Debug, Serialize)]
pub struct WcnHarness {
    pub samples: usize,
    pub attempts: usize,
    pub power: i64,
    pub violations: Vec<String>,
}

/// Runs [`wcn_check`] on `samples` seeded random pairs that are irreducible on some factor after
/// powering, using the smallest admissible power.
pub fn wcn_harness(graph: &LabeledGraph, samples: usize, seed: u64, max_len: usize) -> Result<WcnHarness> {
    use rand::SeedableRng;
    let group = Group::new(graph)?;
    let n = graph.min_ap(AP_CAP).ok_or_else(|| GpError::Capability(format!("AP parameter above {AP_CAP}")))?;
    let power = 10 * (n as i64 + 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = WcnHarness { samples: 0, attempts: 0, power, violations: Vec::new() };
    while out.samples < samples {
        out.attempts += 1;
        if out.attempts > 200 * samples.max(1) {
            return capability(format!("found only {} irreducible pairs in {} attempts", out.samples, out.attempts));
        }
        let len_g = rng.gen_range(1..=max_len);
        let len_h = rng.gen_range(1..=max_len);
        let g = random_element(&group, &mut rng, len_g, 2);
        let h = random_element(&group, &mut rng, len_h, 2);
        if crate::words::element_order(&g).is_some() || crate::words::element_order(&h).is_some() {
            continue;
        }
        let rep = wcn_check(&g, &h, power)?;
        if rep.skipped {
            continue;
        }
        out.samples += 1;
        if !rep.holds {
            out.violations.push(format!("g = {g}, h = {h}"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantifierBlock {
    #[serde(default)]
    pub universal: Vec<String>,
    #[serde(default)]
    pub existential: Vec<String>,
}

/// A positive formula `∀x¹∃y¹…∀xᵐ∃yᵐ ⋁_j Σ_j = 1` in free variables `z`, with a substitution
/// for every existential variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSolutionInstance {
    #[serde(default)]
    pub free: Vec<String>,
    pub blocks: Vec<QuantifierBlock>,
    /// Each disjunct is a system of words that must all be trivial. No disjuncts is the trivial system.
    pub disjuncts: Vec<Vec<String>>,
    #[serde(default)]
    pub substitution: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalVerdict {
    pub holds: bool,
    /// Index of the first disjunct killed by the substitution.
    pub disjunct: Option<usize>,
}

impl FormalSolutionInstance {
    fn all_vars(&self) -> Result<Vec<String>> {
        let mut vars: Vec<String> = self.free.clone();
        for b in &self.blocks {
            vars.extend(b.universal.iter().cloned());
            vars.extend(b.existential.iter().cloned());
        }
        let distinct: BTreeSet<&String> = vars.iter().collect();
        if distinct.len() != vars.len() {
            return input("variable declared twice");
        }
        Ok(vars)
    }

    /// Free group on `z` and all universal variables, with each block's allowed variables.
    fn target(&self) -> Result<(Group, Vec<Vec<String>>)> {
        let mut names: Vec<String> = self.free.clone();
        names.extend(self.blocks.iter().flat_map(|b| b.universal.iter().cloned()));
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let group = free_group(&refs)?;
        let mut allowed = Vec::new();
        let mut so_far = self.free.clone();
        for b in &self.blocks {
            so_far.extend(b.universal.iter().cloned());
            allowed.push(so_far.clone());
        }
        Ok((group, allowed))
    }
}

/// Whether the substitution is a formal solution: after replacing each `y` by its word, some
/// disjunct becomes a system of trivial words in the free group on `z` and the `x`s.
pub fn verify_formal_solution(inst: &FormalSolutionInstance) -> Result<FormalVerdict> {
    let vars = inst.all_vars()?;
    let (target, allowed) = inst.target()?;
    let existential: BTreeSet<&String> = inst.blocks.iter().flat_map(|b| b.existential.iter()).collect();
    if let Some(extra) = inst.substitution.keys().find(|k| !existential.contains(k)) {
        return input(format!("substitution for {extra:?}, which is not an existential variable"));
    }
    let mut values: BTreeMap<&str, Element> = BTreeMap::new();
    for name in inst.free.iter().chain(inst.blocks.iter().flat_map(|b| b.universal.iter())) {
        values.insert(name, target.vertex(name)?);
    }
    for (l, b) in inst.blocks.iter().enumerate() {
        let refs: Vec<&str> = allowed[l].iter().map(String::as_str).collect();
        let local = free_group(&refs)?;
        for y in &b.existential {
            let Some(text) = inst.substitution.get(y) else {
                return input(format!("no substitution for existential variable {y:?}"));
            };
            let word = local.parse(text).map_err(|e| match e {
                GpError::Input(m) => GpError::Input(format!("substitution for {y} may only use {refs:?}: {m}")),
                other => other,
            })?;
            let value = evaluate_named(&word, &values, SYLLABLE_BUDGET)?;
            values.insert(y, value);
        }
    }
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let source = free_group(&refs)?;
    if inst.disjuncts.is_empty() {
        return Ok(FormalVerdict { holds: true, disjunct: None });
    }
    for (j, sys) in inst.disjuncts.iter().enumerate() {
        let mut all = true;
        for text in sys {
            let word = source.parse(text)?;
            if !evaluate_named(&word, &values, SYLLABLE_BUDGET)?.is_identity() {
                all = false;
                break;
            }
        }
        if all {
            return Ok(FormalVerdict { holds: true, disjunct: Some(j) });
        }
    }
    Ok(FormalVerdict { holds: false, disjunct: None })
}

/// Freely reduced words of at most `max_len` letters over `vars`.
pub fn free_words(vars: &[String], max_len: usize) -> Vec<String> {
    let letters: Vec<(usize, i64)> = (0..vars.len()).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let mut out = vec![Vec::<(usize, i64)>::new()];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.last().is_some_and(|&(v, e)| v == l.0 && e == -l.1) {
                    continue;
                }
                let mut u = w.clone();
                u.push(l);
                next.push(u);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.into_iter()
        .map(|w| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|&(v, e)| if e > 0 { vars[v].clone() } else { format!("{}^-1", vars[v]) }).collect::<Vec<_>>().join(" ")
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalSearch {
    pub max_len: usize,
    pub tried: usize,
    pub solutions: Vec<BTreeMap<String, String>>,
}

/// Every substitution with words of at most `max_len` letters (respecting the triangular
/// dependence) that is a formal solution of the instance's formula.
pub fn search_formal_solutions(inst: &FormalSolutionInstance, max_len: usize) -> Result<FormalSearch> {
    let (_, allowed) = inst.target()?;
    let mut slots: Vec<(String, Vec<String>)> = Vec::new();
    for (l, b) in inst.blocks.iter().enumerate() {
        let words = free_words(&allowed[l], max_len);
        slots.extend(b.existential.iter().map(|y| (y.clone(), words.clone())));
    }
    let total: usize = slots.iter().map(|(_, w)| w.len()).product();
    if total > 1_000_000 {
        return capability(format!("{total} substitutions exceed the search cap"));
    }
    let mut search = FormalSearch { max_len, tried: 0, solutions: Vec::new() };
    let mut idx = vec![0usize; slots.len()];
    loop {
        let mut trial = inst.clone();
        trial.substitution = slots.iter().zip(&idx).map(|((y, ws), &i)| (y.clone(), ws[i].clone())).collect();
        search.tried += 1;
        if verify_formal_solution(&trial)?.holds {
            search.solutions.push(trial.substitution);
        }
        let mut k = 0;
        while k < slots.len() {
            idx[k] += 1;
            if idx[k] < slots[k].1.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == slots.len() {
            return Ok(search);
        }
    }
}

/// `∀x ∃y [x y⁻¹, z] = 1`, with the given substitution for `y`.
pub fn generic_center_instance(y: &str) -> FormalSolutionInstance {
    FormalSolutionInstance {
        free: vec!["z".into()],
        blocks: vec![QuantifierBlock { universal: vec!["x".into()], existential: vec!["y".into()] }],
        disjuncts: vec![vec!["[x y^-1, z]".into()]],
        substitution: BTreeMap::from([("y".to_string(), y.to_string())]),
    }
}

/// `∀x ∃y [x, z] = 1` (the existential variable is unused), with the given substitution for `y`.
pub fn center_instance(y: &str) -> FormalSolutionInstance {
    FormalSolutionInstance {
        free: vec!["z".into()],
        blocks: vec![QuantifierBlock { universal: vec!["x".into()], existential: vec!["y".into()] }],
        disjuncts: vec![vec!["[x, z]".into()]],
        substitution: BTreeMap::from([("y".to_string(), y.to_string())]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::words::{essential_support, support};
    use rand::SeedableRng;

    fn f2() -> Group {
        Group::new(&catalog::f2()).unwrap()
    }

    #[test]
    fn w_cn_values() {
        let f = f2();
        let (a, b) = (f.vertex("a").unwrap(), f.vertex("b").unwrap());
        assert!(w_cn(&f.identity(), &f.identity()).unwrap().is_identity());
        let w = w_cn(&a, &b).unwrap();
        assert_eq!(w, f.parse("b^(a^(b^(a))) a").unwrap());
        // Free reduction of v⁻¹ y v x with v = x⁻¹ y⁻¹ x y x.
        assert_eq!(w.to_word(), "a^-1 b^-1 a^-1 b a b a^-1 b^-1 a b a^2");
        let z2 = Group::new(&catalog::z2_squared()).unwrap();
        let (a, b) = (z2.vertex("a").unwrap(), z2.vertex("b").unwrap());
        assert_eq!(w_cn(&a, &b).unwrap(), b.mul(&a));
    }

    #[test]
    fn second_derived_membership() {
        let g = two_vars();
        assert!(in_second_derived(&default_w()).unwrap());
        assert!(in_second_derived(&g.identity()).unwrap());
        assert!(!in_second_derived(&g.parse("[x,y]").unwrap()).unwrap());
        assert!(!in_second_derived(&g.parse("x").unwrap()).unwrap());
        assert!(in_second_derived(&g.parse("[[x,y],[x^2,y^-1]]").unwrap()).unwrap());
        assert!(!in_second_derived(&g.parse("[x,y] [x,y^2]").unwrap()).unwrap());
    }

    #[test]
    fn w_star_values() {
        let z2 = Group::new(&catalog::z2_squared()).unwrap();
        let (a, b) = (z2.vertex("a").unwrap(), z2.vertex("b").unwrap());
        assert_eq!(w_star(&a, &b, &default_w()).unwrap(), a);
        assert_eq!(w_star(&a, &b, &two_vars().identity()).unwrap(), a);
        let f = f2();
        let (a, b) = (f.vertex("a").unwrap(), f.vertex("b").unwrap());
        let s = w_star(&a, &b, &default_w()).unwrap();
        assert!(s != a && s.syllables()[0].vertex == 0);
        assert!(matches!(w_star(&a, &b, &parse_w("[x,y]").unwrap()), Err(GpError::Contract(_))));
    }

    #[test]
    fn lambda_values() {
        let f = f2();
        let (a, b) = (f.vertex("a").unwrap(), f.vertex("b").unwrap());
        let w = default_w();
        assert_eq!(lambda(&[], &b, std::slice::from_ref(&a), 2, &w).unwrap(), b);
        assert_eq!(lambda(&[1], &a, std::slice::from_ref(&a), 2, &w).unwrap(), a.power(2).unwrap());
        let l = lambda(&[1, 2], &a.mul(&b), &[a.clone(), b.clone()], 2, &w).unwrap();
        assert!(!l.is_identity());
        assert_eq!(f.graph().set_names(&essential_support(&l).0), ["a", "b"]);
        assert!(matches!(lambda(&[3], &a, std::slice::from_ref(&a), 2, &w), Err(GpError::Input(_))));
    }

    #[test]
    fn capture_family() {
        let u = capture_words(1, 1);
        assert_eq!(u.len(), 3);
        assert_eq!(u.iter().map(|c| c.base.clone()).collect::<Vec<_>>(), [vec![], vec![1], vec![1, 1]]);
        for k in 1..=4 {
            assert_eq!(capture_words(k, 2).len(), 1 + k + k * k);
        }
        let u = capture_words(2, 2);
        assert_eq!(u.len(), 7);
        assert!(u.iter().all(|c| c.tau == [1, 2, 1, 2]));
        assert_eq!(u[3].describe(), "Λ_(1,2,1,2)(y1 y1)");
        // Trivial tuples evaluate to the identity.
        let f = f2();
        let ones = vec![f.identity(), f.identity()];
        for c in &u {
            assert!(c.evaluate(&ones, DEFAULT_P, &default_w(), SYLLABLE_BUDGET).unwrap().is_identity());
        }
        let e = capture_words(1, 1)[1].expand(1, 2, &default_w(), SYLLABLE_BUDGET).unwrap();
        assert_eq!(e.to_word(), "y1^2");
    }

    #[test]
    fn capture_runs() {
        let f = f2();
        let (a, b) = (f.vertex("a").unwrap(), f.vertex("b").unwrap());
        let rep = capture_test(&[a.clone(), b.clone()], DEFAULT_P, 1, 1, &default_w(), SYLLABLE_BUDGET).unwrap();
        assert_eq!(rep.r, 50);
        assert_eq!(rep.factors.len(), 1);
        assert_eq!(rep.factors[0].outcomes.len(), 7);
        let rep = capture_test(&[a.clone(), a.power(2).unwrap()], DEFAULT_P, 1, 1, &default_w(), SYLLABLE_BUDGET).unwrap();
        assert!(rep.factors.is_empty());
        let tiny = capture_test(&[a.clone(), b.clone()], DEFAULT_P, 1, 1, &default_w(), 10).unwrap();
        assert!(tiny.factors[0].outcomes.iter().any(|o| o.budget_exceeded));
    }

    #[test]
    fn wcn_examples() {
        let f = f2();
        let (a, b) = (f.vertex("a").unwrap(), f.vertex("b").unwrap());
        let rep = wcn_check(&a, &b, 50).unwrap();
        assert!(!rep.skipped && rep.holds, "{rep:?}");
        assert_eq!(rep.outcomes.iter().map(|o| o.vertex.as_str()).collect::<Vec<_>>(), ["a", "b"]);
        assert!(wcn_check(&a, &b, 40).unwrap().skipped);
        let z2 = Group::new(&catalog::z2_squared()).unwrap();
        let rep = wcn_check(&z2.vertex("a").unwrap(), &z2.vertex("b").unwrap(), 100).unwrap();
        assert!(rep.skipped);
        let pent = Group::new(&catalog::pentagon(GroupLabel::z2())).unwrap();
        let (g, h) = (pent.parse("a0 a2").unwrap(), pent.parse("a1 a3").unwrap());
        let rep = wcn_check(&g, &h, 70).unwrap();
        assert!(!rep.skipped && rep.holds, "{rep:?}");
    }

    #[test]
    fn random_pairs_satisfy_wcn() {
        let h = wcn_harness(&catalog::f2(), 10, 7, 4).unwrap();
        assert!(h.violations.is_empty(), "{:?}", h.violations);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = random_element(&f2(), &mut rng, 5, 2);
        assert!(support(&e).len() <= 2);
    }

    #[test]
    fn formal_solutions() {
        assert!(verify_formal_solution(&generic_center_instance("x")).unwrap().holds);
        assert!(!verify_formal_solution(&generic_center_instance("z")).unwrap().holds);
        assert!(!verify_formal_solution(&center_instance("x")).unwrap().holds);
        let empty = FormalSolutionInstance { free: vec![], blocks: vec![], disjuncts: vec![], substitution: BTreeMap::new() };
        assert!(verify_formal_solution(&empty).unwrap().holds);
        let mut bad = generic_center_instance("x");
        bad.substitution.clear();
        assert!(matches!(verify_formal_solution(&bad), Err(GpError::Input(_))));
        // y¹ may not depend on a later universal variable.
        let late = FormalSolutionInstance {
            free: vec![],
            blocks: vec![
                QuantifierBlock { universal: vec!["x1".into()], existential: vec!["y1".into()] },
                QuantifierBlock { universal: vec!["x2".into()], existential: vec![] },
            ],
            disjuncts: vec![vec!["y1 x2^-1".into()]],
            substitution: BTreeMap::from([("y1".to_string(), "x2".to_string())]),
        };
        assert!(matches!(verify_formal_solution(&late), Err(GpError::Input(_))));
        let s = search_formal_solutions(&generic_center_instance("1"), 2).unwrap();
        assert!(s.solutions.iter().any(|m| m["y"] == "x"));
        assert!(search_formal_solutions(&center_instance("1"), 2).unwrap().solutions.is_empty());
    }

    #[test]
    fn free_words_counts() {
        // Reduced words of length ≤ 2 over 2 letters: 1 + 4 + 12.
        assert_eq!(free_words(&["x".into(), "z".into()], 2).len(), 17);
    }
}
