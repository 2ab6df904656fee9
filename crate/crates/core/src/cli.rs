//! The `gp` command-line driver.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 capability bound exceeded.
//! With `--json` every command prints one pretty-printed JSON document; identical arguments
//! give identical bytes.

use crate::acceptance::{self, Scope};
use crate::cores::{self, CyclicClass, WitnessCert};
use crate::droms::{self, DecompositionNode, Family};
use crate::error::{capability, input};
use crate::extension_graph::{extension_ball, to_dot, Schedule, DEFAULT_BALL_BOUND};
use crate::graph_model::{labeled_iso, ApCheck, GraphJson};
use crate::reduction::{self, Mode};
use crate::smallcancel::{
    self, capture_test, parse_w, search_formal_solutions, verify_formal_solution, wcn_check, wcn_harness,
    FormalSolutionInstance, AP_CAP, DEFAULT_P, SYLLABLE_BUDGET,
};
use crate::words::{
    self, centralizer_description, centralizer_generators, classify_in_factor, essential_support, factors,
    orthogonal, tree_action, Classification, Element, Group,
};
use crate::{GpError, LabeledGraph, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "gp", version, about = "Graph products of groups: cores, normal forms, tree actions, Droms classes")]
pub struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = acceptance::DEFAULT_SEED)]
    pub seed: u64,
    /// Reject input graphs with more vertices; also bounds extension balls.
    #[arg(long, global = true)]
    pub max_vertices: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graph-level invariants.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Element algebra in a graph product with cyclic vertex groups.
    #[command(subcommand)]
    Word(WordCmd),
    /// Word constructors, capture diagnostics and formal solutions.
    #[command(subcommand)]
    Sc(ScCmd),
    /// Droms recognition and elementary-equivalence classes.
    #[command(subcommand)]
    Droms(DromsCmd),
    /// Run the acceptance suite.
    Selftest {
        #[arg(value_enum)]
        scope: Scope,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Positive,
    AlmostPositive,
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    /// Size, reducedness, clique number and AP parameter.
    Check {
        file: PathBuf,
        /// Check AP_n for this n; a failure is a negative verdict.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Minimal core and core.
    Core {
        file: PathBuf,
        /// Include witness certificates for weak vertices.
        #[arg(long)]
        emit_witnesses: bool,
        /// Positive-reduce the graph first when it is not reduced.
        #[arg(long)]
        reduce_first: bool,
    },
    /// Cyclic classes, the intermediate graph and the extended core.
    Ecore { file: PathBuf },
    /// Positive or almost-positive reduction.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Positive)]
        mode: ModeArg,
    },
    /// Iterated star doubling approximating the extension graph.
    Ext {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Comma-separated base vertices doubled per round; every vertex when absent.
        #[arg(long)]
        schedule: Option<String>,
        /// Print the final graph as a plain graph description.
        #[arg(long)]
        dot: bool,
    },
    /// Labelled isomorphism; finding none is a negative verdict.
    Iso { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum WordCmd {
    /// Normal form.
    Nf {
        #[arg(long)]
        graph: PathBuf,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Product of two or more words.
    Mul {
        #[arg(long)]
        graph: PathBuf,
        #[arg(num_args = 2.., required = true)]
        words: Vec<String>,
    },
    /// Support and essential support.
    Supp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Envelope, factors and orthogonal of a `;`-separated tuple.
    Ff {
        #[arg(long)]
        graph: PathBuf,
        #[arg(allow_hyphen_values = true)]
        tuple: String,
    },
    /// Centralizer description and generators.
    Centralizer {
        #[arg(long)]
        graph: PathBuf,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Action on the vertex trees.
    Tl {
        #[arg(long)]
        graph: PathBuf,
        #[arg(allow_hyphen_values = true)]
        word: String,
        /// Single vertex; every vertex whose tree is not a point when absent.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Linear, dihedral or irreducible in each non-singular factor of a `;`-separated tuple.
    Classify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(allow_hyphen_values = true)]
        tuple: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ScCmd {
    /// Multiple-conjugation check for one pair, or the seeded harness when `--g`/`--h` are absent.
    Wcn {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true, requires = "h")]
        g: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "g")]
        h: Option<String>,
        /// Power applied to both elements; 10(n+3) from the AP parameter when absent.
        #[arg(long)]
        power: Option<i64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Capture diagnostics for the irreducible factors of a `;`-separated tuple.
    Capture {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Exponent used inside the Λ words.
        #[arg(long, default_value_t = DEFAULT_P)]
        p: i64,
        /// Twist word over x, y; must lie in the second derived subgroup.
        #[arg(long)]
        w: Option<String>,
    },
    /// Verify the substitution of a formal-solution instance, or search for one.
    Formal {
        file: PathBuf,
        /// Enumerate substitutions of at most this many letters instead.
        #[arg(long)]
        search: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum DromsCmd {
    /// Droms recognition; a non-Droms graph is a negative verdict.
    Check { file: PathBuf },
    /// Decomposition and class descriptor.
    Class {
        file: PathBuf,
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        collapse_racg_free: bool,
    },
    /// Elementary equivalence; inequivalence is a negative verdict.
    Eq {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        collapse_racg_free: bool,
    },
}

/// What a command produced: text, the JSON document, and the exit code.
struct Report {
    text: String,
    json: serde_json::Value,
    code: i32,
}

fn report(text: impl Into<String>, json: impl Serialize, positive: bool) -> Result<Report> {
    let json = serde_json::to_value(json).map_err(|e| GpError::Contract(format!("serialization failed: {e}")))?;
    Ok(Report { text: text.into(), json, code: if positive { 0 } else { 1 } })
}

/// Parses `argv` (program name first), runs the command and writes its output.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let written = if cli.json {
                serde_json::to_string_pretty(&r.json).map(|s| writeln!(out, "{s}"))
            } else {
                Ok(writeln!(out, "{}", r.text.trim_end()))
            };
            if !matches!(written, Ok(Ok(()))) {
                return 2;
            }
            r.code
        }
        Err(e) => {
            let _ = writeln!(err, "gp: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let ctx = Ctx { seed: cli.seed, max_vertices: cli.max_vertices };
    match &cli.command {
        Command::Graph(c) => ctx.graph(c),
        Command::Word(c) => ctx.word(c),
        Command::Sc(c) => ctx.sc(c),
        Command::Droms(c) => ctx.droms(c),
        Command::Selftest { scope } => selftest(*scope, cli.seed),
    }
}

struct Ctx {
    seed: u64,
    max_vertices: Option<usize>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| GpError::Input(format!("cannot read {}: {e}", path.display())))
}

fn parse_tuple(group: &Group, text: &str) -> Result<Vec<Element>> {
    let parts: Vec<&str> = text.split(';').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return input(format!("empty entry in tuple {text:?}"));
    }
    parts.iter().map(|p| group.parse(p)).collect()
}

fn names(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn words_of(xs: &[Element]) -> Vec<String> {
    xs.iter().map(Element::to_word).collect()
}

impl Ctx {
    fn load(&self, path: &Path) -> Result<LabeledGraph> {
        let g = LabeledGraph::parse_json(&read(path)?)?;
        if let Some(max) = self.max_vertices {
            if g.n() > max {
                return capability(format!("{} has {} vertices, above --max-vertices {max}", path.display(), g.n()));
            }
        }
        Ok(g)
    }

    fn group(&self, path: &Path) -> Result<Group> {
        Group::new(&self.load(path)?)
    }

    fn graph(&self, cmd: &GraphCmd) -> Result<Report> {
        match cmd {
            GraphCmd::Check { file, n } => {
                let g = self.load(file)?;
                #[derive(Serialize)]
                struct Check {
                    vertices: usize,
                    edges: usize,
                    reduced: bool,
                    positive_reduced: bool,
                    clique_number: usize,
                    min_ap: Option<usize>,
                    ap: Option<ApCheck>,
                }
                let c = Check {
                    vertices: g.n(),
                    edges: g.edge_count(),
                    reduced: g.is_reduced(),
                    positive_reduced: reduction::is_positive_reduced(&g),
                    clique_number: g.clique_number()?,
                    min_ap: g.min_ap(AP_CAP),
                    ap: n.map(|n| g.check_ap(n)),
                };
                let mut text = format!(
                    "{g}\nvertices {}, edges {}, reduced {}, positive reduced {}, clique number {}, smallest AP_n {}",
                    c.vertices,
                    c.edges,
                    c.reduced,
                    c.positive_reduced,
                    c.clique_number,
                    c.min_ap.map_or(format!("> {AP_CAP}"), |a| a.to_string())
                );
                if let (Some(n), Some(ap)) = (n, &c.ap) {
                    text.push_str(&format!("\nAP_{n}: {}", ap.holds));
                    if let Some(w) = &ap.witness {
                        text.push_str(&format!(" (complement path {})", w.join(" - ")));
                    }
                }
                let positive = c.ap.as_ref().is_none_or(|a| a.holds);
                report(text, c, positive)
            }
            GraphCmd::Core { file, emit_witnesses, reduce_first } => {
                let g = self.load(file)?;
                let rep = if *reduce_first { cores::core_of_reduced(&g)? } else { cores::core(&g)? };
                let mut j = rep.to_json();
                let weak_names: Vec<String> = rep.weak.iter().map(|w| w.vertex.clone()).collect();
                if !emit_witnesses {
                    j.weak.clear();
                }
                #[derive(Serialize)]
                struct Out {
                    #[serde(flatten)]
                    report: cores::CoreReportJson,
                    weak_vertices: Vec<String>,
                }
                let mut text = format!(
                    "min core: {}\ncore: {}\nremoved redundant: {}\nweak: {}",
                    rep.min_core,
                    rep.core,
                    names(&rep.removed_redundant),
                    names(&weak_names)
                );
                if let Some(r) = &rep.reduction {
                    text = format!("positive reduction: {}\n{text}", r.output);
                }
                if *emit_witnesses {
                    for WitnessCert { vertex, witnesses } in &rep.weak {
                        text.push_str(&format!("\n  {vertex}: witness {}", names(witnesses)));
                    }
                }
                report(text, Out { report: j, weak_vertices: weak_names }, true)
            }
            GraphCmd::Ecore { file } => {
                let g = self.load(file)?;
                let base = if g.is_reduced() { g.clone() } else { reduction::reduce(&g, Mode::Positive)?.output };
                #[derive(Serialize)]
                struct Out {
                    classes: Vec<CyclicClass>,
                    intermediate: GraphJson,
                    extended_core: GraphJson,
                }
                let classes = cores::cyclic_classes(&base)?;
                let inter = cores::intermediate_graph(&base)?;
                let e = cores::extended_core(&g)?;
                let mut text = String::new();
                for c in &classes {
                    let shown: Vec<String> = c.member_supports.iter().take(3).map(|s| names(s)).collect();
                    let more = c.member_supports.len().saturating_sub(shown.len());
                    text.push_str(&format!(
                        "class link {} x{}: {} supports ({}{}), weak members {}\n",
                        names(&c.link),
                        c.multiplicity,
                        c.member_supports.len(),
                        shown.join(" "),
                        if more > 0 { format!(" and {more} more") } else { String::new() },
                        names(&c.singular_members)
                    ));
                }
                text.push_str(&format!("intermediate: {inter}\nextended core: {e}"));
                report(text, Out { classes, intermediate: inter.to_json(), extended_core: e.to_json() }, true)
            }
            GraphCmd::Reduce { file, mode } => {
                let g = self.load(file)?;
                let mode = match mode {
                    ModeArg::Positive => Mode::Positive,
                    ModeArg::AlmostPositive => Mode::AlmostPositive,
                };
                let rep = reduction::reduce(&g, mode)?;
                let mut text = String::new();
                for s in &rep.steps {
                    let split: Vec<String> = s.split.iter().map(|f| names(f)).collect();
                    text.push_str(&format!("collapse {} (join {})\n", names(&s.lambda), split.join(" x ")));
                }
                text.push_str(&format!("result: {}\nhypothesis met: {}", rep.output, rep.hypothesis_met));
                report(text, rep.to_json(), true)
            }
            GraphCmd::Ext { file, rounds, schedule, dot } => {
                let g = self.load(file)?;
                let schedule = match schedule {
                    None => Schedule::AllVerticesPerRound,
                    Some(s) => Schedule::Explicit(s.split(',').map(|v| v.trim().to_string()).collect()),
                };
                let bound = self.max_vertices.unwrap_or(DEFAULT_BALL_BOUND);
                // A bound hit still reports the completed steps, with the capability exit code.
                let (trace, error) = match extension_ball(&g, *rounds, &schedule, bound) {
                    Ok(t) => (t, None),
                    Err(e) if matches!(e.error, GpError::Capability(_)) => (e.partial, Some(e.error)),
                    Err(e) => return Err(e.error),
                };
                let mut text = if *dot {
                    to_dot(&trace.result)
                } else {
                    let steps: Vec<String> =
                        trace.steps.iter().map(|s| format!("double at {}: {} vertices", s.vertex, s.graph.n())).collect();
                    let r = &trace.result;
                    let shown = if r.n() <= 16 { r.to_string() } else { format!("{} vertices, {} edges", r.n(), r.edge_count()) };
                    format!("{}\nresult: {shown}", steps.join("\n"))
                };
                if let Some(e) = &error {
                    text.push_str(&format!("\nstopped: {e}"));
                }
                #[derive(Serialize)]
                struct Out {
                    #[serde(flatten)]
                    trace: crate::extension_graph::DoublingTraceJson,
                    complete: bool,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    error: Option<String>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    dot: Option<String>,
                }
                let out = Out {
                    trace: trace.to_json(),
                    complete: error.is_none(),
                    error: error.as_ref().map(ToString::to_string),
                    dot: dot.then(|| to_dot(&trace.result)),
                };
                let mut r = report(text, out, true)?;
                if let Some(e) = error {
                    r.code = e.exit_code();
                }
                Ok(r)
            }
            GraphCmd::Iso { first, second } => {
                let (g1, g2) = (self.load(first)?, self.load(second)?);
                let m = labeled_iso(&g1, &g2)?;
                #[derive(Serialize)]
                struct Out {
                    isomorphic: bool,
                    mapping: Option<BTreeMap<String, String>>,
                }
                let mapping = m.as_ref().map(|m| m.named());
                let text = match &mapping {
                    Some(map) => {
                        let pairs: Vec<String> = map.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
                        format!("isomorphic: {}", pairs.join(", "))
                    }
                    None => "not isomorphic".to_string(),
                };
                let positive = mapping.is_some();
                report(text, Out { isomorphic: positive, mapping }, positive)
            }
        }
    }

    fn word(&self, cmd: &WordCmd) -> Result<Report> {
        match cmd {
            WordCmd::Nf { graph, word } => {
                let x = self.group(graph)?.parse(word)?;
                #[derive(Serialize)]
                struct Out {
                    word: Element,
                    syllables: usize,
                }
                report(x.to_word(), Out { syllables: x.len(), word: x }, true)
            }
            WordCmd::Mul { graph, words } => {
                let group = self.group(graph)?;
                let mut acc = group.identity();
                for w in words {
                    acc = words::multiply(&acc, &group.parse(w)?)?;
                }
                #[derive(Serialize)]
                struct Out {
                    product: Element,
                }
                report(acc.to_word(), Out { product: acc }, true)
            }
            WordCmd::Supp { graph, word } => {
                let group = self.group(graph)?;
                let g = group.graph();
                let x = group.parse(word)?;
                let (ess, conj) = essential_support(&x);
                #[derive(Serialize)]
                struct Out {
                    word: Element,
                    support: Vec<String>,
                    essential_support: Vec<String>,
                    conjugator: Element,
                }
                let o = Out { support: g.set_names(&x.support()), essential_support: g.set_names(&ess), conjugator: conj, word: x };
                let text = format!(
                    "support {}\nessential support {} (conjugator {})",
                    names(&o.support),
                    names(&o.essential_support),
                    o.conjugator
                );
                report(text, o, true)
            }
            WordCmd::Ff { graph, tuple } => {
                let group = self.group(graph)?;
                let xs = parse_tuple(&group, tuple)?;
                let dec = factors(&xs)?;
                let perp = group.graph().set_names(&orthogonal(&xs)?);
                #[derive(Serialize)]
                struct Out {
                    #[serde(flatten)]
                    decomposition: words::FactorDecomposition,
                    conjugated: Vec<String>,
                    orthogonal: Vec<String>,
                }
                let fs: Vec<String> = dec
                    .factors
                    .iter()
                    .map(|f| format!("{}{}", names(&f.vertices), if f.singular { " (singular)" } else { "" }))
                    .collect();
                let text = format!(
                    "support {} conjugated by {}\nfactors {}\northogonal {}{}",
                    names(&dec.support_vertices),
                    dec.conjugator,
                    fs.join(" "),
                    names(&perp),
                    if dec.certified { "" } else { "\n(envelope search budget exhausted; minimality not certified)" }
                );
                let conjugated = words_of(&dec.conjugated);
                report(text, Out { decomposition: dec, conjugated, orthogonal: perp }, true)
            }
            WordCmd::Centralizer { graph, word } => {
                let x = self.group(graph)?.parse(word)?;
                let d = centralizer_description(&x);
                let gens = centralizer_generators(&x, &d);
                #[derive(Serialize)]
                struct Out {
                    description: words::CentralizerDescription,
                    generators: Vec<Element>,
                }
                let mut text = format!("conjugator {}\northogonal part {}", d.conjugator, names(&d.orthogonal_part));
                for s in &d.singular_parts {
                    text.push_str(&format!("\nsingular {} ({})", s.vertex, s.label));
                }
                for p in &d.nonsingular_parts {
                    text.push_str(&format!("\nroot {} on {}", p.root, names(&p.component)));
                }
                text.push_str(&format!("\ngenerators {}", words_of(&gens).join(", ")));
                report(text, Out { description: d, generators: gens }, true)
            }
            WordCmd::Tl { graph, word, vertex } => {
                let group = self.group(graph)?;
                let g = group.graph();
                let x = group.parse(word)?;
                let infos = match vertex {
                    Some(v) => vec![tree_action(&x, g.index(v)?)?],
                    None => (0..g.n())
                        .filter(|&v| g.st(v) != g.all())
                        .map(|v| tree_action(&x, v))
                        .collect::<Result<Vec<_>>>()?,
                };
                let text: Vec<String> = infos
                    .iter()
                    .map(|i| format!("T_{}: {:?}, tl {}", i.vertex, i.kind, i.translation_length))
                    .collect();
                report(text.join("\n"), infos, true)
            }
            WordCmd::Classify { graph, tuple } => {
                let group = self.group(graph)?;
                let xs = parse_tuple(&group, tuple)?;
                let dec = factors(&xs)?;
                #[derive(Serialize)]
                struct Entry {
                    factor: Vec<String>,
                    class: Option<Classification>,
                }
                let mut out = Vec::new();
                for (i, f) in dec.factors.iter().enumerate() {
                    let class = if f.singular { None } else { Some(classify_in_factor(&xs, i)?) };
                    out.push(Entry { factor: f.vertices.clone(), class });
                }
                let text: Vec<String> = out
                    .iter()
                    .map(|e| format!("{}: {}", names(&e.factor), e.class.map_or("singular".to_string(), |c| format!("{c:?}"))))
                    .collect();
                report(text.join("\n"), out, true)
            }
        }
    }

    fn sc(&self, cmd: &ScCmd) -> Result<Report> {
        match cmd {
            ScCmd::Wcn { graph, g, h, power, samples, max_len } => {
                let lg = self.load(graph)?;
                if let (Some(g), Some(h)) = (g, h) {
                    let group = Group::new(&lg)?;
                    let (x, y) = (group.parse(g)?, group.parse(h)?);
                    let power = match power {
                        Some(p) => *p,
                        None => {
                            let n = lg.min_ap(AP_CAP).ok_or_else(|| GpError::Capability(format!("AP parameter above {AP_CAP}")))?;
                            10 * (n as i64 + 3)
                        }
                    };
                    let rep = wcn_check(&x, &y, power)?;
                    let mut text = if rep.skipped {
                        format!("skipped: {}", rep.reason.clone().unwrap_or_default())
                    } else {
                        format!("power {}, w_cn has {} syllables, holds: {}", rep.power, rep.w_syllables, rep.holds)
                    };
                    for o in &rep.outcomes {
                        text.push_str(&format!(
                            "\nT_{}: tl(g) {}, tl(h) {}, tl(w) {}, hyperbolic {}, holds {}",
                            o.vertex, o.tl_g, o.tl_h, o.tl_w, o.hyperbolic, o.holds
                        ));
                    }
                    let positive = rep.skipped || rep.holds;
                    return report(text, rep, positive);
                }
                if power.is_some() {
                    return input("--power applies to a single pair given with --g and --h");
                }
                let rep = wcn_harness(&lg, *samples, self.seed, *max_len)?;
                let mut text = format!(
                    "{} irreducible pairs ({} drawn) at power {}, {} violations",
                    rep.samples,
                    rep.attempts,
                    rep.power,
                    rep.violations.len()
                );
                for v in &rep.violations {
                    text.push_str(&format!("\n  {v}"));
                }
                let positive = rep.violations.is_empty();
                report(text, rep, positive)
            }
            ScCmd::Capture { graph, tuple, n, p, w } => {
                let group = self.group(graph)?;
                let xs = parse_tuple(&group, tuple)?;
                let w = match w {
                    Some(t) => parse_w(t)?,
                    None => smallcancel::default_w(),
                };
                let rep = capture_test(&xs, *p, *n, self.seed, &w, SYLLABLE_BUDGET)?;
                let mut text = format!("r = {}, p = {}, n = {}, twist {}", rep.r, rep.p, rep.n, rep.twist);
                if rep.factors.is_empty() {
                    text.push_str("\nno irreducible factor");
                }
                for f in &rep.factors {
                    text.push_str(&format!("\nfactor {}: captured {}/{}", names(&f.factor), f.captured, f.evaluated));
                    for o in &f.outcomes {
                        let state = match o.captured {
                            Some(true) => "captured".to_string(),
                            Some(false) => "not captured".to_string(),
                            None => "budget exceeded".to_string(),
                        };
                        text.push_str(&format!("\n  {}: {state}", o.word));
                    }
                }
                report(text, rep, true)
            }
            ScCmd::Formal { file, search } => {
                let inst: FormalSolutionInstance = serde_json::from_str(&read(file)?)
                    .map_err(|e| GpError::Input(format!("formal-solution instance: {e}")))?;
                match search {
                    None => {
                        let v = verify_formal_solution(&inst)?;
                        let text = match v.disjunct {
                            Some(d) => format!("formal solution: kills disjunct {d}"),
                            None => "not a formal solution".to_string(),
                        };
                        report(text, &v, v.holds)
                    }
                    Some(len) => {
                        let s = search_formal_solutions(&inst, *len)?;
                        let mut text =
                            format!("{} formal solutions among {} substitutions of length <= {len}", s.solutions.len(), s.tried);
                        for sol in &s.solutions {
                            let parts: Vec<String> = sol.iter().map(|(y, w)| format!("{y} := {w}")).collect();
                            text.push_str(&format!("\n  {}", parts.join(", ")));
                        }
                        let positive = !s.solutions.is_empty();
                        report(text, s, positive)
                    }
                }
            }
        }
    }

    fn droms(&self, cmd: &DromsCmd) -> Result<Report> {
        match cmd {
            DromsCmd::Check { file } => {
                let c = droms::is_droms(&self.load(file)?)?;
                let text = match &c.witness {
                    None => "Droms".to_string(),
                    Some(w) => format!("not Droms: induced {}", w.join(" - ")),
                };
                let positive = c.droms;
                report(text, c, positive)
            }
            DromsCmd::Class { file, family, collapse_racg_free } => {
                let g = self.load(file)?;
                let class = droms::eq_class(&g, *family, *collapse_racg_free)?;
                #[derive(Serialize)]
                struct Out {
                    class: String,
                    decomposition: DecompositionNode,
                }
                report(class.to_string(), Out { class: class.to_string(), decomposition: droms::decompose(&g)? }, true)
            }
            DromsCmd::Eq { first, second, family, collapse_racg_free } => {
                let (g1, g2) = (self.load(first)?, self.load(second)?);
                let c1 = droms::eq_class(&g1, *family, *collapse_racg_free)?;
                let c2 = droms::eq_class(&g2, *family, *collapse_racg_free)?;
                let equivalent = c1 == c2;
                #[derive(Serialize)]
                struct Out {
                    equivalent: bool,
                    classes: [String; 2],
                }
                let text = if equivalent { "equivalent" } else { "not equivalent" };
                report(text, Out { equivalent, classes: [c1.to_string(), c2.to_string()] }, equivalent)
            }
        }
    }
}

fn selftest(scope: Scope, seed: u64) -> Result<Report> {
    let outcomes = acceptance::run(scope, seed);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut lines: Vec<String> = outcomes.iter().map(acceptance::Outcome::line).collect();
    lines.push(format!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len()));
    #[derive(Serialize)]
    struct Out {
        seed: u64,
        outcomes: Vec<acceptance::Outcome>,
    }
    report(lines.join("\n"), Out { seed, outcomes }, failed == 0)
}
