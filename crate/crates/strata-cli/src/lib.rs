//! Command-line front end: subcommands over JSON documents.

pub mod doc;
pub mod report;

use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use num::BigRational;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{Map, Value};

use strata::augment::{budget, check_fixed_domain, class_summary, validate_augmented, AugmentError, AugmentedGraph};
use strata::config::{arithmetic_genus, from_augmented, stabilize, to_dual_graph, validate_configuration, ConfigError, StabilizationPolicy};
use strata::enumerate::{enum_augmented, EnumBounds, EnumError};
use strata::geom::TargetGeometry;
use strata::graph::{graph_stats, validate_graph};
use strata::index::{index_report, IndexError};
use strata::simplify::{
    simplify_connected, simplify_contracted_main, simplify_disconnected, simplify_fully, DefaultOracle, SimplifyError,
    SimplifyOutcome,
};
use strata::verify::{classify_case, verify_base_i, verify_base_ii, BaseCaseParams, SlackEntry, SlackTable, VerifyError};

use crate::doc::{
    document_json, num, parse_context, parse_document, parse_json, rat,
    rational, to_text, DocError, Descriptor, Document,
};
use crate::report::{certificate_json, induction_json};

#[derive(Debug, Parser)]
#[command(name = "strata", version, about = "Augmented dual graphs, simplification rewrites and index certificates")]
pub struct Cli {
    /// Human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads for batch subcommands.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for sampled output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Cover,
    Glue,
    Contract,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndexMap {
    Pi,
    Tau,
    TauTilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseCase {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CertArgs {
    #[arg(long, default_value = "9/10")]
    pub epsilon: String,
    #[arg(long, default_value = "1/5")]
    pub delta: String,
    #[arg(long, default_value = "1/2")]
    pub rho: String,
    /// JSON slack table; every label defaults to 0 when omitted.
    #[arg(long)]
    pub slack: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a document's graph, augmentation and configuration.
    Validate { file: String },
    /// Genus, valences, stability, class summary and budget.
    Stats {
        file: String,
        #[arg(long, default_value = "1/2")]
        rho: String,
    },
    /// Stabilize the configuration (or the augmentation's configuration).
    Stabilize { file: String },
    /// Apply one rewrite, or the full default simplification.
    Simplify {
        file: String,
        #[arg(long, value_enum)]
        rule: Option<Rule>,
        #[arg(long)]
        descriptor: Option<String>,
        #[arg(long)]
        full: bool,
    },
    /// Fredholm index of an evaluation map.
    Index {
        file: String,
        #[arg(long, value_enum)]
        map: IndexMap,
    },
    /// Induction case of the augmentation.
    Classify { file: String },
    /// Base-case certificate.
    Verify {
        file: String,
        #[arg(long = "base-case", value_enum)]
        base_case: BaseCase,
        #[command(flatten)]
        cert: CertArgs,
    },
    /// Enumerate augmented graphs within bounds.
    Enumerate {
        #[arg(long)]
        bounds: String,
        #[arg(long)]
        fixed_domain: bool,
        /// Emit a seeded random sample of this size.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Induction report over one document or an enumerated family.
    Report {
        file: Option<String>,
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long)]
        fixed_domain: bool,
        #[command(flatten)]
        cert: CertArgs,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Parse(DocError),
    Invalid(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Invalid(_) => 1,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "parse error: {e}"),
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError::Parse(e)
    }
}

impl From<AugmentError> for CliError {
    fn from(e: AugmentError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SimplifyError> for CliError {
    fn from(e: SimplifyError) -> Self {
        match e {
            SimplifyError::StepLimit(_) | SimplifyError::OracleError(_) => CliError::Internal(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Simplify(s) => s.into(),
            VerifyError::UnboundParameter(_) => CliError::Internal(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Output {
    value: Value,
    failed: bool,
    ndjson: bool,
}

fn ok(value: Value) -> Result<Output, CliError> {
    Ok(Output {
        value,
        failed: false,
        ndjson: false,
    })
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let stdout = if out.ndjson {
                let items = out.value.as_array().cloned().unwrap_or_default();
                items
                    .iter()
                    .map(|v| if cli.pretty { render_table(v) } else { to_text(v, false) })
                    .collect::<Vec<_>>()
                    .join("\n")
            } else if cli.pretty {
                render_table(&out.value)
            } else {
                to_text(&out.value, false)
            };
            Outcome {
                code: if out.failed { 2 } else { 0 },
                stdout: stdout + "\n",
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("{e}\n"),
        },
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {path}: {e}")))
}

fn load(path: &str) -> Result<Document, CliError> {
    Ok(parse_document(&read(path)?)?)
}

fn augmented(doc: &Document) -> Result<&AugmentedGraph, CliError> {
    doc.augmentation
        .as_ref()
        .ok_or_else(|| CliError::Invalid("the document has no augmentation".into()))
}

fn q(s: &str, what: &str) -> Result<BigRational, CliError> {
    doc::parse_rational(s).map_err(|m| CliError::Invalid(format!("{what}: {m}")))
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn strings<T: std::fmt::Debug>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(format!("{x:?}"))).collect())
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Validate { file } => validate(&load(file)?),
        Command::Stats { file, rho } => stats(&load(file)?, &q(rho, "rho")?),
        Command::Stabilize { file } => stabilize_cmd(&load(file)?),
        Command::Simplify {
            file,
            rule,
            descriptor,
            full,
        } => simplify_cmd(&load(file)?, *rule, descriptor.as_deref(), *full),
        Command::Index { file, map } => index_cmd(&load(file)?, *map),
        Command::Classify { file } => classify_cmd(&load(file)?),
        Command::Verify { file, base_case, cert } => verify_cmd(&load(file)?, *base_case, &cert_params(cert)?),
        Command::Enumerate {
            bounds,
            fixed_domain,
            sample: n,
        } => enumerate_cmd(bounds, *fixed_domain, *n, cli.seed),
        Command::Report {
            file,
            bounds,
            fixed_domain,
            cert,
        } => report_cmd(file.as_deref(), bounds.as_deref(), *fixed_domain, &cert_params(cert)?, cli.jobs),
    }
}

fn validate(doc: &Document) -> Result<Output, CliError> {
    let mut o = Map::new();
    let mut valid = true;
    if let Some(g) = &doc.graph {
        let rep = validate_graph(g);
        valid &= rep.is_ok();
        o.insert("graph".into(), strings(&rep.violations));
    }
    if let Some(a) = &doc.augmentation {
        let v = validate_augmented(&doc.context, a);
        valid &= v.is_empty();
        o.insert("augmentation".into(), strings(&v));
        if v.is_empty() {
            let fd = check_fixed_domain(a);
            o.insert(
                "fixed_domain".into(),
                object(vec![
                    ("ok", Value::Bool(fd.is_ok())),
                    (
                        "violations",
                        Value::Array(
                            fd.violations
                                .iter()
                                .map(|x| object(vec![("clause", Value::String(format!("{:?}", x.clause))), ("detail", Value::String(x.detail.clone()))]))
                                .collect(),
                        ),
                    ),
                ]),
            );
        }
    }
    if let Some(c) = &doc.configuration {
        let v = validate_configuration(c);
        let ranks = c.components.iter().all(|x| x.class.rank() == doc.context.rank());
        valid &= v.is_empty() && ranks;
        let mut list = strings(&v);
        if !ranks {
            list.as_array_mut()
                .expect("array")
                .push(Value::String("class rank differs from the basis".into()));
        }
        o.insert("configuration".into(), list);
    }
    o.insert("valid".into(), Value::Bool(valid));
    if valid {
        ok(Value::Object(o))
    } else {
        Err(CliError::Invalid(to_text(&Value::Object(o), false)))
    }
}

fn stats(doc: &Document, rho: &BigRational) -> Result<Output, CliError> {
    let mut o = Map::new();
    let g = doc
        .graph
        .as_ref()
        .ok_or_else(|| CliError::Invalid("the document has no graph".into()))?;
    let s = graph_stats(g).map_err(|e| CliError::Invalid(e.to_string()))?;
    o.insert(
        "graph".into(),
        object(vec![
            ("genus", num(s.genus)),
            ("h1", num(s.h1)),
            ("stable", Value::Bool(s.is_stable)),
            (
                "valences",
                Value::Object(s.valences.iter().map(|(v, x)| (v.to_string(), num(x))).collect()),
            ),
        ]),
    );
    if let Some(a) = &doc.augmentation {
        let cs = class_summary(&doc.context, a)?;
        let b = budget(&doc.context, a, rho)?;
        o.insert(
            "classes".into(),
            object(vec![
                ("total", Value::Array(cs.total.coeffs.iter().map(num).collect())),
                ("weighted", Value::Array(cs.weighted.coeffs.iter().map(num).collect())),
                ("c1_total", num(&cs.c1_total)),
                ("c1_weighted", num(&cs.c1_weighted)),
            ]),
        );
        o.insert(
            "budget".into(),
            object(vec![("k", num(&b.k)), ("rho", rat(&b.rho)), ("bound_ok", Value::Bool(b.bound_ok))]),
        );
        o.insert("fixed_domain".into(), Value::Bool(check_fixed_domain(a).is_ok()));
    }
    ok(Value::Object(o))
}

fn with_result(doc: &Document, result: AugmentedGraph) -> Document {
    Document {
        descriptor: None,
        configuration: None,
        ..Document::with_augmented(doc.context.clone(), result)
    }
}

fn stabilize_cmd(doc: &Document) -> Result<Output, CliError> {
    let c = match (&doc.configuration, &doc.augmentation) {
        (Some(c), _) => c.clone(),
        (None, Some(a)) => from_augmented(&doc.context, a)?.0,
        (None, None) => return Err(CliError::Invalid("nothing to stabilize".into())),
    };
    let v = validate_configuration(&c);
    if !v.is_empty() {
        return Err(CliError::Invalid(format!("{v:?}")));
    }
    let before = arithmetic_genus(&c)?;
    let s = stabilize(&c, &StabilizationPolicy::Deterministic)?;
    let after = arithmetic_genus(&s)?;
    if before != after {
        return Err(CliError::Internal(format!("genus changed from {before} to {after}")));
    }
    let dual = to_dual_graph(&s)?;
    let mut out = document_json(&Document {
        configuration: Some(s),
        descriptor: None,
        ..Document::with_augmented(doc.context.clone(), dual)
    });
    out.as_object_mut()
        .expect("object")
        .insert("arithmetic_genus".into(), num(after));
    ok(out)
}

fn outcome_json(o: &SimplifyOutcome) -> Value {
    object(vec![
        ("kind", Value::String(format!("{:?}", o.kind).to_lowercase())),
        ("involved_main", Value::Bool(o.involved_main)),
        ("class_preserved", Value::Bool(o.class_check)),
        ("c1_not_increased", Value::Bool(o.c1_check)),
        ("fixed_domain", Value::Bool(o.constraint_check)),
        ("descent", Value::Bool(o.descent_check)),
        ("edges", num(o.edges)),
    ])
}

fn simplify_cmd(doc: &Document, rule: Option<Rule>, descriptor: Option<&str>, full: bool) -> Result<Output, CliError> {
    let g = augmented(doc)?;
    if full {
        let chain = simplify_fully(&doc.context, g, &DefaultOracle)?;
        let last = chain.last().map(|o| o.result.clone()).unwrap_or_else(|| g.clone());
        let mut out = document_json(&with_result(doc, last));
        out.as_object_mut()
            .expect("object")
            .insert("chain".into(), Value::Array(chain.iter().map(outcome_json).collect()));
        return ok(out);
    }
    let rule = rule.ok_or_else(|| CliError::Invalid("pass --rule or --full".into()))?;
    let desc = match descriptor {
        Some(path) => {
            let text = read(path)?;
            let v = parse_json(&text)?;
            let inner = v.get("descriptor").unwrap_or(&v);
            Some(doc::parse_descriptor(inner).map_err(|m| CliError::Invalid(m))?)
        }
        None => doc.descriptor.clone(),
    };
    let out = match (rule, desc) {
        (Rule::Contract, _) => simplify_contracted_main(&doc.context, g)?,
        (Rule::Cover, Some(Descriptor::Cover(d))) => simplify_connected(&doc.context, g, &d)?,
        (Rule::Glue, Some(Descriptor::Glue(d))) => simplify_disconnected(&doc.context, g, &d)?,
        (r, _) => return Err(CliError::Invalid(format!("rule {r:?} needs a matching descriptor"))),
    };
    if !out.class_check || !out.c1_check {
        return Err(CliError::Internal("a rewrite broke class conservation".into()));
    }
    let mut v = document_json(&with_result(doc, out.result.clone()));
    v.as_object_mut().expect("object").insert("checks".into(), outcome_json(&out));
    ok(v)
}

fn index_cmd(doc: &Document, map: IndexMap) -> Result<Output, CliError> {
    let g = augmented(doc)?;
    let v = validate_augmented(&doc.context, g);
    if !v.is_empty() {
        return Err(AugmentError::InvalidAugmentation(v).into());
    }
    let r = index_report(&doc.context, g)?;
    let (name, value) = match map {
        IndexMap::Pi => ("pi", &r.ind_pi),
        IndexMap::Tau => ("tau", &r.ind_tau),
        IndexMap::TauTilde => ("tau-tilde", &r.ind_tau_tilde),
    };
    ok(object(vec![
        ("map", Value::String(name.into())),
        ("index", num(value)),
        ("r", num(r.r)),
        ("g", num(r.g)),
        ("main_genus", num(r.main_genus)),
        ("n", num(r.n)),
        ("ell", num(r.ell)),
        ("edges", num(r.edges)),
        ("h1", num(r.h1)),
        ("c1_total", num(&r.c1_total)),
        ("c1_weighted", num(&r.c1_weighted)),
    ]))
}

fn classify_cmd(doc: &Document) -> Result<Output, CliError> {
    let g = augmented(doc)?;
    let v = validate_augmented(&doc.context, g);
    if !v.is_empty() {
        return Err(AugmentError::InvalidAugmentation(v).into());
    }
    let case = classify_case(g).map_err(|e| CliError::Internal(e.to_string()))?;
    ok(object(vec![
        ("case", Value::String(case.label().into())),
        ("detail", Value::String(format!("{case:?}"))),
    ]))
}

pub fn parse_slack(text: &str) -> Result<SlackTable, CliError> {
    let v = parse_json(text)?;
    let o = v
        .as_object()
        .ok_or_else(|| CliError::Invalid("a slack table is a JSON object".into()))?;
    let mut table = SlackTable::default();
    for (label, entry) in o {
        let e = match entry {
            Value::Object(m) => {
                let default = m.get("default").map(rational).transpose().map_err(CliError::Invalid)?;
                let mut by_rg = std::collections::BTreeMap::new();
                if let Some(rows) = m.get("by_rg") {
                    for row in rows.as_array().ok_or_else(|| CliError::Invalid("by_rg must be an array".into()))? {
                        let row = row.as_array().filter(|r| r.len() == 3).ok_or_else(|| CliError::Invalid("by_rg rows are [r, g, value]".into()))?;
                        let int = |x: &Value| {
                            doc::big(x)
                                .ok()
                                .and_then(|b| num::ToPrimitive::to_i64(&b))
                                .ok_or_else(|| CliError::Invalid("r and g must be integers".into()))
                        };
                        by_rg.insert((int(&row[0])?, int(&row[1])?), rational(&row[2]).map_err(CliError::Invalid)?);
                    }
                }
                SlackEntry { default, by_rg }
            }
            other => SlackEntry {
                default: Some(rational(other).map_err(CliError::Invalid)?),
                by_rg: Default::default(),
            },
        };
        table.entries.insert(label.clone(), e);
    }
    Ok(table)
}

fn cert_params(c: &CertArgs) -> Result<BaseCaseParams, CliError> {
    let slack = match &c.slack {
        Some(path) => parse_slack(&read(path)?)?,
        None => SlackTable::uniform(&[("H", 0), ("L", 0), ("D", 0)]),
    };
    Ok(BaseCaseParams::new(q(&c.epsilon, "epsilon")?, q(&c.delta, "delta")?, q(&c.rho, "rho")?, slack)?)
}

fn verify_cmd(doc: &Document, base: BaseCase, params: &BaseCaseParams) -> Result<Output, CliError> {
    let g = augmented(doc)?;
    let cert = match base {
        BaseCase::I => verify_base_i(&doc.context, g, params)?,
        BaseCase::II => verify_base_ii(&doc.context, g, params)?,
    };
    Ok(Output {
        value: certificate_json(&cert),
        failed: cert.has_failure(),
        ndjson: false,
    })
}

/// Bounds document: the `EnumBounds` fields plus an optional `context`.
pub fn parse_bounds(text: &str) -> Result<(TargetGeometry, EnumBounds), CliError> {
    let v = parse_json(text)?;
    let o = v
        .as_object()
        .ok_or_else(|| CliError::Invalid("bounds must be a JSON object".into()))?;
    let field = |k: &str| -> Result<u64, CliError> {
        let x = o.get(k).ok_or_else(|| CliError::Invalid(format!("bounds are missing \"{k}\"")))?;
        doc::big(x)
            .ok()
            .and_then(|b| num::ToPrimitive::to_u64(&b))
            .ok_or_else(|| CliError::Invalid(format!("\"{k}\" must be a non-negative integer")))
    };
    let rank = field("basis_rank")? as usize;
    let ctx = match o.get("context") {
        Some(c) => parse_context(c).map_err(CliError::Invalid)?,
        None => TargetGeometry::uniform(3, rank, 1),
    };
    let b = EnumBounds {
        max_vertices: field("max_vertices")? as usize,
        max_edges: field("max_edges")? as usize,
        max_degree: field("max_degree")?,
        max_weight: field("max_weight")?,
        n: field("n")? as usize,
        ell: field("ell")? as usize,
        g: field("g")? as u32,
        basis_rank: rank,
        max_c1_per_class: field("max_c1_per_class")? as i64,
        max_weighted_c1: if o.contains_key("max_weighted_c1") {
            Some(field("max_weighted_c1")? as i64)
        } else {
            None
        },
    };
    Ok((ctx, b))
}

fn enumerate_cmd(bounds: &str, fixed: bool, n: Option<usize>, seed: u64) -> Result<Output, CliError> {
    let (ctx, b) = parse_bounds(&read(bounds)?)?;
    let all = enum_augmented(&ctx, &b, fixed)?;
    let picked: Vec<usize> = match n {
        Some(k) if k < all.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = sample(&mut rng, all.len(), k).into_vec();
            idx.sort_unstable();
            idx
        }
        _ => (0..all.len()).collect(),
    };
    let items = picked
        .iter()
        .map(|&i| {
            let mut v = document_json(&Document::with_augmented(ctx.clone(), all[i].clone()));
            v.as_object_mut().expect("object").insert("index".into(), num(i));
            v
        })
        .collect();
    Ok(Output {
        value: Value::Array(items),
        failed: false,
        ndjson: true,
    })
}

fn report_cmd(
    file: Option<&str>,
    bounds: Option<&str>,
    fixed: bool,
    params: &BaseCaseParams,
    jobs: Option<usize>,
) -> Result<Output, CliError> {
    let (ctx, family) = match (file, bounds) {
        (Some(f), None) => {
            let d = load(f)?;
            let g = augmented(&d)?.clone();
            (d.context, vec![g])
        }
        (None, Some(b)) => {
            let (ctx, b) = parse_bounds(&read(b)?)?;
            let fam = enum_augmented(&ctx, &b, fixed)?;
            (ctx, fam)
        }
        _ => return Err(CliError::Invalid("pass either a document or --bounds".into())),
    };
    let work = || {
        family
            .par_iter()
            .enumerate()
            .map(|(i, g)| strata::verify::induction_entry(&ctx, g, params, i))
            .collect::<Vec<_>>()
    };
    let entries = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .install(work),
        None => work(),
    };
    let rep = strata::verify::InductionReport { entries };
    let failed = rep.no_case_matches() > 0 || rep.descent_failures() > 0 || rep.chain_overruns() > 0 || rep.errors() > 0;
    Ok(Output {
        value: induction_json(&rep),
        failed,
        ndjson: false,
    })
}

/// Indented `key: value` rendering for `--pretty`.
pub fn render_table(v: &Value) -> String {
    fn scalar(v: &Value) -> Option<String> {
        match v {
            Value::String(s) => Some(s.clone()),
            Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
                Some(a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", "))
            }
            Value::Object(_) | Value::Array(_) => None,
            other => Some(other.to_string()),
        }
    }
    fn go(v: &Value, depth: usize, out: &mut Vec<String>) {
        let pad = "  ".repeat(depth);
        match v {
            Value::Object(o) => {
                let w = o.keys().map(|k| k.len()).max().unwrap_or(0);
                for (k, x) in o {
                    match scalar(x) {
                        Some(s) => out.push(format!("{pad}{k:<w$}  {s}")),
                        None => {
                            out.push(format!("{pad}{k}"));
                            go(x, depth + 1, out);
                        }
                    }
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    match scalar(x) {
                        Some(s) => out.push(format!("{pad}[{i}]  {s}")),
                        None => {
                            out.push(format!("{pad}[{i}]"));
                            go(x, depth + 1, out);
                        }
                    }
                }
            }
            other => out.push(format!("{pad}{}", scalar(other).unwrap_or_default())),
        }
    }
    let mut out = Vec::new();
    go(v, 0, &mut out);
    out.join("\n")
}
