//! JSON emission for certificates and induction reports.

use serde_json::Value;
use strata::verify::{Certificate, ChainStep, Comparison, InductionEntry, InductionReport, Verdict};

use crate::doc::{num, rat};

fn object(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn s(x: impl Into<String>) -> Value {
    Value::String(x.into())
}

pub fn comparison_json(c: &Comparison) -> Value {
    match c {
        Comparison::Holds => object(vec![("kind", s("Holds"))]),
        Comparison::Fails => object(vec![("kind", s("Fails"))]),
        Comparison::NeedsThreshold { param, bound } => object(vec![
            ("kind", s("NeedsThreshold")),
            ("param", s(param.name())),
            ("bound", num(bound)),
        ]),
    }
}

pub fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::NeedsThreshold(ts) => object(vec![
            ("kind", s("NeedsThreshold")),
            (
                "thresholds",
                Value::Array(
                    ts.iter()
                        .map(|(p, b)| object(vec![("param", s(p.name())), ("bound", num(b))]))
                        .collect(),
                ),
            ),
        ]),
        other => object(vec![("kind", s(format!("{other:?}")))]),
    }
}

fn step_json(st: &ChainStep) -> Value {
    object(vec![
        ("lhs", s(st.lhs.to_string())),
        ("relation", s(st.relation.symbol())),
        ("rhs", s(st.rhs.to_string())),
        ("citation", s(st.citation.clone())),
        ("witness", s(st.witness.clone())),
        ("status", comparison_json(&st.status)),
    ])
}

pub fn certificate_json(c: &Certificate) -> Value {
    object(vec![
        ("case", s(c.case.name())),
        ("verdict", verdict_json(&c.verdict)),
        ("epsilon", rat(&c.epsilon)),
        ("delta", rat(&c.delta)),
        ("rho", rat(&c.rho)),
        ("witnesses", num(c.witnesses)),
        (
            "param_checks",
            Value::Array(
                c.param_checks
                    .iter()
                    .map(|(name, ok)| object(vec![("check", s(name.clone())), ("ok", Value::Bool(*ok))]))
                    .collect(),
            ),
        ),
        ("chain", Value::Array(c.chain.iter().map(step_json).collect())),
    ])
}

fn entry_json(e: &InductionEntry) -> Value {
    object(vec![
        ("index", num(e.index)),
        ("case", e.case.map(|c| s(c.label())).unwrap_or(Value::Null)),
        ("verdict", e.verdict().map(verdict_json).unwrap_or(Value::Null)),
        ("rewrites", num(e.rewrites)),
        ("descent_failures", num(e.descent_failures)),
        ("constraint_failures", num(e.constraint_failures)),
        ("chain_length", num(e.chain_length)),
        ("chain_bound", num(e.chain_bound)),
        ("base_case", e.base_case.map(|c| s(c.label())).unwrap_or(Value::Null)),
        ("error", e.error.clone().map(s).unwrap_or(Value::Null)),
    ])
}

pub fn induction_json(r: &InductionReport) -> Value {
    object(vec![
        ("members", num(r.entries.len())),
        ("no_case_matches", num(r.no_case_matches())),
        ("rewrites", num(r.rewrites())),
        ("descent_failures", num(r.descent_failures())),
        ("chain_overruns", num(r.chain_overruns())),
        ("errors", num(r.errors())),
        ("exceptional", Value::Array(r.exceptional().into_iter().map(num).collect())),
        ("entries", Value::Array(r.entries.iter().map(entry_json).collect())),
    ])
}
