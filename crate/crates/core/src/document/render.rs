//! Report rendering: plain text, JSON, and Graphviz dot for enumerated lattices.

use std::fmt::Write;
use std::str::FromStr;

use thiserror::Error;

use super::{Answer, Report, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            _ => Err(format!("unknown format `{s}`; expected text, json or dot")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("dot output needs an enumerate(...) query in the document")]
    NoEnumeration,
}

pub fn render_report(report: &Report, format: Format) -> Result<String, RenderError> {
    match format {
        Format::Text => Ok(text(report)),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Dot => dot(report),
    }
}

fn value_text(value: &Value) -> String {
    match value {
        Value::Bool(b) => b.to_string(),
        Value::Set(s) | Value::Tau(s) | Value::Operation(s) => s.clone(),
        Value::Rank(Some(r)) => r.to_string(),
        Value::Rank(None) => "not-scattered".to_string(),
        Value::Perfect { scattered, perfect } => format!("scattered={scattered} perfect={perfect}"),
        Value::Lattice(l) => {
            let radical = l.radical.iter().filter(|&&r| r).count();
            format!("{} pairs ({radical} radical), {} covering edges", l.pairs.len(), l.covers.len())
        }
    }
}

fn text(report: &Report) -> String {
    let mut out = String::new();
    for q in &report.queries {
        match (q.answer(), q.error()) {
            (Some(Answer { value, witness, provenance }), _) => {
                writeln!(out, "{} = {}: {} [{provenance}]", q.name, q.query, value_text(value)).expect("string write");
                if let Some(w) = witness {
                    writeln!(out, "  witness: {w}").expect("string write");
                }
                if let Value::Lattice(l) = value {
                    for (i, p) in l.pairs.iter().enumerate() {
                        writeln!(out, "  [{i}] {p}").expect("string write");
                    }
                    let edges: Vec<String> = l.covers.iter().map(|[a, b]| format!("{a}<{b}")).collect();
                    writeln!(out, "  covers: {}", edges.join(" ")).expect("string write");
                }
            }
            (None, message) => {
                writeln!(out, "{} = {}: error at {}:{}: {}", q.name, q.query, q.line, q.column, message.unwrap_or_default())
                    .expect("string write");
            }
        }
    }
    out
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One digraph per enumeration, bottom to top, covering edges only.
fn dot(report: &Report) -> Result<String, RenderError> {
    if report.queries.is_empty() {
        return Ok("digraph sslab {\n}\n".to_string());
    }
    let mut out = String::new();
    for q in &report.queries {
        let Some(Answer { value: Value::Lattice(l), .. }) = q.answer() else { continue };
        writeln!(out, "digraph \"{}\" {{", escape(&q.name)).expect("string write");
        writeln!(out, "  rankdir=BT;").expect("string write");
        writeln!(out, "  label=\"{}\";", escape(&l.descriptor)).expect("string write");
        for (i, p) in l.pairs.iter().enumerate() {
            let shape = if l.radical[i] { "box" } else { "ellipse" };
            writeln!(out, "  n{i} [label=\"{}\", shape={shape}];", escape(p)).expect("string write");
        }
        for [a, b] in &l.covers {
            writeln!(out, "  n{a} -> n{b};").expect("string write");
        }
        writeln!(out, "}}").expect("string write");
    }
    if out.is_empty() {
        return Err(RenderError::NoEnumeration);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::{execute, parse_document};

    const V3: &str = "space V3 = poset {o < p, o < q}\n\
                      prufer D on V3 {idempotent: points {p}}\n\
                      op A = stable(D, delta=points {o,p})\n\
                      op B = stable(D, delta=points {o}, pi=points {p})\n\
                      query le = leq(A, B)\n\
                      query lat = enumerate(D)\n";

    #[test]
    fn v3_dot_has_seven_nodes_and_only_covering_edges() {
        let report = execute(&parse_document(V3).unwrap());
        let dot = render_report(&report, Format::Dot).unwrap();
        let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
        assert_eq!(nodes, 7, "{dot}");
        let edges: Vec<(usize, usize)> = dot
            .lines()
            .filter_map(|l| l.trim().strip_suffix(';')?.split_once(" -> "))
            .map(|(a, b)| (a[1..].parse().unwrap(), b[1..].parse().unwrap()))
            .collect();
        // no edge is implied by two others
        for &(a, b) in &edges {
            assert!(!edges.iter().any(|&(x, c)| x == a && edges.contains(&(c, b))), "{dot}");
        }
    }

    #[test]
    fn empty_reports_render_empty_documents() {
        let report = Report::default();
        assert_eq!(render_report(&report, Format::Text).unwrap(), "");
        let json: serde_json::Value = serde_json::from_str(&render_report(&report, Format::Json).unwrap()).unwrap();
        assert_eq!(json, serde_json::json!({"queries": []}));
        assert_eq!(render_report(&report, Format::Dot).unwrap(), "digraph sslab {\n}\n");
    }

    #[test]
    fn dot_without_enumeration_is_an_error() {
        let report = execute(&parse_document("space W2 = ordinal(w^2)\nquery r = cb-rank(W2.max)\n").unwrap());
        assert_eq!(render_report(&report, Format::Dot), Err(RenderError::NoEnumeration));
    }

    #[test]
    fn json_round_trips_and_is_deterministic() {
        let doc = parse_document(V3).unwrap();
        let a = render_report(&execute(&doc), Format::Json).unwrap();
        let b = render_report(&execute(&doc), Format::Json).unwrap();
        assert_eq!(a, b);
        let back: Report = serde_json::from_str(&a).unwrap();
        assert_eq!(back, execute(&doc));
        let raw: serde_json::Value = serde_json::from_str(&a).unwrap();
        let q = &raw["queries"][0];
        for key in ["name", "query", "line", "column", "status", "answer"] {
            assert!(q.get(key).is_some(), "missing {key} in {q}");
        }
        assert_eq!(q["answer"]["value"], serde_json::json!({"type": "bool", "value": true}));
        assert_eq!(q["answer"]["provenance"], "direct");
    }
}
