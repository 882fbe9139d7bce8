//! Graphviz DOT rendering, plus a reader for the subset this module writes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{DiGraph, ParseError, VertexId, VertexNames};

#[derive(Default, Clone, Debug)]
pub struct DotStyle<'a> {
    pub names: Option<&'a VertexNames>,
    /// Extra node attributes, written verbatim after the label.
    pub attributes: BTreeMap<VertexId, String>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn to_dot(g: &DiGraph, style: &DotStyle<'_>) -> String {
    let mut out = String::from("digraph G {\n");
    for v in g.vertices() {
        let mut attrs = Vec::new();
        if let Some(name) = style.names.and_then(|n| n.get(&v)) {
            attrs.push(format!("label=\"{}\"", escape(name)));
        }
        if let Some(extra) = style.attributes.get(&v) {
            attrs.push(extra.clone());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {v};");
        } else {
            let _ = writeln!(out, "  {v} [{}];", attrs.join(", "));
        }
    }
    for (u, v) in g.sorted_edges() {
        let _ = writeln!(out, "  {u} -> {v};");
    }
    out.push_str("}\n");
    out
}

fn parse_label(attrs: &str) -> Option<String> {
    let start = attrs.find("label=\"")? + "label=\"".len();
    let mut label = String::new();
    let mut chars = attrs[start..].chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => label.push(chars.next()?),
            '"' => return Some(label),
            c => label.push(c),
        }
    }
    None
}

/// Reads back DOT produced by [`to_dot`]. Node attributes other than
/// `label` are ignored.
pub fn from_dot(input: &str) -> Result<(DiGraph, VertexNames), ParseError> {
    let mut max_id: Option<usize> = None;
    let mut edges = Vec::new();
    let mut names = VertexNames::new();
    let mut seen_header = false;

    let field_err = |line: usize, message: String| ParseError::Field {
        field: format!("line {line}"),
        message,
    };
    let parse_id = |s: &str, line: usize| -> Result<usize, ParseError> {
        s.trim()
            .parse()
            .map_err(|_| field_err(line, format!("`{}` is not a vertex id", s.trim())))
    };

    for (i, raw) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line == "}" {
            continue;
        }
        if line.starts_with("digraph") {
            seen_header = true;
            continue;
        }
        if !seen_header {
            return Err(field_err(lineno, "expected `digraph` header".into()));
        }
        let body = line
            .strip_suffix(';')
            .ok_or_else(|| field_err(lineno, "statement must end with `;`".into()))?;
        if let Some((u, v)) = body.split_once("->") {
            let (u, v) = (parse_id(u, lineno)?, parse_id(v, lineno)?);
            max_id = max_id.max(Some(u.max(v)));
            edges.push((lineno, u, v));
        } else if let Some((id, attrs)) = body.split_once('[') {
            let id = parse_id(id, lineno)?;
            max_id = max_id.max(Some(id));
            if let Some(label) = parse_label(attrs) {
                names.insert(VertexId(id), label);
            }
        } else {
            max_id = max_id.max(Some(parse_id(body, lineno)?));
        }
    }

    let mut g = DiGraph::with_vertices(max_id.map_or(0, |m| m + 1));
    for (lineno, u, v) in edges {
        g.add_edge(VertexId(u), VertexId(v))
            .map_err(|e| field_err(lineno, e.to_string()))?;
    }
    Ok((g, names))
}
