//! JSON text form of a [`DiGraph`].
//!
//! ```text
//! {
//!   "edges": [
//!     [0, 1]
//!   ],
//!   "names": {
//!     "0": "v1"
//!   },
//!   "vertex_count": 2
//! }
//! ```
//!
//! Keys appear in sorted order, edges are sorted lexicographically and
//! `names` is omitted when empty, so the output is byte-deterministic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use super::{DiGraph, EdgeError, VertexId, VertexNames};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    names: BTreeMap<String, String>,
}

pub fn to_text(g: &DiGraph, names: Option<&VertexNames>) -> String {
    let mut out = String::from("{\n");
    let edges = g.sorted_edges();
    if edges.is_empty() {
        out.push_str("  \"edges\": [],\n");
    } else {
        out.push_str("  \"edges\": [\n");
        for (i, (u, v)) in edges.iter().enumerate() {
            let sep = if i + 1 < edges.len() { "," } else { "" };
            let _ = writeln!(out, "    [{u}, {v}]{sep}");
        }
        out.push_str("  ],\n");
    }
    if let Some(names) = names.filter(|n| !n.is_empty()) {
        out.push_str("  \"names\": {\n");
        for (i, (id, name)) in names.iter().enumerate() {
            let sep = if i + 1 < names.len() { "," } else { "" };
            let quoted = serde_json::to_string(name).expect("strings always serialize");
            let _ = writeln!(out, "    \"{id}\": {quoted}{sep}");
        }
        out.push_str("  },\n");
    }
    let _ = writeln!(out, "  \"vertex_count\": {}", g.vertex_count());
    out.push_str("}\n");
    out
}

pub fn from_text(input: &str) -> Result<(DiGraph, VertexNames), ParseError> {
    let doc: Document = serde_json::from_str(input).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut g = DiGraph::with_vertices(doc.vertex_count);
    for (i, &(u, v)) in doc.edges.iter().enumerate() {
        g.add_edge(VertexId(u), VertexId(v))
            .map_err(|e| ParseError::Field {
                field: format!("edges[{i}]"),
                message: match e {
                    EdgeError::OutOfRange { vertex, count } => {
                        format!("references vertex {vertex} but vertex_count is {count}")
                    }
                    other => other.to_string(),
                },
            })?;
    }

    let mut names = VertexNames::new();
    for (key, name) in doc.names {
        let field = format!("names[{key:?}]");
        let id: usize = key.parse().map_err(|_| ParseError::Field {
            field: field.clone(),
            message: "key is not a vertex id".into(),
        })?;
        if id >= doc.vertex_count {
            return Err(ParseError::Field {
                field,
                message: format!("vertex {id} out of range"),
            });
        }
        names.insert(VertexId(id), name);
    }
    Ok((g, names))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_graph_round_trips() {
        let g = DiGraph::new();
        let text = to_text(&g, None);
        assert_eq!(text, "{\n  \"edges\": [],\n  \"vertex_count\": 0\n}\n");
        assert_eq!(from_text(&text).unwrap().0, g);
    }

    #[test]
    fn path_round_trips_with_names() {
        let g = DiGraph::from_edges(3, &[(1, 2), (0, 1)]).unwrap();
        let mut names = VertexNames::new();
        names.insert(VertexId(0), "v1".into());
        names.insert(VertexId(2), "T \"anchor\"".into());
        let text = to_text(&g, Some(&names));
        assert_eq!(
            text,
            "{\n  \"edges\": [\n    [0, 1],\n    [1, 2]\n  ],\n  \"names\": {\n    \"0\": \"v1\",\n    \"2\": \"T \\\"anchor\\\"\"\n  },\n  \"vertex_count\": 3\n}\n"
        );
        let (back, back_names) = from_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back_names, names);
    }

    #[test]
    fn out_of_range_edge_is_a_field_error() {
        let text = r#"{"vertex_count": 3, "edges": [[0, 1], [1, 99]]}"#;
        match from_text(text) {
            Err(ParseError::Field { field, message }) => {
                assert_eq!(field, "edges[1]");
                assert!(message.contains("99"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\n  \"vertex_count\": 3,\n  \"edges\": [[0, 1]\n}";
        match from_text(text) {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            from_text(r#"{"vertex_count": 2, "edges": [[0, 0]]}"#),
            Err(ParseError::Field { .. })
        ));
        assert!(matches!(
            from_text(r#"{"vertex_count": 2, "edges": [], "extra": 1}"#),
            Err(ParseError::Syntax { .. })
        ));
    }

    fn arb_graph() -> impl Strategy<Value = DiGraph> {
        (0usize..12).prop_flat_map(|n| {
            proptest::collection::btree_set((0..n.max(1), 0..n.max(1)), 0..40).prop_map(
                move |pairs| {
                    let mut g = DiGraph::with_vertices(n);
                    for (u, v) in pairs {
                        let _ = g.add_edge(VertexId(u), VertexId(v));
                    }
                    g
                },
            )
        })
    }

    proptest! {
        #[test]
        fn text_round_trip_is_identity(g in arb_graph()) {
            let text = to_text(&g, None);
            let (back, _) = from_text(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(to_text(&back, None), text);
        }
    }
}
