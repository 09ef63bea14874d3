//! Edge-list ingestion and the bundled datasets.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Datasets shipped with the crate, as `(name, edge list)`.
pub const BUNDLED: &[(&str, &str)] = &[
    ("flor-families", include_str!("../data/flor-families.txt")),
    ("les-miserables", include_str!("../data/les-miserables.txt")),
    ("fig2-grid", include_str!("../data/fig2-grid.txt")),
];

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` are comments, blank lines are skipped, and
/// any columns past the first two are ignored. Node tokens receive dense ids
/// in order of first appearance and are kept as labels. When `directed_input`
/// is set the arcs are symmetrized, which for this representation only means
/// that `a b` and `b a` collapse into one edge.
pub fn load_edge_list<R: BufRead>(reader: R, directed_input: bool) -> Result<Graph> {
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();

    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: index + 1,
                    message: format!("expected two node tokens, got '{trimmed}'"),
                })
            }
        };
        let mut intern = |token: &str| -> NodeId {
            *ids.entry(token.to_string()).or_insert_with(|| {
                labels.push(token.to_string());
                labels.len() - 1
            })
        };
        let u = intern(a);
        let v = intern(b);
        edges.push((u, v));
    }

    if labels.is_empty() {
        return Err(Error::EmptyInput);
    }
    log::debug!(
        "parsed {} {} lines over {} nodes",
        edges.len(),
        if directed_input { "arc" } else { "edge" },
        labels.len()
    );
    let graph = Graph::from_edges(labels.len(), edges)?.with_labels(labels)?;
    if !graph.is_connected() {
        log::warn!(
            "graph has {} connected components; results assume nothing about connectivity",
            graph.component_count()
        );
    }
    Ok(graph)
}

pub fn parse_edge_list(text: &str, directed_input: bool) -> Result<Graph> {
    load_edge_list(text.as_bytes(), directed_input)
}

/// Writes one `label label` line per undirected edge.
///
/// Isolated nodes cannot be represented in this format and are lost.
pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{} {}", graph.label(u), graph.label(v));
    }
    out
}

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(name, _)| *name).collect()
}

pub fn load_bundled(name: &str) -> Result<Graph> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(candidate, _)| *candidate == name)
        .ok_or_else(|| Error::UnknownDataset {
            name: name.to_string(),
            available: bundled_names().join(", "),
        })?;
    parse_edge_list(text, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph() {
        let g = parse_edge_list("a b\nb c\n", false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let degrees: Vec<_> = g.nodes().map(|u| g.degree(u)).collect();
        assert_eq!(degrees, vec![1, 2, 1]);
        assert_eq!(g.label(2), "c");
    }

    #[test]
    fn duplicates_and_self_loops_dropped() {
        let g = parse_edge_list("a b\nb a\na a\n", true).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_and_extra_columns() {
        let text = "% konect header\n# comment\n\n1 2 0.5 1699999\n2 3 1\n";
        let g = parse_edge_list(text, false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_edge_list("a b\n# ok\nc\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(parse_edge_list("", false).unwrap_err(), Error::EmptyInput);
        assert_eq!(
            parse_edge_list("# only\n", false).unwrap_err(),
            Error::EmptyInput
        );
    }

    #[test]
    fn bundled_sizes() {
        let flor = load_bundled("flor-families").unwrap();
        assert_eq!((flor.node_count(), flor.edge_count()), (15, 20));
        let lesmis = load_bundled("les-miserables").unwrap();
        assert_eq!((lesmis.node_count(), lesmis.edge_count()), (77, 254));
        let grid = load_bundled("fig2-grid").unwrap();
        assert_eq!(grid.node_count(), 25);
        assert!(grid.is_connected());
        // ids follow the figure's numbering
        assert!((0..25).all(|u| grid.label(u) == u.to_string()));
    }

    #[test]
    fn unknown_dataset_lists_alternatives() {
        let err = load_bundled("karate").unwrap_err();
        assert!(err.to_string().contains("flor-families"));
    }
}
