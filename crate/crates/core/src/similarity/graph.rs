//! Top-k neighbor graphs over a similarity matrix, with DOT, GraphML,
//! and JSON exports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::country::{CountryTables, Region};
use crate::error::{Error, Result};
use crate::similarity::{SimilarityKind, SimilarityMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub cuisine: String,
    pub region: Region,
}

/// A directed edge from `source`'s neighbor list; indices refer to
/// [`SimilarityGraph::nodes`].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// The k-nearest-neighbor graph of a similarity matrix. Nodes follow
/// the matrix label order; each node's edges appear consecutively in
/// descending-weight order (ties broken by target name).
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    pub kind: SimilarityKind,
    pub k: usize,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

/// Builds the top-k graph. Every node gets exactly `k` outgoing edges
/// to its most similar peers; candidates with non-positive similarity
/// never qualify, and a node with fewer than `k` positive candidates is
/// an error. Each node is tagged with its cuisine's region.
pub fn build_similarity_graph(
    matrix: &SimilarityMatrix,
    tables: &CountryTables,
    k: usize,
) -> Result<SimilarityGraph> {
    let n = matrix.labels.len();
    if k == 0 {
        return Err(Error::InvalidArg("k must be at least 1".into()));
    }
    if k >= n {
        return Err(Error::InvalidArg(format!(
            "k = {k} needs more than {n} node(s)"
        )));
    }
    if matrix.values.len() != n || matrix.values.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "similarity matrix",
            expected: n,
            got: matrix.values.len(),
        });
    }
    let mut nodes = Vec::with_capacity(n);
    for label in &matrix.labels {
        let region = tables.region_of_cuisine(label).ok_or_else(|| {
            Error::Data(format!("cuisine {label:?} has no region mapping"))
        })?;
        nodes.push(GraphNode {
            cuisine: label.clone(),
            region,
        });
    }
    let mut edges = Vec::with_capacity(n * k);
    for i in 0..n {
        let mut candidates: Vec<(usize, f64)> = Vec::with_capacity(n - 1);
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = matrix.values[i][j];
            if !w.is_finite() {
                return Err(Error::Divergence(format!(
                    "similarity between {:?} and {:?} is not finite",
                    matrix.labels[i], matrix.labels[j]
                )));
            }
            if w > 0.0 {
                candidates.push((j, w));
            }
        }
        if candidates.len() < k {
            return Err(Error::Data(format!(
                "cuisine {:?} has only {} positive-similarity neighbors, need {k}",
                matrix.labels[i],
                candidates.len()
            )));
        }
        candidates.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .expect("weights are finite")
                .then_with(|| matrix.labels[a.0].cmp(&matrix.labels[b.0]))
        });
        for &(j, w) in candidates.iter().take(k) {
            edges.push(GraphEdge {
                source: i,
                target: j,
                weight: w,
            });
        }
    }
    Ok(SimilarityGraph {
        kind: matrix.kind,
        k,
        nodes,
        edges,
    })
}

/// Graph serialization formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    GraphMl,
    Json,
}

impl GraphFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Dot => "dot",
            GraphFormat::GraphMl => "graphml",
            GraphFormat::Json => "json",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    kind: String,
    k: usize,
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    cuisine: String,
    region: Region,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    source: String,
    target: String,
    weight: f64,
}

/// Serializes a graph to the requested text format. Output depends
/// only on the graph contents.
pub fn export_graph(graph: &SimilarityGraph, format: GraphFormat) -> Result<String> {
    match format {
        GraphFormat::Dot => Ok(export_dot(graph)),
        GraphFormat::GraphMl => Ok(export_graphml(graph)),
        GraphFormat::Json => export_json(graph),
    }
}

fn quote_dot(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn export_dot(graph: &SimilarityGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {}_similarity {{", graph.kind.name());
    for node in &graph.nodes {
        let _ = writeln!(
            out,
            "  {} [region={}];",
            quote_dot(&node.cuisine),
            quote_dot(node.region.name())
        );
    }
    for edge in &graph.edges {
        let _ = writeln!(
            out,
            "  {} -> {} [weight={}];",
            quote_dot(&graph.nodes[edge.source].cuisine),
            quote_dot(&graph.nodes[edge.target].cuisine),
            edge.weight
        );
    }
    out.push_str("}\n");
    out
}

fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

fn export_graphml(graph: &SimilarityGraph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"d0\" for=\"node\" attr.name=\"region\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"d1\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    let _ = writeln!(
        out,
        "  <graph id=\"{}_similarity\" edgedefault=\"directed\">",
        graph.kind.name()
    );
    for node in &graph.nodes {
        let _ = writeln!(
            out,
            "    <node id=\"{}\"><data key=\"d0\">{}</data></node>",
            escape_xml(&node.cuisine),
            escape_xml(node.region.name())
        );
    }
    for edge in &graph.edges {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"d1\">{}</data></edge>",
            escape_xml(&graph.nodes[edge.source].cuisine),
            escape_xml(&graph.nodes[edge.target].cuisine),
            edge.weight
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn export_json(graph: &SimilarityGraph) -> Result<String> {
    let json = JsonGraph {
        kind: graph.kind.name().to_string(),
        k: graph.k,
        nodes: graph
            .nodes
            .iter()
            .map(|n| JsonNode {
                cuisine: n.cuisine.clone(),
                region: n.region,
            })
            .collect(),
        edges: graph
            .edges
            .iter()
            .map(|e| JsonEdge {
                source: graph.nodes[e.source].cuisine.clone(),
                target: graph.nodes[e.target].cuisine.clone(),
                weight: e.weight,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&json)
        .map_err(|e| Error::Data(format!("graph serialization failed: {e}")))
}

/// Parses a graph previously written by the JSON exporter.
pub fn import_graph_json(text: &str) -> Result<SimilarityGraph> {
    let json: JsonGraph =
        serde_json::from_str(text).map_err(|e| Error::Data(format!("graph JSON: {e}")))?;
    let kind = match json.kind.as_str() {
        "ingredient" => SimilarityKind::Ingredient,
        "flavor" => SimilarityKind::Flavor,
        other => return Err(Error::Data(format!("unknown graph kind {other:?}"))),
    };
    let mut index = BTreeMap::new();
    for (i, node) in json.nodes.iter().enumerate() {
        if index.insert(node.cuisine.clone(), i).is_some() {
            return Err(Error::Data(format!(
                "duplicate node {:?} in graph JSON",
                node.cuisine
            )));
        }
    }
    let nodes = json
        .nodes
        .into_iter()
        .map(|n| GraphNode {
            cuisine: n.cuisine,
            region: n.region,
        })
        .collect();
    let mut edges = Vec::with_capacity(json.edges.len());
    for e in &json.edges {
        let source = *index
            .get(&e.source)
            .ok_or_else(|| Error::Data(format!("edge references unknown node {:?}", e.source)))?;
        let target = *index
            .get(&e.target)
            .ok_or_else(|| Error::Data(format!("edge references unknown node {:?}", e.target)))?;
        if !e.weight.is_finite() {
            return Err(Error::Data(format!(
                "edge {:?} -> {:?} has non-finite weight",
                e.source, e.target
            )));
        }
        edges.push(GraphEdge {
            source,
            target,
            weight: e.weight,
        });
    }
    Ok(SimilarityGraph {
        kind,
        k: json.k,
        nodes,
        edges,
    })
}
