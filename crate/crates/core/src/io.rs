//! Graph files and report output.
//!
//! Text edge lists hold one `u v` pair per line; a line with a single token
//! declares an isolated vertex, and `#` starts a comment. The JSON form is
//! `{"edges": [[u, v], ...]}` with an optional `"vertices"` list. Vertex
//! names are mapped to dense ids in sorted order: numerically when every
//! name is a nonnegative integer, lexicographically otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph together with the external name of each dense id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraph {
    pub graph: Graph,
    pub names: Vec<String>,
}

impl NamedGraph {
    /// Names equal to the ids.
    pub fn numeric(graph: Graph) -> Self {
        let names = (0..graph.vertex_count()).map(|i| i.to_string()).collect();
        NamedGraph { graph, names }
    }

    pub fn id(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no vertex named {name:?}")))
    }

    /// True when every name is its own id.
    pub fn is_identity(&self) -> bool {
        self.names.iter().enumerate().all(|(i, n)| *n == i.to_string())
    }

    fn from_names(edges: &[(String, String)], isolated: &[String], line_of: &[usize]) -> Result<Self> {
        let mut set: BTreeSet<&str> = BTreeSet::new();
        for (u, v) in edges {
            set.insert(u);
            set.insert(v);
        }
        set.extend(isolated.iter().map(String::as_str));
        let mut names: Vec<String> = set.into_iter().map(String::from).collect();
        if names.iter().all(|n| n.parse::<u64>().is_ok()) {
            names.sort_by_key(|n| n.parse::<u64>().unwrap_or(0));
            // "01" and "1" would collide after the numeric sort.
            if names
                .windows(2)
                .any(|w| w[0].parse::<u64>().ok() == w[1].parse::<u64>().ok())
            {
                return Err(Error::Parse {
                    line: 0,
                    message: "two names denote the same integer".into(),
                });
            }
        }
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut pairs = Vec::with_capacity(edges.len());
        for (k, (u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::Parse {
                    line: line_of.get(k).copied().unwrap_or(0),
                    message: format!("loop at vertex {u}"),
                });
            }
            pairs.push((index[u.as_str()], index[v.as_str()]));
        }
        let graph = Graph::with_vertices(names.len(), &pairs)?;
        Ok(NamedGraph { graph, names })
    }
}

pub fn parse_edge_list(text: &str) -> Result<NamedGraph> {
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    let mut isolated = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [v] => isolated.push(v.to_string()),
            [u, v] => {
                edges.push((u.to_string(), v.to_string()));
                lines.push(i + 1);
            }
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `u v`, found {} tokens", tokens.len()),
                })
            }
        }
    }
    NamedGraph::from_names(&edges, &isolated, &lines)
}

/// Edges in id order, then isolated vertices.
pub fn to_edge_list(g: &NamedGraph) -> String {
    let mut out = String::new();
    for &(u, v) in g.graph.edges() {
        out.push_str(&g.names[u]);
        out.push(' ');
        out.push_str(&g.names[v]);
        out.push('\n');
    }
    for v in 0..g.graph.vertex_count() {
        if g.graph.degree(v) == 0 {
            out.push_str(&g.names[v]);
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Name {
    Int(u64),
    Str(String),
}

impl Name {
    fn text(&self) -> String {
        match self {
            Name::Int(i) => i.to_string(),
            Name::Str(s) => s.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    edges: Vec<(Name, Name)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    vertices: Vec<Name>,
}

pub fn parse_json_graph(text: &str) -> Result<NamedGraph> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let parsed: JsonGraph = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
        line: e.inner().line(),
        message: format!("{}: {}", e.path(), e.inner()),
    })?;
    let edges: Vec<(String, String)> = parsed.edges.iter().map(|(u, v)| (u.text(), v.text())).collect();
    let isolated: Vec<String> = parsed.vertices.iter().map(Name::text).collect();
    NamedGraph::from_names(&edges, &isolated, &[])
}

/// JSON form; integer names are written as numbers. Isolated vertices go in
/// `"vertices"`.
pub fn to_json_graph(g: &NamedGraph) -> String {
    let name = |v: usize| match g.names[v].parse::<u64>() {
        Ok(i) if i.to_string() == g.names[v] => Name::Int(i),
        _ => Name::Str(g.names[v].clone()),
    };
    let doc = JsonGraph {
        edges: g.graph.edges().iter().map(|&(u, v)| (name(u), name(v))).collect(),
        vertices: (0..g.graph.vertex_count())
            .filter(|&v| g.graph.degree(v) == 0)
            .map(name)
            .collect(),
    };
    serde_json::to_string(&doc).expect("graph serializes")
}

/// Reads a `.json` file as JSON and anything else as an edge list.
pub fn read_graph(path: &Path) -> Result<NamedGraph> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        parse_json_graph(&text)
    } else {
        parse_edge_list(&text)
    }
}

/// SHA-256 of the canonical edge list, in hex.
pub fn graph_hash(g: &NamedGraph) -> String {
    hex::encode(Sha256::digest(to_edge_list(g).as_bytes()))
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", file_name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
