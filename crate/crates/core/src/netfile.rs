//! JSON network files and Graphviz export.
//!
//! ```json
//! {"nodes": ["s1", "a", ...],
//!  "edges": [{"id": "e1", "tail": "s1", "head": "a"}, ...],
//!  "sessions": [{"source": "s1", "destination": "d1"}, ...]}
//! ```
//!
//! Session order fixes the indices 1, 2, 3.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ana::{validate_ana, AnaError, AnaNetwork};
use crate::dag::{Dag, DagError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionEntry {
    pub source: String,
    pub destination: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeEntry>,
    pub sessions: Vec<SessionEntry>,
}

#[derive(Debug, Error)]
pub enum NetFileError {
    #[error("malformed network JSON")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Dag(#[from] DagError),
    #[error(transparent)]
    Ana(#[from] AnaError),
    #[error("expected exactly 3 sessions, found {0}")]
    SessionCount(usize),
}

impl NetworkFile {
    pub fn parse(text: &str) -> Result<Self, NetFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_network(net: &AnaNetwork) -> Self {
        let dag = net.dag();
        Self {
            nodes: dag.nodes().map(|v| dag.node_name(v).to_string()).collect(),
            edges: dag
                .edges()
                .map(|e| EdgeEntry {
                    id: dag.edge_name(e).to_string(),
                    tail: dag.node_name(dag.tail(e)).to_string(),
                    head: dag.node_name(dag.head(e)).to_string(),
                })
                .collect(),
            sessions: (0..3)
                .map(|i| SessionEntry {
                    source: dag.node_name(net.source(i)).to_string(),
                    destination: dag.node_name(net.destination(i)).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_network(&self) -> Result<AnaNetwork, NetFileError> {
        if self.sessions.len() != 3 {
            return Err(NetFileError::SessionCount(self.sessions.len()));
        }
        let dag = Dag::new(
            &self.nodes,
            self.edges.iter().map(|e| (&e.id, &e.tail, &e.head)),
        )?;
        let lookup = |n: &str| {
            dag.node(n)
                .ok_or_else(|| DagError::UnknownNode(n.to_string()))
        };
        let mut terminals = Vec::with_capacity(3);
        for s in &self.sessions {
            terminals.push((lookup(&s.source)?, lookup(&s.destination)?));
        }
        let terminals: [_; 3] = terminals.try_into().expect("three sessions");
        Ok(validate_ana(dag, terminals)?)
    }

    /// Pretty JSON with a trailing newline; identical networks give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("network file serializes");
        s.push('\n');
        s
    }
}

pub fn parse_network(text: &str) -> Result<AnaNetwork, NetFileError> {
    NetworkFile::parse(text)?.to_network()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Plain Graphviz text; terminals are boxed and edges labelled by id.
pub fn to_dot(net: &AnaNetwork) -> String {
    let dag = net.dag();
    let mut out = String::from("digraph network {\n  rankdir=LR;\n");
    for (s, d) in net.terminals() {
        for v in [s, d] {
            let _ = writeln!(out, "  {} [shape=box];", quote(dag.node_name(v)));
        }
    }
    for e in dag.edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(dag.node_name(dag.tail(e))),
            quote(dag.node_name(dag.head(e))),
            quote(dag.edge_name(e)),
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ana::fixtures;

    #[test]
    fn round_trip() {
        let net = fixtures::shared_chain();
        let file = NetworkFile::from_network(&net);
        let back = parse_network(&file.to_json()).unwrap();
        assert_eq!(back, net);
        assert_eq!(NetworkFile::from_network(&back).to_json(), file.to_json());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_network("{"), Err(NetFileError::Json(_))));
        let mut file = NetworkFile::from_network(&fixtures::shared_chain());
        file.sessions.pop();
        assert!(matches!(
            file.to_network(),
            Err(NetFileError::SessionCount(2))
        ));
        let mut file = NetworkFile::from_network(&fixtures::shared_chain());
        file.edges[0].head = "nowhere".into();
        assert!(matches!(
            file.to_network(),
            Err(NetFileError::Dag(DagError::UnknownNode(_)))
        ));
        let mut file = NetworkFile::from_network(&fixtures::shared_chain());
        file.sessions[1].source = "s1".into();
        assert!(matches!(file.to_network(), Err(NetFileError::Ana(_))));
        let extra = r#"{"nodes":[],"edges":[],"sessions":[],"x":1}"#;
        assert!(matches!(parse_network(extra), Err(NetFileError::Json(_))));
    }

    #[test]
    fn dot_lists_every_edge() {
        let dot = to_dot(&fixtures::shared_chain());
        assert_eq!(dot.matches(" -> ").count(), 9);
        assert!(dot.contains("\"m\" -> \"a\" [label=\"x1\"];"));
    }
}
