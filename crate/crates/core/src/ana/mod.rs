//! Three-unicast networks: validation, shared 1-edge-cut sets, and the
//! graph-theoretic feasibility conditions of the alignment scheme.
//!
//! Session indices are 0-based in the API (`0, 1, 2`) and 1-based in every
//! rendered report.

pub mod cuts;
pub mod feasibility;
pub mod lemmas;

use thiserror::Error;

use crate::dag::{Dag, DagError, EdgeId, GainSegments, NodeId};

pub use cuts::{cut_sets, CutSets};
pub use feasibility::{
    cor1_check, gtc_feasibility, prop4_degenerate, Cor1Verdict, CrossCut, CrossCutCondition,
    Degeneracy, FeasibilityReport, PairViolation, Prop5Verdicts, RemovalCondition,
    SchemeFeasibility, SeparationCondition,
};
pub use lemmas::{verify_structural_lemmas, Counterexample, LemmaReport, LemmaResult};

/// The two session indices other than `k`, ascending.
pub fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("session index {k} out of range"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Session {
    pub source: NodeId,
    pub destination: NodeId,
    pub source_edge: EdgeId,
    pub destination_edge: EdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnaError {
    #[error("terminal node `{0}` is used more than once")]
    DuplicateTerminal(String),
    #[error("{role} `{node}` has in-degree {in_degree} and out-degree {out_degree}")]
    TerminalDegreeViolation {
        node: String,
        role: &'static str,
        in_degree: usize,
        out_degree: usize,
    },
    #[error("destination `{to}` is not reachable from source `{from}`")]
    ReachabilityViolation { from: String, to: String },
}

/// A validated three-unicast network: every source has one outgoing edge
/// and no incoming edge, every destination one incoming edge and no
/// outgoing edge, the six terminals are distinct, and every destination is
/// reachable from every source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnaNetwork {
    dag: Dag,
    sessions: [Session; 3],
}

/// Checks the network conditions for `(source, destination)` pairs in
/// session order.
pub fn validate_ana(dag: Dag, terminals: [(NodeId, NodeId); 3]) -> Result<AnaNetwork, AnaError> {
    let mut seen = Vec::new();
    for &(s, d) in &terminals {
        for v in [s, d] {
            if seen.contains(&v) {
                return Err(AnaError::DuplicateTerminal(dag.node_name(v).to_string()));
            }
            seen.push(v);
        }
    }
    let degree_error = |v: NodeId, role| AnaError::TerminalDegreeViolation {
        node: dag.node_name(v).to_string(),
        role,
        in_degree: dag.in_edges(v).len(),
        out_degree: dag.out_edges(v).len(),
    };
    let mut sessions = Vec::with_capacity(3);
    for &(s, d) in &terminals {
        if !dag.in_edges(s).is_empty() || dag.out_edges(s).len() != 1 {
            return Err(degree_error(s, "source"));
        }
        if dag.in_edges(d).len() != 1 || !dag.out_edges(d).is_empty() {
            return Err(degree_error(d, "destination"));
        }
        sessions.push(Session {
            source: s,
            destination: d,
            source_edge: dag.out_edges(s)[0],
            destination_edge: dag.in_edges(d)[0],
        });
    }
    for &(s, _) in &terminals {
        for &(_, d) in &terminals {
            if !dag.node_reaches(s, d) {
                return Err(AnaError::ReachabilityViolation {
                    from: dag.node_name(s).to_string(),
                    to: dag.node_name(d).to_string(),
                });
            }
        }
    }
    Ok(AnaNetwork {
        dag,
        sessions: [sessions[0], sessions[1], sessions[2]],
    })
}

impl AnaNetwork {
    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn into_dag(self) -> Dag {
        self.dag
    }

    pub fn session(&self, k: usize) -> &Session {
        &self.sessions[k]
    }

    pub fn source(&self, i: usize) -> NodeId {
        self.sessions[i].source
    }

    pub fn destination(&self, j: usize) -> NodeId {
        self.sessions[j].destination
    }

    pub fn source_edge(&self, i: usize) -> EdgeId {
        self.sessions[i].source_edge
    }

    pub fn destination_edge(&self, j: usize) -> EdgeId {
        self.sessions[j].destination_edge
    }

    /// Terminal pairs in the form accepted by [`validate_ana`].
    pub fn terminals(&self) -> [(NodeId, NodeId); 3] {
        self.sessions.map(|s| (s.source, s.destination))
    }
}

/// Segments of the gain from `e_s` to `e_d` delimited by their 1-edge cuts.
pub fn factor_channel_gain(
    net: &AnaNetwork,
    e_s: EdgeId,
    e_d: EdgeId,
) -> Result<GainSegments, DagError> {
    net.dag().gain_segments(e_s, e_d)
}
