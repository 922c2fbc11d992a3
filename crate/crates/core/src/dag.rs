//! Directed acyclic multigraphs with edge-level reachability and cut queries.
//!
//! Nodes and edges carry string labels but are addressed internally by
//! dense indices ([`NodeId`], [`EdgeId`]). Parallel edges are allowed; every
//! query keys on edge ids, never on endpoint pairs. All orderings that leak
//! into results are topological with ties broken by edge index, so repeated
//! runs produce identical output.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::flow::FlowNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub(crate) usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

pub type EdgeSet = BTreeSet<EdgeId>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub tail: NodeId,
    pub head: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DagError {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown edge index {0}")]
    UnknownEdge(usize),
    #[error("directed cycle detected through edge `{0}`")]
    CycleDetected(String),
}

/// How two edges sit relative to each other in the partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRelation {
    /// The first edge strictly precedes the second.
    Upstream,
    Downstream,
    Equal,
    Unreachable,
}

/// Source and sink node sets of an edge-cut query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutQuery {
    pub sources: BTreeSet<NodeId>,
    pub sinks: BTreeSet<NodeId>,
}

impl CutQuery {
    pub fn new(
        sources: impl IntoIterator<Item = NodeId>,
        sinks: impl IntoIterator<Item = NodeId>,
    ) -> Self {
        Self {
            sources: sources.into_iter().collect(),
            sinks: sinks.into_iter().collect(),
        }
    }

    pub fn between(u: NodeId, v: NodeId) -> Self {
        Self::new([u], [v])
    }

    fn overlaps(&self) -> bool {
        self.sources.iter().any(|u| self.sinks.contains(u))
    }
}

/// Value of a minimum cut. `Infinite` when the source and sink sets overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CutValue {
    Finite(usize),
    Infinite,
}

impl CutValue {
    pub fn at_least(self, k: usize) -> bool {
        match self {
            CutValue::Finite(v) => v >= k,
            CutValue::Infinite => true,
        }
    }

    pub fn is(self, k: usize) -> bool {
        self == CutValue::Finite(k)
    }
}

impl fmt::Display for CutValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutValue::Finite(v) => write!(f, "{v}"),
            CutValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for CutValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            CutValue::Finite(v) => serializer.serialize_u64(*v as u64),
            CutValue::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Shape of the channel gain between two distinct edges, read off the
/// 1-edge cuts between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GainSegments {
    /// No path: the gain is the zero polynomial.
    Zero,
    /// Consecutive `(from, to)` segments whose gains multiply to the full
    /// gain. A single segment means the gain does not split.
    Segments(Vec<(EdgeId, EdgeId)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    node_names: Vec<String>,
    node_lookup: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    edge_lookup: HashMap<String, EdgeId>,
    in_edges: Vec<Vec<EdgeId>>,
    out_edges: Vec<Vec<EdgeId>>,
    topo: Vec<EdgeId>,
    topo_rank: Vec<usize>,
    node_topo: Vec<NodeId>,
    /// `reach[u]` is a bitset over nodes reachable from `u` (including `u`).
    reach: Vec<Vec<u64>>,
    pairs: Vec<(EdgeId, EdgeId)>,
    pairs_into: Vec<Vec<(EdgeId, usize)>>,
}

impl Dag {
    pub fn new<N, E, T, H>(
        nodes: impl IntoIterator<Item = N>,
        edges: impl IntoIterator<Item = (E, T, H)>,
    ) -> Result<Self, DagError>
    where
        N: AsRef<str>,
        E: AsRef<str>,
        T: AsRef<str>,
        H: AsRef<str>,
    {
        let mut node_names = Vec::new();
        let mut node_lookup = HashMap::new();
        for name in nodes {
            let name = name.as_ref().to_string();
            if node_lookup.contains_key(&name) {
                return Err(DagError::DuplicateNode(name));
            }
            node_lookup.insert(name.clone(), NodeId(node_names.len()));
            node_names.push(name);
        }
        let mut edge_list = Vec::new();
        let mut edge_lookup = HashMap::new();
        for (name, tail, head) in edges {
            let name = name.as_ref().to_string();
            if edge_lookup.contains_key(&name) {
                return Err(DagError::DuplicateEdge(name));
            }
            let lookup = |n: &str| {
                node_lookup
                    .get(n)
                    .copied()
                    .ok_or_else(|| DagError::UnknownNode(n.to_string()))
            };
            let tail = lookup(tail.as_ref())?;
            let head = lookup(head.as_ref())?;
            edge_lookup.insert(name.clone(), EdgeId(edge_list.len()));
            edge_list.push(Edge { name, tail, head });
        }
        Self::assemble(node_names, node_lookup, edge_list, edge_lookup)
    }

    fn assemble(
        node_names: Vec<String>,
        node_lookup: HashMap<String, NodeId>,
        edges: Vec<Edge>,
        edge_lookup: HashMap<String, EdgeId>,
    ) -> Result<Self, DagError> {
        let n = node_names.len();
        let mut in_edges = vec![Vec::new(); n];
        let mut out_edges = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            out_edges[e.tail.0].push(EdgeId(k));
            in_edges[e.head.0].push(EdgeId(k));
        }

        // Kahn's algorithm on nodes; an edge becomes ready once its tail has
        // no unprocessed incoming edges. Min-heaps give the id tie-break.
        let mut indeg: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut ready_nodes: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut node_topo = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready_nodes.pop() {
            node_topo.push(NodeId(v));
            for e in &out_edges[v] {
                let h = edges[e.0].head.0;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready_nodes.push(Reverse(h));
                }
            }
        }
        if node_topo.len() < n {
            let stuck = edges
                .iter()
                .find(|e| indeg[e.head.0] > 0 && indeg[e.tail.0] > 0)
                .or_else(|| edges.iter().find(|e| indeg[e.head.0] > 0))
                .map(|e| e.name.clone())
                .unwrap_or_default();
            return Err(DagError::CycleDetected(stuck));
        }

        let mut indeg: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> = BinaryHeap::new();
        for v in 0..n {
            if indeg[v] == 0 {
                ready.extend(out_edges[v].iter().map(|e| Reverse(e.0)));
            }
        }
        let mut topo = Vec::with_capacity(edges.len());
        while let Some(Reverse(k)) = ready.pop() {
            topo.push(EdgeId(k));
            let h = edges[k].head.0;
            indeg[h] -= 1;
            if indeg[h] == 0 {
                ready.extend(out_edges[h].iter().map(|e| Reverse(e.0)));
            }
        }
        let mut topo_rank = vec![0; edges.len()];
        for (r, e) in topo.iter().enumerate() {
            topo_rank[e.0] = r;
        }

        let words = n.div_ceil(64).max(1);
        let mut reach = vec![vec![0u64; words]; n];
        for v in node_topo.iter().rev() {
            let mut bits = vec![0u64; words];
            bits[v.0 / 64] |= 1 << (v.0 % 64);
            for e in &out_edges[v.0] {
                let h = edges[e.0].head.0;
                for (b, r) in bits.iter_mut().zip(&reach[h]) {
                    *b |= r;
                }
            }
            reach[v.0] = bits;
        }

        let mut pairs = Vec::new();
        let mut pairs_into = vec![Vec::new(); edges.len()];
        for &f in &topo {
            for &e in &in_edges[edges[f.0].tail.0] {
                pairs_into[f.0].push((e, pairs.len()));
                pairs.push((e, f));
            }
        }

        Ok(Self {
            node_names,
            node_lookup,
            edges,
            edge_lookup,
            in_edges,
            out_edges,
            topo,
            topo_rank,
            node_topo,
            reach,
            pairs,
            pairs_into,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_names.len()).map(NodeId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.node_lookup.get(name).copied()
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_lookup.get(name).copied()
    }

    pub fn node_name(&self, v: NodeId) -> &str {
        &self.node_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn edge_data(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn tail(&self, e: EdgeId) -> NodeId {
        self.edges[e.0].tail
    }

    pub fn head(&self, e: EdgeId) -> NodeId {
        self.edges[e.0].head
    }

    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.0 < self.edges.len()
    }

    fn check_edge(&self, e: EdgeId) -> Result<(), DagError> {
        if self.contains_edge(e) {
            Ok(())
        } else {
            Err(DagError::UnknownEdge(e.0))
        }
    }

    /// Edges in topological order, ties broken by edge index.
    pub fn topo_order(&self) -> &[EdgeId] {
        &self.topo
    }

    pub fn node_topo_order(&self) -> &[NodeId] {
        &self.node_topo
    }

    /// Position of `e` in [`Dag::topo_order`].
    pub fn topo_rank(&self, e: EdgeId) -> usize {
        self.topo_rank[e.0]
    }

    /// Adjacent pairs `(e', e'')` with `head(e') = tail(e'')`, indexed by
    /// position. These are the local encoding kernel variables.
    pub fn kernel_pairs(&self) -> &[(EdgeId, EdgeId)] {
        &self.pairs
    }

    /// Incoming kernel pairs of `f` as `(predecessor edge, pair index)`.
    pub fn pairs_into(&self, f: EdgeId) -> &[(EdgeId, usize)] {
        &self.pairs_into[f.0]
    }

    /// `u ⪯ v`: a (possibly empty) directed path leads from `u` to `v`.
    pub fn node_reaches(&self, u: NodeId, v: NodeId) -> bool {
        self.reach[u.0][v.0 / 64] & (1 << (v.0 % 64)) != 0
    }

    /// `e1 ≺ e2`: distinct edges with `head(e1) ⪯ tail(e2)`.
    pub fn precedes(&self, e1: EdgeId, e2: EdgeId) -> bool {
        e1 != e2 && self.node_reaches(self.head(e1), self.tail(e2))
    }

    pub fn edge_relation(&self, e1: EdgeId, e2: EdgeId) -> Result<EdgeRelation, DagError> {
        self.check_edge(e1)?;
        self.check_edge(e2)?;
        Ok(if e1 == e2 {
            EdgeRelation::Equal
        } else if self.precedes(e1, e2) {
            EdgeRelation::Upstream
        } else if self.precedes(e2, e1) {
            EdgeRelation::Downstream
        } else {
            EdgeRelation::Unreachable
        })
    }

    /// Nodes reachable from `from` when the edges flagged in `removed` are
    /// ignored.
    fn reach_avoiding(&self, from: &BTreeSet<NodeId>, removed: Option<&[bool]>) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::new();
        for &u in from {
            if !seen[u.0] {
                seen[u.0] = true;
                queue.push_back(u.0);
            }
        }
        while let Some(v) = queue.pop_front() {
            for e in &self.out_edges[v] {
                if removed.is_some_and(|r| r[e.0]) {
                    continue;
                }
                let h = self.edges[e.0].head.0;
                if !seen[h] {
                    seen[h] = true;
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    /// Whether some node of `q.sources` reaches some node of `q.sinks`.
    pub fn connects(&self, q: &CutQuery) -> bool {
        q.sources
            .iter()
            .any(|&u| q.sinks.iter().any(|&w| self.node_reaches(u, w)))
    }

    /// Minimum number of edges whose removal disconnects `q.sources` from
    /// `q.sinks`: 0 when already disconnected, infinite when the sets meet.
    pub fn edge_cut_value(&self, q: &CutQuery) -> CutValue {
        if q.overlaps() {
            return CutValue::Infinite;
        }
        if !self.connects(q) {
            return CutValue::Finite(0);
        }
        let n = self.node_count();
        let (source, sink) = (n, n + 1);
        let big = self.edge_count() + 1;
        let mut net = FlowNetwork::new(n + 2);
        for e in &self.edges {
            net.add_arc(e.tail.0, e.head.0, 1);
        }
        for u in &q.sources {
            net.add_arc(source, u.0, big);
        }
        for w in &q.sinks {
            net.add_arc(w.0, sink, big);
        }
        CutValue::Finite(net.max_flow(source, sink, big))
    }

    /// Minimum number of nodes outside `q.sources ∪ q.sinks` meeting every
    /// source-to-sink path. Infinite when the sets meet or are joined by an
    /// edge directly.
    pub fn vertex_cut_value(&self, q: &CutQuery) -> CutValue {
        if q.overlaps() {
            return CutValue::Infinite;
        }
        if self
            .edges
            .iter()
            .any(|e| q.sources.contains(&e.tail) && q.sinks.contains(&e.head))
        {
            return CutValue::Infinite;
        }
        if !self.connects(q) {
            return CutValue::Finite(0);
        }
        // Node v splits into v_in = 2v and v_out = 2v + 1.
        let n = self.node_count();
        let (source, sink) = (2 * n, 2 * n + 1);
        let big = n + 1;
        let mut net = FlowNetwork::new(2 * n + 2);
        for v in 0..n {
            let terminal = q.sources.contains(&NodeId(v)) || q.sinks.contains(&NodeId(v));
            net.add_arc(2 * v, 2 * v + 1, if terminal { big } else { 1 });
        }
        for e in &self.edges {
            net.add_arc(2 * e.tail.0 + 1, 2 * e.head.0, big);
        }
        for u in &q.sources {
            net.add_arc(source, 2 * u.0, big);
        }
        for w in &q.sinks {
            net.add_arc(2 * w.0 + 1, sink, big);
        }
        CutValue::Finite(net.max_flow(source, sink, big))
    }

    /// Every edge whose removal alone disconnects `q.sources` from `q.sinks`,
    /// in topological order. Empty when the sets are disconnected, overlap,
    /// or are joined by two edge-disjoint paths.
    pub fn one_edge_cuts(&self, q: &CutQuery) -> Vec<EdgeId> {
        if q.overlaps() || !self.connects(q) {
            return Vec::new();
        }
        let mut removed = vec![false; self.edge_count()];
        let mut cuts = Vec::new();
        for &e in &self.topo {
            let on_path = q
                .sources
                .iter()
                .any(|&u| self.node_reaches(u, self.tail(e)))
                && q.sinks.iter().any(|&w| self.node_reaches(self.head(e), w));
            if !on_path {
                continue;
            }
            removed[e.0] = true;
            let seen = self.reach_avoiding(&q.sources, Some(&removed));
            removed[e.0] = false;
            if !q.sinks.iter().any(|w| seen[w.0]) {
                cuts.push(e);
            }
        }
        cuts
    }

    /// The members of `set` with no other member upstream of them, in
    /// topological order.
    pub fn most_upstream(&self, set: &EdgeSet) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = set
            .iter()
            .copied()
            .filter(|&e| !set.iter().any(|&f| self.precedes(f, e)))
            .collect();
        out.sort_by_key(|&e| self.topo_rank(e));
        out
    }

    /// The graph whose nodes are this graph's edges, with an arc `e' → e''`
    /// whenever `head(e') = tail(e'')`. Line-graph arcs are named
    /// `"<i>|<j>"` by edge index.
    pub fn line_graph(&self) -> Dag {
        let nodes: Vec<&str> = self.edges.iter().map(|e| e.name.as_str()).collect();
        let arcs: Vec<(String, &str, &str)> = self
            .edges()
            .flat_map(|f| {
                self.in_edges(self.tail(f)).iter().map(move |&e| {
                    (
                        format!("{}|{}", e.0, f.0),
                        self.edge_name(e),
                        self.edge_name(f),
                    )
                })
            })
            .collect();
        Dag::new(nodes, arcs).expect("line graph of a DAG is a DAG")
    }

    /// Subgraph with the listed edges removed and the node set unchanged.
    /// Surviving edges keep their names; their ids are renumbered densely.
    pub fn delete_edges(&self, set: &EdgeSet) -> Dag {
        let edges: Vec<Edge> = self
            .edges()
            .filter(|e| !set.contains(e))
            .map(|e| self.edges[e.0].clone())
            .collect();
        let edge_lookup = edges
            .iter()
            .enumerate()
            .map(|(k, e)| (e.name.clone(), EdgeId(k)))
            .collect();
        Self::assemble(
            self.node_names.clone(),
            self.node_lookup.clone(),
            edges,
            edge_lookup,
        )
        .expect("a subgraph of a DAG is a DAG")
    }

    /// Length in edges of the longest directed path.
    pub fn longest_path_edges(&self) -> usize {
        let mut depth = vec![0usize; self.edge_count()];
        let mut best = 0;
        for &f in &self.topo {
            let d = 1 + self.pairs_into[f.0]
                .iter()
                .map(|&(e, _)| depth[e.0])
                .max()
                .unwrap_or(0);
            depth[f.0] = d;
            best = best.max(d);
        }
        best
    }

    /// Splits the gain from `e_s` to `e_d` along the 1-edge cuts separating
    /// `head(e_s)` from `tail(e_d)`.
    pub fn gain_segments(&self, e_s: EdgeId, e_d: EdgeId) -> Result<GainSegments, DagError> {
        self.check_edge(e_s)?;
        self.check_edge(e_d)?;
        let q = CutQuery::between(self.head(e_s), self.tail(e_d));
        match self.edge_cut_value(&q) {
            CutValue::Finite(0) => Ok(GainSegments::Zero),
            CutValue::Finite(1) => {
                let mut bounds = vec![e_s];
                bounds.extend(self.one_edge_cuts(&q));
                bounds.push(e_d);
                Ok(GainSegments::Segments(
                    bounds.windows(2).map(|w| (w[0], w[1])).collect(),
                ))
            }
            _ => Ok(GainSegments::Segments(vec![(e_s, e_d)])),
        }
    }

    pub fn edge_names<'a>(&'a self, edges: impl IntoIterator<Item = &'a EdgeId>) -> Vec<String> {
        edges
            .into_iter()
            .map(|&e| self.edge_name(e).to_string())
            .collect()
    }

    /// Sorts an edge set topologically.
    pub fn sorted(&self, set: &EdgeSet) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = set.iter().copied().collect();
        v.sort_by_key(|&e| self.topo_rank(e));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Dag {
        Dag::new(
            ["s", "a", "b", "t"],
            [
                ("e1", "s", "a"),
                ("e2", "s", "b"),
                ("e3", "a", "t"),
                ("e4", "b", "t"),
            ],
        )
        .unwrap()
    }

    fn path3() -> Dag {
        Dag::new(
            ["s", "a", "b", "t"],
            [("e1", "s", "a"), ("e2", "a", "b"), ("e3", "b", "t")],
        )
        .unwrap()
    }

    fn ids(dag: &Dag, names: &[&str]) -> Vec<EdgeId> {
        names.iter().map(|n| dag.edge(n).unwrap()).collect()
    }

    /// All edge orders in which every edge comes after its upstream edges.
    fn all_valid_orders(dag: &Dag) -> Vec<Vec<EdgeId>> {
        fn go(dag: &Dag, prefix: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
            if prefix.len() == dag.edge_count() {
                out.push(prefix.clone());
                return;
            }
            for e in dag.edges() {
                if prefix.contains(&e) {
                    continue;
                }
                let ok = dag
                    .edges()
                    .filter(|&f| dag.precedes(f, e))
                    .all(|f| prefix.contains(&f));
                if ok {
                    prefix.push(e);
                    go(dag, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(dag, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn topo_order_small_cases() {
        let single = Dag::new(["s", "t"], [("e1", "s", "t")]).unwrap();
        assert_eq!(single.topo_order(), &ids(&single, &["e1"])[..]);

        let empty = Dag::new(Vec::<&str>::new(), Vec::<(&str, &str, &str)>::new()).unwrap();
        assert!(empty.topo_order().is_empty());

        let d = diamond();
        let orders = all_valid_orders(&d);
        // Lexicographically smallest valid order by edge index is the
        // id-tie-broken one.
        let expected = orders.iter().min().unwrap().clone();
        assert_eq!(expected, ids(&d, &["e1", "e2", "e3", "e4"]));
        assert_eq!(d.topo_order(), &expected[..]);
    }

    #[test]
    fn cycles_and_bad_input_are_rejected() {
        let err = Dag::new(["a", "b"], [("x", "a", "b"), ("y", "b", "a")]).unwrap_err();
        assert!(matches!(err, DagError::CycleDetected(_)));
        let err = Dag::new(["a"], [("x", "a", "a")]).unwrap_err();
        assert!(matches!(err, DagError::CycleDetected(_)));
        assert_eq!(
            Dag::new(["a", "a"], Vec::<(&str, &str, &str)>::new()).unwrap_err(),
            DagError::DuplicateNode("a".into())
        );
        assert_eq!(
            Dag::new(["a", "b"], [("x", "a", "b"), ("x", "a", "b")]).unwrap_err(),
            DagError::DuplicateEdge("x".into())
        );
        assert_eq!(
            Dag::new(["a"], [("x", "a", "q")]).unwrap_err(),
            DagError::UnknownNode("q".into())
        );
    }

    #[test]
    fn edge_relations() {
        let p = path3();
        let e = ids(&p, &["e1", "e2", "e3"]);
        assert_eq!(p.edge_relation(e[0], e[2]).unwrap(), EdgeRelation::Upstream);
        assert_eq!(
            p.edge_relation(e[2], e[0]).unwrap(),
            EdgeRelation::Downstream
        );
        assert_eq!(p.edge_relation(e[1], e[1]).unwrap(), EdgeRelation::Equal);
        let d = diamond();
        let e = ids(&d, &["e1", "e2"]);
        assert_eq!(
            d.edge_relation(e[0], e[1]).unwrap(),
            EdgeRelation::Unreachable
        );
        assert_eq!(
            d.edge_relation(EdgeId(99), e[0]).unwrap_err(),
            DagError::UnknownEdge(99)
        );
    }

    #[test]
    fn cut_values_follow_conventions() {
        let d = diamond();
        let (s, a, b, t) = (
            d.node("s").unwrap(),
            d.node("a").unwrap(),
            d.node("b").unwrap(),
            d.node("t").unwrap(),
        );
        assert_eq!(
            d.edge_cut_value(&CutQuery::between(s, t)),
            CutValue::Finite(2)
        );
        assert_eq!(
            d.edge_cut_value(&CutQuery::between(a, b)),
            CutValue::Finite(0)
        );
        assert_eq!(
            d.edge_cut_value(&CutQuery::new([s, a], [a, t])),
            CutValue::Infinite
        );
        assert!(d.one_edge_cuts(&CutQuery::between(s, t)).is_empty());
        assert!(d.one_edge_cuts(&CutQuery::between(a, b)).is_empty());

        let p = path3();
        let q = CutQuery::between(p.node("s").unwrap(), p.node("t").unwrap());
        assert_eq!(p.one_edge_cuts(&q), ids(&p, &["e1", "e2", "e3"]));
        assert_eq!(p.edge_cut_value(&q), CutValue::Finite(1));
    }

    #[test]
    fn parallel_edges_count_separately() {
        let g = Dag::new(["s", "t"], [("a", "s", "t"), ("b", "s", "t")]).unwrap();
        let q = CutQuery::between(g.node("s").unwrap(), g.node("t").unwrap());
        assert_eq!(g.edge_cut_value(&q), CutValue::Finite(2));
        assert!(g.one_edge_cuts(&q).is_empty());
        assert_eq!(g.kernel_pairs().len(), 0);
    }

    #[test]
    fn most_upstream_examples() {
        let p = path3();
        let set: EdgeSet = ids(&p, &["e2", "e3"]).into_iter().collect();
        assert_eq!(p.most_upstream(&set), ids(&p, &["e2"]));
        let d = diamond();
        let set: EdgeSet = ids(&d, &["e1", "e2"]).into_iter().collect();
        assert_eq!(d.most_upstream(&set), ids(&d, &["e1", "e2"]));
        assert!(d.most_upstream(&EdgeSet::new()).is_empty());
    }

    #[test]
    fn line_graph_examples() {
        let single = Dag::new(["s", "t"], [("e1", "s", "t")]).unwrap();
        let lg = single.line_graph();
        assert_eq!((lg.node_count(), lg.edge_count()), (1, 0));

        let two = Dag::new(["s", "a", "t"], [("e1", "s", "a"), ("e2", "a", "t")]).unwrap();
        let lg = two.line_graph();
        assert_eq!((lg.node_count(), lg.edge_count()), (2, 1));

        let lg = diamond().line_graph();
        assert_eq!((lg.node_count(), lg.edge_count()), (4, 2));
        let arcs: BTreeSet<(String, String)> = lg
            .edges()
            .map(|e| {
                (
                    lg.node_name(lg.tail(e)).to_string(),
                    lg.node_name(lg.head(e)).to_string(),
                )
            })
            .collect();
        assert!(arcs.contains(&("e1".into(), "e3".into())));
        assert!(arcs.contains(&("e2".into(), "e4".into())));
    }

    #[test]
    fn delete_edges_examples() {
        let p = path3();
        let all: EdgeSet = p.edges().collect();
        let bare = p.delete_edges(&all);
        assert_eq!((bare.node_count(), bare.edge_count()), (4, 0));
        assert_eq!(p.delete_edges(&EdgeSet::new()), p);
        let cut = p.delete_edges(&[p.edge("e2").unwrap()].into_iter().collect());
        assert!(!cut.node_reaches(cut.node("s").unwrap(), cut.node("t").unwrap()));
        assert!(cut.edge("e3").is_some());
    }

    #[test]
    fn gain_segments_cases() {
        let p = path3();
        let e = ids(&p, &["e1", "e2", "e3"]);
        assert_eq!(
            p.gain_segments(e[0], e[2]).unwrap(),
            GainSegments::Segments(vec![(e[0], e[1]), (e[1], e[2])])
        );
        assert_eq!(p.gain_segments(e[2], e[0]).unwrap(), GainSegments::Zero);

        let g = Dag::new(
            ["u", "s", "a", "b", "t", "v"],
            [
                ("in", "u", "s"),
                ("e1", "s", "a"),
                ("e2", "s", "b"),
                ("e3", "a", "t"),
                ("e4", "b", "t"),
                ("out", "t", "v"),
            ],
        )
        .unwrap();
        let (i, o) = (g.edge("in").unwrap(), g.edge("out").unwrap());
        assert_eq!(
            g.gain_segments(i, o).unwrap(),
            GainSegments::Segments(vec![(i, o)])
        );
    }

    #[test]
    fn longest_path() {
        assert_eq!(path3().longest_path_edges(), 3);
        assert_eq!(diamond().longest_path_edges(), 2);
    }
}
