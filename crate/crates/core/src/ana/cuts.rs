//! Shared 1-edge cuts `S̄_{i;{j,k}}` and `D̄_{i;{j,k}}`.

use serde::Serialize;

use super::{others, AnaNetwork};
use crate::dag::{CutQuery, Dag, EdgeSet};

/// All shared-cut sets of a network. A pair `{j, k}` of distinct sessions
/// is addressed by the session it leaves out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSets {
    one_cut: [[EdgeSet; 3]; 3],
    s_pair: [[EdgeSet; 3]; 3],
    d_pair: [[EdgeSet; 3]; 3],
}

fn missing(j: usize, k: usize) -> usize {
    assert!(
        j != k && j < 3 && k < 3,
        "need two distinct sessions, got {j} and {k}"
    );
    3 - j - k
}

pub fn cut_sets(net: &AnaNetwork) -> CutSets {
    let dag = net.dag();
    let mut one_cut: [[EdgeSet; 3]; 3] = Default::default();
    for (i, row) in one_cut.iter_mut().enumerate() {
        for (j, set) in row.iter_mut().enumerate() {
            let q = CutQuery::between(net.source(i), net.destination(j));
            *set = dag.one_edge_cuts(&q).into_iter().collect();
        }
    }
    let mut s_pair: [[EdgeSet; 3]; 3] = Default::default();
    let mut d_pair: [[EdgeSet; 3]; 3] = Default::default();
    for i in 0..3 {
        for m in 0..3 {
            let (j, k) = others(m);
            let mut s: EdgeSet = one_cut[i][j]
                .intersection(&one_cut[i][k])
                .copied()
                .collect();
            s.remove(&net.source_edge(i));
            s_pair[i][m] = s;
            let mut d: EdgeSet = one_cut[j][i]
                .intersection(&one_cut[k][i])
                .copied()
                .collect();
            d.remove(&net.destination_edge(i));
            d_pair[i][m] = d;
        }
    }
    CutSets {
        one_cut,
        s_pair,
        d_pair,
    }
}

impl CutSets {
    /// `1cut(s_i; d_j)`.
    pub fn one_cut(&self, i: usize, j: usize) -> &EdgeSet {
        &self.one_cut[i][j]
    }

    /// `S̄_{i;{j,k}}`.
    pub fn s_pair(&self, i: usize, j: usize, k: usize) -> &EdgeSet {
        &self.s_pair[i][missing(j, k)]
    }

    /// `D̄_{i;{j,k}}`.
    pub fn d_pair(&self, i: usize, j: usize, k: usize) -> &EdgeSet {
        &self.d_pair[i][missing(j, k)]
    }

    /// `S̄_i`: shared cuts from `s_i` to the other two destinations.
    pub fn s_bar(&self, i: usize) -> &EdgeSet {
        &self.s_pair[i][i]
    }

    /// `D̄_j`: shared cuts from the other two sources into `d_j`.
    pub fn d_bar(&self, j: usize) -> &EdgeSet {
        &self.d_pair[j][j]
    }

    pub fn report(&self, dag: &Dag) -> CutSetsReport {
        let names = |s: &EdgeSet| dag.edge_names(&dag.sorted(s));
        let pair_map = |sets: &[[EdgeSet; 3]; 3], tag: char| {
            let mut out = Vec::new();
            for (i, row) in sets.iter().enumerate() {
                for (m, set) in row.iter().enumerate() {
                    let (j, k) = others(m);
                    out.push(NamedSet {
                        label: format!("{tag}{};{{{},{}}}", i + 1, j + 1, k + 1),
                        edges: names(set),
                    });
                }
            }
            out
        };
        CutSetsReport {
            s_bar: (0..3).map(|i| names(self.s_bar(i))).collect(),
            d_bar: (0..3).map(|j| names(self.d_bar(j))).collect(),
            s_pairs: pair_map(&self.s_pair, 'S'),
            d_pairs: pair_map(&self.d_pair, 'D'),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedSet {
    pub label: String,
    pub edges: Vec<String>,
}

/// Cut sets by edge name, each list in topological order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutSetsReport {
    pub s_bar: Vec<Vec<String>>,
    pub d_bar: Vec<Vec<String>>,
    pub s_pairs: Vec<NamedSet>,
    pub d_pairs: Vec<NamedSet>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ana::fixtures;

    #[test]
    fn shared_chain_cut_sets_are_the_chain() {
        let net = fixtures::shared_chain();
        let cs = cut_sets(&net);
        let d = net.dag();
        let chain: EdgeSet = ["x1", "x2", "x3"]
            .iter()
            .map(|n| d.edge(n).unwrap())
            .collect();
        for i in 0..3 {
            assert_eq!(cs.s_bar(i), &chain);
            assert_eq!(cs.d_bar(i), &chain);
        }
        let mut with_ed1 = chain.clone();
        with_ed1.insert(d.edge("ed1").unwrap());
        // Session 1 pair {1, 2}: both destination edges differ, so the chain.
        assert_eq!(cs.s_pair(0, 0, 1), &chain);
        assert_eq!(cs.one_cut(0, 0).len(), 5);
        assert!(cs.one_cut(0, 0).is_superset(&with_ed1));
    }

    #[test]
    fn disjoint_paths_give_empty_s_bar() {
        // s1 reaches d2 and d3 along edge-disjoint routes.
        let net = fixtures::build(
            &[
                "s1", "s2", "s3", "u", "a", "b", "c", "D2", "D3", "d1", "d2", "d3",
            ],
            &[
                ("es1", "s1", "u"),
                ("es2", "s2", "a"),
                ("es3", "s3", "b"),
                ("u1", "u", "a"),
                ("u2", "u", "b"),
                ("a1", "a", "c"),
                ("b1", "b", "c"),
                ("a2", "a", "D2"),
                ("b2", "b", "D3"),
                ("c2", "c", "D2"),
                ("c3", "c", "D3"),
                ("ed1", "c", "d1"),
                ("ed2", "D2", "d2"),
                ("ed3", "D3", "d3"),
            ],
        );
        let cs = cut_sets(&net);
        assert!(cs.s_bar(0).is_empty());
        let rep = cs.report(net.dag());
        assert_eq!(rep.s_pairs.len(), 9);
        assert_eq!(rep.s_pairs[0].label, "S1;{2,3}");
    }
}
