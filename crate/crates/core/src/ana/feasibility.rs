//! Graph-theoretic feasibility conditions of the alignment scheme.
//!
//! Condition labels: `gtc1` is the pairwise separation condition, `gtc2`,
//! `gtc3`, `gtc4` the cross-cut conditions of sessions 1, 2, 3, and
//! `gtc2a`, `gtc3a`, `gtc4a` the matching removal conditions.

use serde::Serialize;

use super::cuts::{cut_sets, CutSets, CutSetsReport};
use super::{others, AnaNetwork};
use crate::dag::{CutQuery, CutValue, EdgeSet};

/// Two sessions (1-based) whose shared source cuts and shared destination
/// cuts both intersect, with the topologically first edge of each
/// intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub i: usize,
    pub j: usize,
    pub s_edge: String,
    pub d_edge: String,
}

/// Whether `α ≐ β` holds, decided from the cut structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Degeneracy {
    pub degenerate: bool,
    pub witness: Option<PairViolation>,
}

fn pair_violations(net: &AnaNetwork, cs: &CutSets) -> Vec<PairViolation> {
    let dag = net.dag();
    let mut out = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let s: EdgeSet = cs.s_bar(i).intersection(cs.s_bar(j)).copied().collect();
            let d: EdgeSet = cs.d_bar(i).intersection(cs.d_bar(j)).copied().collect();
            if let (Some(&se), Some(&de)) = (dag.sorted(&s).first(), dag.sorted(&d).first()) {
                out.push(PairViolation {
                    i: i + 1,
                    j: j + 1,
                    s_edge: dag.edge_name(se).to_string(),
                    d_edge: dag.edge_name(de).to_string(),
                });
            }
        }
    }
    out
}

/// Degenerate iff some pair `i ≠ j` has `S̄_i ∩ S̄_j ≠ ∅` and
/// `D̄_i ∩ D̄_j ≠ ∅`.
pub fn prop4_degenerate(net: &AnaNetwork) -> Degeneracy {
    degeneracy_from(net, &cut_sets(net))
}

fn degeneracy_from(net: &AnaNetwork, cs: &CutSets) -> Degeneracy {
    let witness = pair_violations(net, cs).into_iter().next();
    Degeneracy {
        degenerate: witness.is_some(),
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cor1Verdict {
    CutIsOne,
    CutGeqTwo,
}

/// `EC({s_i1, s_i2}; {d_j1, d_j2})` with 0-based indices. A cut of one means
/// `m_{j1,i1}·m_{j2,i2} ≐ m_{j1,i2}·m_{j2,i1}`.
pub fn cross_cut_value(net: &AnaNetwork, i1: usize, i2: usize, j1: usize, j2: usize) -> CutValue {
    assert!(i1 != i2 && j1 != j2, "indices must be pairwise distinct");
    let q = CutQuery::new(
        [net.source(i1), net.source(i2)],
        [net.destination(j1), net.destination(j2)],
    );
    net.dag().edge_cut_value(&q)
}

pub fn cor1_check(net: &AnaNetwork, i1: usize, i2: usize, j1: usize, j2: usize) -> Cor1Verdict {
    if cross_cut_value(net, i1, i2, j1, j2).at_least(2) {
        Cor1Verdict::CutGeqTwo
    } else {
        Cor1Verdict::CutIsOne
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationCondition {
    pub holds: bool,
    pub violations: Vec<PairViolation>,
}

/// One cross cut `EC({s_a, s_b}; {d_c, d_d})`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCut {
    pub sources: [usize; 2],
    pub destinations: [usize; 2],
    pub value: CutValue,
    pub verdict: Cor1Verdict,
}

impl CrossCut {
    fn compute(net: &AnaNetwork, i1: usize, i2: usize, j1: usize, j2: usize) -> Self {
        let value = cross_cut_value(net, i1, i2, j1, j2);
        CrossCut {
            sources: [i1 + 1, i2 + 1],
            destinations: [j1 + 1, j2 + 1],
            value,
            verdict: if value.at_least(2) {
                Cor1Verdict::CutGeqTwo
            } else {
                Cor1Verdict::CutIsOne
            },
        }
    }

    pub fn label(&self) -> String {
        format!(
            "EC({{s{},s{}}};{{d{},d{}}})",
            self.sources[0], self.sources[1], self.destinations[0], self.destinations[1]
        )
    }
}

/// Both cross cuts of session `k` are at least two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCutCondition {
    pub holds: bool,
    pub cuts: [CrossCut; 2],
}

/// `s_k` still reaches `d_k` after deleting the most upstream edges of
/// `(S̄_a ∩ D̄_b) ∪ (S̄_b ∩ D̄_a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovalCondition {
    pub holds: bool,
    pub removed: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Prop5Verdicts {
    /// `h1` independent for `n = 1`.
    pub h1: bool,
    /// The companion set of `h1` independent for `n = 1`.
    pub k1: bool,
    /// `h1` independent for every `n ≥ 2`.
    pub h2: bool,
    /// The companion set independent for every `n ≥ 2`.
    pub k2: bool,
}

/// Whether all three `S_i` reach full rank generically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemeFeasibility {
    pub n1: bool,
    pub n_ge_2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub degeneracy: Degeneracy,
    pub gtc1: SeparationCondition,
    pub gtc2: CrossCutCondition,
    pub gtc2a: RemovalCondition,
    pub gtc3: CrossCutCondition,
    pub gtc3a: RemovalCondition,
    pub gtc4: CrossCutCondition,
    pub gtc4a: RemovalCondition,
    pub prop5: Prop5Verdicts,
    pub scheme: SchemeFeasibility,
    /// All seven conditions hold.
    pub feasible: bool,
    pub cut_sets: CutSetsReport,
}

impl FeasibilityReport {
    /// The seven verdicts as `(label, holds)`.
    pub fn conditions(&self) -> [(&'static str, bool); 7] {
        [
            ("gtc1", self.gtc1.holds),
            ("gtc2", self.gtc2.holds),
            ("gtc2a", self.gtc2a.holds),
            ("gtc3", self.gtc3.holds),
            ("gtc3a", self.gtc3a.holds),
            ("gtc4", self.gtc4.holds),
            ("gtc4a", self.gtc4a.holds),
        ]
    }

    pub fn cross(&self, k: usize) -> &CrossCutCondition {
        [&self.gtc2, &self.gtc3, &self.gtc4][k]
    }

    pub fn removal(&self, k: usize) -> &RemovalCondition {
        [&self.gtc2a, &self.gtc3a, &self.gtc4a][k]
    }
}

fn cross_condition(net: &AnaNetwork, k: usize) -> CrossCutCondition {
    let (a, b) = others(k);
    let cuts = [
        CrossCut::compute(net, k, a, k, b),
        CrossCut::compute(net, k, b, k, a),
    ];
    CrossCutCondition {
        holds: cuts.iter().all(|c| c.verdict == Cor1Verdict::CutGeqTwo),
        cuts,
    }
}

fn removal_condition(net: &AnaNetwork, cs: &CutSets, k: usize) -> RemovalCondition {
    let (a, b) = others(k);
    let dag = net.dag();
    let mut union: EdgeSet = cs.s_bar(a).intersection(cs.d_bar(b)).copied().collect();
    union.extend(cs.s_bar(b).intersection(cs.d_bar(a)));
    let removed = dag.most_upstream(&union);
    let pruned = dag.delete_edges(&removed.iter().copied().collect());
    let s = pruned
        .node(dag.node_name(net.source(k)))
        .expect("nodes are kept");
    let d = pruned
        .node(dag.node_name(net.destination(k)))
        .expect("nodes are kept");
    RemovalCondition {
        holds: pruned.node_reaches(s, d),
        removed: dag.edge_names(&removed),
    }
}

/// Evaluates every condition with its witnesses.
pub fn gtc_feasibility(net: &AnaNetwork) -> FeasibilityReport {
    let cs = cut_sets(net);
    let violations = pair_violations(net, &cs);
    let gtc1 = SeparationCondition {
        holds: violations.is_empty(),
        violations,
    };
    let [gtc2, gtc3, gtc4] = [0, 1, 2].map(|k| cross_condition(net, k));
    let [gtc2a, gtc3a, gtc4a] = [0, 1, 2].map(|k| removal_condition(net, &cs, k));
    let h1 = gtc1.holds && gtc2.holds;
    let k1 = h1 && gtc2a.holds;
    let prop5 = Prop5Verdicts {
        h1,
        k1,
        h2: k1,
        k2: k1,
    };
    // S2 and S3 are the companion set after relabeling sessions 2 and 3
    // as session 1.
    let s2 = gtc1.holds && gtc3.holds && gtc3a.holds;
    let s3 = gtc1.holds && gtc4.holds && gtc4a.holds;
    let scheme = SchemeFeasibility {
        n1: h1 && s2 && s3,
        n_ge_2: k1 && s2 && s3,
    };
    FeasibilityReport {
        degeneracy: degeneracy_from(net, &cs),
        feasible: scheme.n_ge_2,
        gtc1,
        gtc2,
        gtc2a,
        gtc3,
        gtc3a,
        gtc4,
        gtc4a,
        prop5,
        scheme,
        cut_sets: cs.report(net.dag()),
    }
}
