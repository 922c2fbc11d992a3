//! Structural properties of the shared-cut sets that every network must
//! satisfy. A failure indicates a bug in the cut computations.

use serde::Serialize;

use super::cuts::{cut_sets, CutSets};
use super::{others, AnaNetwork};
use crate::dag::{Dag, EdgeId, EdgeRelation, EdgeSet, GainSegments};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaResult {
    pub lemma: String,
    /// `None` when the check was skipped.
    pub holds: Option<bool>,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub description: String,
    pub edges: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub results: Vec<LemmaResult>,
}

impl LemmaReport {
    /// No check failed (skipped checks count as passing).
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.holds != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &LemmaResult> {
        self.results.iter().filter(|r| r.holds == Some(false))
    }
}

struct Checker<'a> {
    dag: &'a Dag,
    cs: CutSets,
}

type Check = Result<(), Counterexample>;

fn fail(dag: &Dag, description: String, edges: &[EdgeId]) -> Check {
    Err(Counterexample {
        description,
        edges: dag.edge_names(edges),
    })
}

fn inter(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.intersection(b).copied().collect()
}

/// Index triples `(i, j, k)` that are a permutation of `0, 1, 2`.
fn perms() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..3).flat_map(|i| {
        let (a, b) = others(i);
        [(i, a, b), (i, b, a)]
    })
}

fn distinct_pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..3).flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
}

impl Checker<'_> {
    fn rel(&self, a: EdgeId, b: EdgeId) -> EdgeRelation {
        self.dag
            .edge_relation(a, b)
            .expect("edges belong to the graph")
    }

    fn s(&self, i: usize) -> &EdgeSet {
        self.cs.s_bar(i)
    }

    fn d(&self, j: usize) -> &EdgeSet {
        self.cs.d_bar(j)
    }

    fn l1(&self) -> Check {
        for (i, j) in distinct_pairs() {
            for &a in self.s(i) {
                for &b in self.d(j) {
                    if self.rel(a, b) == EdgeRelation::Unreachable {
                        return fail(
                            self.dag,
                            format!("S{} and D{} edges are incomparable", i + 1, j + 1),
                            &[a, b],
                        );
                    }
                }
            }
        }
        Ok(())
    }

    fn l2(&self) -> Check {
        for (k, i, j) in perms() {
            for &e in &inter(self.d(i), self.d(j)) {
                if !self.s(k).contains(&e) {
                    return fail(
                        self.dag,
                        format!("edge of D{}∩D{} missing from S{}", i + 1, j + 1, k + 1),
                        &[e],
                    );
                }
            }
            for &e in &inter(self.s(i), self.s(j)) {
                if !self.d(k).contains(&e) {
                    return fail(
                        self.dag,
                        format!("edge of S{}∩S{} missing from D{}", i + 1, j + 1, k + 1),
                        &[e],
                    );
                }
            }
        }
        Ok(())
    }

    fn l3(&self) -> Check {
        for (i, j) in distinct_pairs() {
            for &a in self.s(i).difference(self.d(j)) {
                for &b in self.d(j) {
                    if self.rel(a, b) != EdgeRelation::Upstream {
                        return fail(
                            self.dag,
                            format!("edge of S{}\\D{} not upstream of D{}", i + 1, j + 1, j + 1),
                            &[a, b],
                        );
                    }
                }
            }
            for &a in self.d(i).difference(self.s(j)) {
                for &b in self.s(j) {
                    if self.rel(a, b) != EdgeRelation::Downstream {
                        return fail(
                            self.dag,
                            format!(
                                "edge of D{}\\S{} not downstream of S{}",
                                i + 1,
                                j + 1,
                                j + 1
                            ),
                            &[a, b],
                        );
                    }
                }
            }
        }
        Ok(())
    }

    fn l4(&self) -> Check {
        for (i, j, k) in perms() {
            let left = !inter(self.d(j), self.d(k)).is_empty();
            let right =
                !inter(self.s(i), self.d(j)).is_empty() && !inter(self.s(i), self.d(k)).is_empty();
            if left != right {
                return fail(
                    self.dag,
                    format!(
                        "D{}∩D{} nonempty is {left} but S{} meets both is {right}",
                        j + 1,
                        k + 1,
                        i + 1
                    ),
                    &[],
                );
            }
            let left = !inter(self.s(j), self.s(k)).is_empty();
            let right =
                !inter(self.d(i), self.s(j)).is_empty() && !inter(self.d(i), self.s(k)).is_empty();
            if left != right {
                return fail(
                    self.dag,
                    format!(
                        "S{}∩S{} nonempty is {left} but D{} meets both is {right}",
                        j + 1,
                        k + 1,
                        i + 1
                    ),
                    &[],
                );
            }
        }
        Ok(())
    }

    fn l5(&self) -> Check {
        for (i, j) in distinct_pairs() {
            let ss = inter(self.s(i), self.s(j));
            let dd = inter(self.d(i), self.d(j));
            if ss.is_empty() || dd.is_empty() {
                continue;
            }
            for &b in &dd {
                let ok = ss.iter().any(|&a| {
                    matches!(self.rel(a, b), EdgeRelation::Upstream | EdgeRelation::Equal)
                });
                if !ok {
                    return fail(
                        self.dag,
                        format!(
                            "no edge of S{}∩S{} at or upstream of this D-edge",
                            i + 1,
                            j + 1
                        ),
                        &[b],
                    );
                }
            }
            for &b in &ss {
                let ok = dd.iter().any(|&a| {
                    matches!(
                        self.rel(a, b),
                        EdgeRelation::Downstream | EdgeRelation::Equal
                    )
                });
                if !ok {
                    return fail(
                        self.dag,
                        format!(
                            "no edge of D{}∩D{} at or downstream of this S-edge",
                            i + 1,
                            j + 1
                        ),
                        &[b],
                    );
                }
            }
        }
        Ok(())
    }

    fn l6_side(&self, select: fn(&CutSets, usize, usize, usize) -> &EdgeSet, tag: char) -> Check {
        let pair = |i, j, k| select(&self.cs, i, j, k);
        for i in 0..3 {
            for j1 in 0..3 {
                let (j2, j3) = others(j1);
                let a = pair(i, j1, j2);
                let b = pair(i, j1, j3);
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let label = |x: usize, y: usize| format!("{tag}{};{{{},{}}}", i + 1, x + 1, y + 1);
                let broken = if inter(a, b).is_empty() {
                    Some(format!(
                        "{} and {} are disjoint",
                        label(j1, j2),
                        label(j1, j3)
                    ))
                } else if pair(i, j2, j3).is_empty() {
                    Some(format!("{} is empty", label(j2, j3)))
                } else {
                    let (x, y) = others(i);
                    pair(i, x, y)
                        .is_empty()
                        .then(|| format!("{} is empty", label(x, y)))
                };
                if let Some(msg) = broken {
                    let mut edges: Vec<EdgeId> = a.union(b).copied().collect();
                    edges.sort_by_key(|&e| self.dag.topo_rank(e));
                    return fail(self.dag, msg, &edges);
                }
            }
        }
        Ok(())
    }

    fn l6(&self) -> Check {
        self.l6_side(CutSets::s_pair, 'S')?;
        self.l6_side(CutSets::d_pair, 'D')
    }

    /// `S̄_{i;{j1,j2}}` is exactly the set of interior factor boundaries
    /// shared by `m_{j1,i}` and `m_{j2,i}`, and dually for `D̄`.
    fn l7(&self, net: &AnaNetwork) -> Check {
        let interior = |e_s: EdgeId, e_d: EdgeId| -> EdgeSet {
            match self
                .dag
                .gain_segments(e_s, e_d)
                .expect("edges belong to the graph")
            {
                GainSegments::Zero => EdgeSet::new(),
                GainSegments::Segments(segs) => {
                    segs.iter().map(|&(_, b)| b).filter(|&b| b != e_d).collect()
                }
            }
        };
        for i in 0..3 {
            for j1 in 0..3 {
                for j2 in j1 + 1..3 {
                    let s = inter(
                        &interior(net.source_edge(i), net.destination_edge(j1)),
                        &interior(net.source_edge(i), net.destination_edge(j2)),
                    );
                    if &s != self.cs.s_pair(i, j1, j2) {
                        return fail(
                            self.dag,
                            format!(
                                "shared boundaries of m{}{} and m{}{} differ from S{};{{{},{}}}",
                                j1 + 1,
                                i + 1,
                                j2 + 1,
                                i + 1,
                                i + 1,
                                j1 + 1,
                                j2 + 1
                            ),
                            &s.symmetric_difference(self.cs.s_pair(i, j1, j2))
                                .copied()
                                .collect::<Vec<_>>(),
                        );
                    }
                    let d = inter(
                        &interior(net.source_edge(j1), net.destination_edge(i)),
                        &interior(net.source_edge(j2), net.destination_edge(i)),
                    );
                    if &d != self.cs.d_pair(i, j1, j2) {
                        return fail(
                            self.dag,
                            format!(
                                "shared boundaries of m{}{} and m{}{} differ from D{};{{{},{}}}",
                                i + 1,
                                j1 + 1,
                                i + 1,
                                j2 + 1,
                                i + 1,
                                j1 + 1,
                                j2 + 1
                            ),
                            &d.symmetric_difference(self.cs.d_pair(i, j1, j2))
                                .copied()
                                .collect::<Vec<_>>(),
                        );
                    }
                }
            }
        }
        Ok(())
    }

    fn l8(&self, alpha_beta_equiv: Option<bool>) -> Option<Check> {
        let equiv = alpha_beta_equiv?;
        let empty = (0..3)
            .map(|i| (format!("S{}", i + 1), self.s(i)))
            .chain((0..3).map(|j| (format!("D{}", j + 1), self.d(j))))
            .find(|(_, set)| set.is_empty());
        Some(match (equiv, empty) {
            (true, Some((name, _))) => {
                fail(self.dag, format!("α ≐ β reported but {name} is empty"), &[])
            }
            _ => Ok(()),
        })
    }
}

/// Checks every lemma and its source/destination swapped version. The last
/// lemma needs an external verdict on `α ≐ β` and is skipped without one.
pub fn verify_structural_lemmas(net: &AnaNetwork, alpha_beta_equiv: Option<bool>) -> LemmaReport {
    let c = Checker {
        dag: net.dag(),
        cs: cut_sets(net),
    };
    let result = |lemma: &str, check: Option<Check>| LemmaResult {
        lemma: lemma.to_string(),
        holds: check.as_ref().map(Result::is_ok),
        counterexample: check.and_then(Result::err),
    };
    LemmaReport {
        results: vec![
            result("L1", Some(c.l1())),
            result("L2", Some(c.l2())),
            result("L3", Some(c.l3())),
            result("L4", Some(c.l4())),
            result("L5", Some(c.l5())),
            result("L6", Some(c.l6())),
            result("L7", Some(c.l7(net))),
            result("L8", c.l8(alpha_beta_equiv)),
        ],
    }
}
