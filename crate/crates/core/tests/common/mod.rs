#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use netalign::ana::AnaNetwork;
use netalign::dag::{CutQuery, CutValue, Dag, EdgeId, NodeId};
use netalign::generators::{gen_degenerate, gen_random_layered, GenKind, GenSpec};
use netalign::poly::{Monomial, SparsePoly};
use netalign::{Fp, PrimeField};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Edge lists over `n` nodes with every arc pointing from a lower to a
/// higher index; parallel arcs allowed.
pub fn arb_dag(max_nodes: usize, max_edges: usize) -> impl Strategy<Value = Dag> {
    (2..=max_nodes).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges).prop_map(move |pairs| {
            let edges: Vec<(String, String, String)> = pairs
                .into_iter()
                .filter(|(a, b)| a != b)
                .enumerate()
                .map(|(k, (a, b))| {
                    (
                        format!("e{k}"),
                        format!("v{}", a.min(b)),
                        format!("v{}", a.max(b)),
                    )
                })
                .collect();
            Dag::new((0..n).map(|v| format!("v{v}")), edges).unwrap()
        })
    })
}

/// Plain DFS over edges not in `removed`.
pub fn reaches(dag: &Dag, removed: &[bool], sources: &[NodeId], sinks: &[NodeId]) -> bool {
    let mut seen = vec![false; dag.node_count()];
    let mut stack: Vec<NodeId> = sources.to_vec();
    while let Some(u) = stack.pop() {
        if std::mem::replace(&mut seen[u.index()], true) {
            continue;
        }
        for &e in dag.out_edges(u) {
            if !removed[e.index()] {
                stack.push(dag.head(e));
            }
        }
    }
    sinks.iter().any(|w| seen[w.index()])
}

/// Minimum cut by trying every edge subset in order of size.
pub fn brute_min_cut(dag: &Dag, sources: &[NodeId], sinks: &[NodeId]) -> CutValue {
    if sources.iter().any(|s| sinks.contains(s)) {
        return CutValue::Infinite;
    }
    let m = dag.edge_count();
    let mut best = m;
    for mask in 0u32..(1 << m) {
        let k = mask.count_ones() as usize;
        if k >= best {
            continue;
        }
        let removed: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
        if !reaches(dag, &removed, sources, sinks) {
            best = k;
        }
    }
    CutValue::Finite(best)
}

pub fn query(sources: &[NodeId], sinks: &[NodeId]) -> CutQuery {
    CutQuery::new(sources.iter().copied(), sinks.iter().copied())
}

fn pair_index(dag: &Dag) -> HashMap<(EdgeId, EdgeId), u32> {
    dag.kernel_pairs()
        .iter()
        .enumerate()
        .map(|(k, &p)| (p, k as u32))
        .collect()
}

/// Every path from `e1` to `e2` as the list of kernel variables it uses.
pub fn paths(dag: &Dag, e1: EdgeId, e2: EdgeId) -> Vec<Vec<u32>> {
    fn walk(
        dag: &Dag,
        idx: &HashMap<(EdgeId, EdgeId), u32>,
        e: EdgeId,
        target: EdgeId,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if e == target {
            out.push(cur.clone());
            return;
        }
        for &f in dag.out_edges(dag.head(e)) {
            cur.push(idx[&(e, f)]);
            walk(dag, idx, f, target, cur, out);
            cur.pop();
        }
    }
    let idx = pair_index(dag);
    let mut out = Vec::new();
    walk(dag, &idx, e1, e2, &mut Vec::new(), &mut out);
    out
}

/// The gain polynomial built monomial by monomial from path enumeration.
pub fn path_gain(dag: &Dag, e1: EdgeId, e2: EdgeId) -> SparsePoly {
    let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    for p in paths(dag, e1, e2) {
        let mono = Monomial::from_pairs(p.into_iter().map(|v| (v, 1)));
        *terms.entry(mono).or_default() += 1;
    }
    SparsePoly::from_terms(terms)
}

pub fn path_gain_at(dag: &Dag, e1: EdgeId, e2: EdgeId, point: &[Fp], field: PrimeField) -> Fp {
    paths(dag, e1, e2).iter().fold(field.zero(), |acc, p| {
        acc + p.iter().fold(field.one(), |x, &v| x * point[v as usize])
    })
}

/// Seeded mix of random layered networks over a range of shapes plus a few
/// degenerate constructions.
pub fn corpus(count: usize, seed: u64) -> Vec<AnaNetwork> {
    (0..count as u64)
        .map(|k| {
            let s = seed.wrapping_add(k);
            if k % 10 == 9 {
                gen_degenerate(s)
            } else {
                let spec = GenSpec {
                    kind: GenKind::RandomLayered,
                    layers: 2 + (k % 4) as usize,
                    width: 1 + (k / 4 % 3) as usize,
                    seed: s,
                };
                gen_random_layered(&spec).unwrap()
            }
        })
        .collect()
}
