mod common;

use std::collections::{BTreeSet, HashMap};

use common::{arb_dag, path_gain, path_gain_at};
use netalign::channel::{channel_gain, KernelAssignment};
use netalign::dag::{CutQuery, Dag, EdgeId, EdgeSet};
use netalign::poly::{equivalent, symbolic_channel_gain, DEFAULT_BUDGET};
use netalign::{Fp, PrimeField};
use proptest::prelude::*;

fn edge_pairs(dag: &Dag) -> Vec<(EdgeId, EdgeId)> {
    let edges: Vec<EdgeId> = dag.edges().collect();
    edges
        .iter()
        .flat_map(|&a| edges.iter().map(move |&b| (a, b)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn numeric_symbolic_and_path_gains_agree(dag in arb_dag(6, 8), seed in any::<u64>()) {
        let f = PrimeField::default();
        let asg = KernelAssignment::random(&dag, f, 5, seed);
        for (a, b) in edge_pairs(&dag) {
            let sym = symbolic_channel_gain(&dag, a, b, DEFAULT_BUDGET).unwrap();
            if a != b {
                prop_assert_eq!(&sym, &path_gain(&dag, a, b));
            }
            for t in 0..5 {
                let x = asg.slot(t).unwrap();
                let g = channel_gain(&dag, &asg, t, a, b).unwrap();
                prop_assert_eq!(g, sym.evaluate(f, x));
                if a != b {
                    prop_assert_eq!(g, path_gain_at(&dag, a, b, x, f));
                }
            }
        }
    }

    #[test]
    fn gains_multiply_across_unique_cut(dag in arb_dag(6, 8), seed in any::<u64>()) {
        let f = PrimeField::default();
        let asg = KernelAssignment::random(&dag, f, 1, seed);
        for (a, b) in edge_pairs(&dag) {
            if !dag.precedes(a, b) {
                continue;
            }
            let cuts = dag.one_edge_cuts(&CutQuery::between(dag.head(a), dag.tail(b)));
            for &e in &cuts {
                let g = |x, y| channel_gain(&dag, &asg, 0, x, y).unwrap();
                prop_assert_eq!(g(a, b), g(a, e) * g(e, b));
            }
        }
    }

    #[test]
    fn gains_are_multilinear(dag in arb_dag(6, 8), seed in any::<u64>()) {
        let f = PrimeField::default();
        let base = KernelAssignment::random(&dag, f, 3, seed);
        let p0 = base.slot(0).unwrap().to_vec();
        for v in 0..p0.len() {
            let probe = |x: Fp| {
                let mut p = p0.clone();
                p[v] = x;
                KernelAssignment::from_slots(f, vec![p])
            };
            let (x1, x2) = (base.slot(1).unwrap()[v], base.slot(2).unwrap()[v]);
            let (a0, a1, a2) = (probe(f.zero()), probe(x1), probe(x2));
            for (a, b) in edge_pairs(&dag) {
                let g = |asg: &KernelAssignment| channel_gain(&dag, asg, 0, a, b).unwrap();
                // A degree-one polynomial in x_v: g(x) = g(0) + x·slope.
                let (g0, g1, g2) = (g(&a0), g(&a1), g(&a2));
                prop_assert_eq!((g1 - g0) * x2, (g2 - g0) * x1);
            }
        }
    }

    #[test]
    fn equivalence_survives_subgraphs(dag in arb_dag(6, 8), mask in any::<u16>()) {
        let edges: Vec<EdgeId> = dag.edges().collect();
        let removed: EdgeSet = edges.iter().copied().filter(|e| mask >> (e.index() % 16) & 1 == 1).collect();
        let sub = dag.delete_edges(&removed);
        let kept: BTreeSet<u32> = dag
            .kernel_pairs()
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| !removed.contains(a) && !removed.contains(b))
            .map(|(k, _)| k as u32)
            .collect();
        let sub_index: HashMap<(&str, &str), u32> = sub
            .kernel_pairs()
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| ((sub.edge_name(a), sub.edge_name(b)), k as u32))
            .collect();
        let rename = |v: u32| {
            let (a, b) = dag.kernel_pairs()[v as usize];
            sub_index.get(&(dag.edge_name(a), dag.edge_name(b))).copied()
        };
        let gains: Vec<_> = edge_pairs(&dag)
            .into_iter()
            .filter(|&(a, b)| a != b && !removed.contains(&a) && !removed.contains(&b))
            .map(|(a, b)| {
                let full = symbolic_channel_gain(&dag, a, b, DEFAULT_BUDGET).unwrap();
                let (sa, sb) = (sub.edge(dag.edge_name(a)).unwrap(), sub.edge(dag.edge_name(b)).unwrap());
                let on_sub = symbolic_channel_gain(&sub, sa, sb, DEFAULT_BUDGET).unwrap();
                (full, on_sub)
            })
            .collect();
        for (full, on_sub) in &gains {
            prop_assert_eq!(&full.restrict(&kept).map_vars(rename), on_sub);
        }
        let products: Vec<_> = gains
            .iter()
            .take(6)
            .flat_map(|(g, _)| gains.iter().take(6).map(move |(h, _)| g * h))
            .collect();
        for f1 in &products {
            for f2 in &products {
                if equivalent(f1, f2).is_some() {
                    prop_assert!(equivalent(&f1.restrict(&kept), &f2.restrict(&kept)).is_some());
                }
            }
        }
    }
}
