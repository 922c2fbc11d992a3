//! Numeric channel gains at concrete kernel assignments.
//!
//! A kernel assignment fixes a field value for every adjacent edge pair
//! `(e', e'')` (indexed as in [`Dag::kernel_pairs`]) in each of `τ` time
//! slots. Gains are computed by a forward pass in topological order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ana::AnaNetwork;
use crate::dag::{Dag, EdgeId, NodeId};
use crate::field::{Fp, PrimeField};
use crate::matrix::FqMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("slot {slot} out of range for an assignment with {slots} slots")]
    SlotOutOfRange { slot: usize, slots: usize },
}

/// Per-slot values of the local kernels, indexed by kernel pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelAssignment {
    field: PrimeField,
    slots: Vec<Vec<Fp>>,
}

impl KernelAssignment {
    /// Independent uniform draws for every kernel in every slot, all taken
    /// from one ChaCha stream seeded by `seed`, slot by slot.
    pub fn random(dag: &Dag, field: PrimeField, slots: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(dag, field, slots, &mut rng)
    }

    pub fn random_with<R: rand::Rng + ?Sized>(
        dag: &Dag,
        field: PrimeField,
        slots: usize,
        rng: &mut R,
    ) -> Self {
        let k = dag.kernel_pairs().len();
        let slots = (0..slots)
            .map(|_| (0..k).map(|_| field.sample(rng)).collect())
            .collect();
        Self { field, slots }
    }

    /// Panics if the slots have different lengths.
    pub fn from_slots(field: PrimeField, slots: Vec<Vec<Fp>>) -> Self {
        if let Some(first) = slots.first() {
            assert!(slots.iter().all(|s| s.len() == first.len()), "ragged slots");
        }
        Self { field, slots }
    }

    /// The same point repeated in every slot.
    pub fn replicated(field: PrimeField, point: Vec<Fp>, slots: usize) -> Self {
        Self {
            field,
            slots: vec![point; slots],
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, t: usize) -> Result<&[Fp], ChannelError> {
        self.slots
            .get(t)
            .map(Vec::as_slice)
            .ok_or(ChannelError::SlotOutOfRange {
                slot: t,
                slots: self.slots.len(),
            })
    }
}

/// Gains `m_{f;e1}` from `e1` to every edge `f`, indexed by edge id, at one
/// kernel point.
pub fn gains_at(dag: &Dag, point: &[Fp], field: PrimeField, e1: EdgeId) -> Vec<Fp> {
    let mut g = vec![field.zero(); dag.edge_count()];
    g[e1.index()] = field.one();
    for &f in &dag.topo_order()[dag.topo_rank(e1) + 1..] {
        let mut acc = field.zero();
        for &(e, k) in dag.pairs_into(f) {
            let ge = g[e.index()];
            if !ge.is_zero() {
                acc += ge * point[k];
            }
        }
        g[f.index()] = acc;
    }
    g
}

pub fn gains_from(
    dag: &Dag,
    asg: &KernelAssignment,
    slot: usize,
    e1: EdgeId,
) -> Result<Vec<Fp>, ChannelError> {
    check_edge(dag, e1)?;
    Ok(gains_at(dag, asg.slot(slot)?, asg.field, e1))
}

/// The channel gain `m_{e2;e1}` in slot `slot`: 1 when the edges coincide,
/// 0 when `e2` is not downstream of `e1`.
pub fn channel_gain(
    dag: &Dag,
    asg: &KernelAssignment,
    slot: usize,
    e1: EdgeId,
    e2: EdgeId,
) -> Result<Fp, ChannelError> {
    check_edge(dag, e2)?;
    Ok(gains_from(dag, asg, slot, e1)?[e2.index()])
}

/// The `|In(v)| × |Out(u)|` matrix whose `(i, j)` entry is the gain from the
/// `j`-th outgoing edge of `u` to the `i`-th incoming edge of `v`.
pub fn node_channel_matrix(
    dag: &Dag,
    asg: &KernelAssignment,
    slot: usize,
    u: NodeId,
    v: NodeId,
) -> Result<FqMatrix, ChannelError> {
    let point = asg.slot(slot)?;
    let cols: Vec<Vec<Fp>> = dag
        .out_edges(u)
        .iter()
        .map(|&e| gains_at(dag, point, asg.field, e))
        .collect();
    let ins = dag.in_edges(v);
    Ok(FqMatrix::from_fn(
        asg.field,
        ins.len(),
        cols.len(),
        |i, j| cols[j][ins[i].index()],
    ))
}

/// The nine session gains at one point; `get(j, i)` is the gain from source
/// `i` to destination `j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionGains {
    m: [[Fp; 3]; 3],
}

impl SessionGains {
    pub fn new(m: [[Fp; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn get(&self, j: usize, i: usize) -> Fp {
        self.m[j][i]
    }

    /// `m31·m23·m12`.
    pub fn alpha(&self) -> Fp {
        self.m[2][0] * self.m[1][2] * self.m[0][1]
    }

    /// `m21·m32·m13`.
    pub fn beta(&self) -> Fp {
        self.m[1][0] * self.m[2][1] * self.m[0][2]
    }
}

pub fn session_gains_at(net: &AnaNetwork, point: &[Fp], field: PrimeField) -> SessionGains {
    let mut m = [[field.zero(); 3]; 3];
    for i in 0..3 {
        let g = gains_at(net.dag(), point, field, net.source_edge(i));
        for (j, row) in m.iter_mut().enumerate() {
            row[i] = g[net.destination_edge(j).index()];
        }
    }
    SessionGains { m }
}

pub fn session_gains(
    net: &AnaNetwork,
    asg: &KernelAssignment,
    slot: usize,
) -> Result<SessionGains, ChannelError> {
    Ok(session_gains_at(net, asg.slot(slot)?, asg.field))
}

/// Session gains for every slot of the assignment.
pub fn session_gains_all(net: &AnaNetwork, asg: &KernelAssignment) -> Vec<SessionGains> {
    asg.slots
        .iter()
        .map(|p| session_gains_at(net, p, asg.field))
        .collect()
}

/// The `τ × τ` diagonal matrix of per-slot gains `m_{j,i}`.
pub fn block_diag_channel(
    net: &AnaNetwork,
    asg: &KernelAssignment,
    i: usize,
    j: usize,
) -> FqMatrix {
    let diag: Vec<Fp> = session_gains_all(net, asg)
        .iter()
        .map(|g| g.get(j, i))
        .collect();
    FqMatrix::diagonal(asg.field, &diag)
}

fn check_edge(dag: &Dag, e: EdgeId) -> Result<(), ChannelError> {
    if dag.contains_edge(e) {
        Ok(())
    } else {
        Err(ChannelError::UnknownEdge(e.index()))
    }
}
