//! Seeded network generators: degenerate (`α ≡ β`), fully feasible, and
//! random layered ANA networks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ana::{gtc_feasibility, validate_ana, AnaNetwork};
use crate::dag::Dag;

pub const MAX_ATTEMPTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Degenerate,
    Feasible,
    RandomLayered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub layers: usize,
    pub width: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: GenKind, seed: u64) -> Self {
        Self {
            kind,
            layers: 4,
            width: 3,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("layered generation needs layers >= 2 and width >= 1, got {layers} and {width}")]
    BadSize { layers: usize, width: usize },
    #[error("no acceptable {kind:?} network after {attempts} attempts")]
    GenerationFailed { kind: GenKind, attempts: usize },
}

pub fn generate(spec: &GenSpec) -> Result<AnaNetwork, GenError> {
    match spec.kind {
        GenKind::Degenerate => Ok(gen_degenerate(spec.seed)),
        GenKind::Feasible => gen_feasible_from(spec.layers, spec.width, spec.seed),
        GenKind::RandomLayered => gen_random_layered(spec),
    }
}

#[derive(Default)]
struct Builder {
    nodes: Vec<String>,
    edges: Vec<(String, String, String)>,
}

impl Builder {
    fn node(&mut self, name: impl Into<String>) -> String {
        let name = name.into();
        self.nodes.push(name.clone());
        name
    }

    fn fresh(&mut self) -> String {
        let n = format!("v{}", self.nodes.len());
        self.node(n)
    }

    fn edge(&mut self, id: impl Into<String>, tail: &str, head: &str) {
        self.edges.push((id.into(), tail.into(), head.into()));
    }

    fn anon(&mut self, tail: &str, head: &str) {
        let id = format!("g{}", self.edges.len());
        self.edge(id, tail, head);
    }

    /// Joins `u` to `v` by a random two-terminal gadget: a single edge, a
    /// chain, a diamond, or a parallel pair.
    fn gadget(&mut self, rng: &mut ChaCha8Rng, u: &str, v: &str) {
        match rng.gen_range(0..4) {
            0 => self.anon(u, v),
            1 => {
                let mut prev = u.to_string();
                for _ in 0..rng.gen_range(1..=3) {
                    let w = self.fresh();
                    self.anon(&prev, &w);
                    prev = w;
                }
                self.anon(&prev, v);
            }
            2 => {
                let (x, y) = (self.fresh(), self.fresh());
                self.anon(u, &x);
                self.anon(u, &y);
                self.anon(&x, v);
                self.anon(&y, v);
            }
            _ => {
                self.anon(u, v);
                self.anon(u, v);
            }
        }
    }

    fn finish(self) -> Option<AnaNetwork> {
        let dag = Dag::new(&self.nodes, self.edges.iter().map(|(e, t, h)| (e, t, h))).ok()?;
        let t = |i: usize| Some((dag.node(&format!("s{i}"))?, dag.node(&format!("d{i}"))?));
        let terminals = [t(1)?, t(2)?, t(3)?];
        validate_ana(dag, terminals).ok()
    }
}

/// `s1, s2` merge and cross `e'`; `s3` joins and `d3` leaves between `e'`
/// and `e''`; `e''` splits to `d1, d2`. Every other connection is a random
/// gadget, so `e' ∈ S̄1 ∩ S̄2` and `e'' ∈ D̄1 ∩ D̄2` and `α = β` identically.
pub fn gen_degenerate(seed: u64) -> AnaNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::default();
    let [s1, s2, s3, d1, d2, d3] = ["s1", "s2", "s3", "d1", "d2", "d3"].map(|n| b.node(n));
    let [u1, u2, u3, merge, p, q, mid, r, w, split, x3, y3] = [
        "u1", "u2", "u3", "merge", "p", "q", "mid", "r", "w", "split", "x3", "y3",
    ]
    .map(|n| b.node(n));
    b.edge("es1", &s1, &u1);
    b.edge("es2", &s2, &u2);
    b.edge("es3", &s3, &u3);
    b.gadget(&mut rng, &u1, &merge);
    b.gadget(&mut rng, &u2, &merge);
    b.gadget(&mut rng, &merge, &p);
    b.edge("e'", &p, &q);
    b.gadget(&mut rng, &q, &mid);
    b.gadget(&mut rng, &u3, &mid);
    b.gadget(&mut rng, &mid, &x3);
    b.gadget(&mut rng, &mid, &r);
    b.edge("e''", &r, &w);
    b.gadget(&mut rng, &w, &split);
    b.gadget(&mut rng, &split, &y3);
    let [t1, t2] = [b.fresh(), b.fresh()];
    b.gadget(&mut rng, &y3, &t1);
    b.gadget(&mut rng, &y3, &t2);
    b.edge("ed1", &t1, &d1);
    b.edge("ed2", &t2, &d2);
    b.edge("ed3", &x3, &d3);
    b.finish()
        .expect("degenerate construction is a valid ANA network")
}

/// Random layered DAG: `layers` layers of 1..=`width` relay nodes, each
/// with an in-edge from the previous and an out-edge to the next layer,
/// plus random extra, skip and parallel edges. Sources attach in the first
/// half, destinations in the second; draws repeat until the result is ANA.
pub fn gen_random_layered(spec: &GenSpec) -> Result<AnaNetwork, GenError> {
    if spec.layers < 2 || spec.width == 0 {
        return Err(GenError::BadSize {
            layers: spec.layers,
            width: spec.width,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(net) = layered_draw(&mut rng, spec.layers, spec.width, 0.3) {
            return Ok(net);
        }
    }
    Err(GenError::GenerationFailed {
        kind: spec.kind,
        attempts: MAX_ATTEMPTS,
    })
}

fn layered_draw(
    rng: &mut ChaCha8Rng,
    layers: usize,
    width: usize,
    density: f64,
) -> Option<AnaNetwork> {
    let mut b = Builder::default();
    let grid: Vec<Vec<String>> = (0..layers)
        .map(|l| {
            (0..rng.gen_range(1..=width))
                .map(|k| b.node(format!("n{l}_{k}")))
                .collect()
        })
        .collect();
    for l in 0..layers - 1 {
        let (cur, next) = (&grid[l], &grid[l + 1]);
        let mut has_out = vec![false; cur.len()];
        for v in next {
            let u = rng.gen_range(0..cur.len());
            b.anon(&cur[u], v);
            has_out[u] = true;
        }
        for (u, done) in has_out.iter().enumerate() {
            if !done {
                b.anon(&cur[u], next.choose(rng).unwrap());
            }
        }
        for u in cur {
            for v in next {
                if rng.gen_bool(density) {
                    b.anon(u, v);
                }
            }
            if l + 2 < layers && rng.gen_bool(density / 2.0) {
                let far = &grid[rng.gen_range(l + 2..layers)];
                b.anon(u, far.choose(rng).unwrap());
            }
        }
        if rng.gen_bool(density / 2.0) {
            let (u, v) = (cur.choose(rng).unwrap(), next.choose(rng).unwrap());
            b.anon(u, v);
        }
    }
    let half = layers.div_ceil(2);
    for i in 1..=3 {
        let s = b.node(format!("s{i}"));
        let attach = grid[rng.gen_range(0..half)].choose(rng).unwrap();
        b.edge(format!("es{i}"), &s, attach);
    }
    for j in 1..=3 {
        let d = b.node(format!("d{j}"));
        let attach = grid[rng.gen_range(layers - half..layers)]
            .choose(rng)
            .unwrap();
        b.edge(format!("ed{j}"), attach, &d);
    }
    b.finish()
}

/// Generate-and-check for networks meeting all seven graph conditions,
/// growing the width every 50 draws.
pub fn gen_feasible(seed: u64) -> Result<AnaNetwork, GenError> {
    gen_feasible_from(4, 3, seed)
}

pub fn gen_feasible_from(layers: usize, width: usize, seed: u64) -> Result<AnaNetwork, GenError> {
    if layers < 2 || width == 0 {
        return Err(GenError::BadSize { layers, width });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_ATTEMPTS {
        let w = width + attempt / 50;
        if let Some(net) = layered_draw(&mut rng, layers, w, 0.5) {
            if gtc_feasibility(&net).feasible {
                return Ok(net);
            }
        }
    }
    Err(GenError::GenerationFailed {
        kind: GenKind::Feasible,
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ana::prop4_degenerate;
    use crate::channel::{session_gains, KernelAssignment};
    use crate::field::PrimeField;

    #[test]
    fn degenerate_has_identical_alpha_beta() {
        for seed in 0..10 {
            let net = gen_degenerate(seed);
            let asg = KernelAssignment::random(net.dag(), PrimeField::default(), 5, seed);
            for t in 0..5 {
                let g = session_gains(&net, &asg, t).unwrap();
                assert_eq!(g.alpha(), g.beta());
                assert!(!g.alpha().is_zero());
            }
            let d = prop4_degenerate(&net);
            assert!(d.degenerate);
            assert!(!gtc_feasibility(&net).gtc1.holds);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(gen_degenerate(3), gen_degenerate(3));
        let spec = GenSpec::new(GenKind::RandomLayered, 7);
        assert_eq!(gen_random_layered(&spec), gen_random_layered(&spec));
        assert_ne!(gen_degenerate(3), gen_degenerate(4));
    }

    #[test]
    fn feasible_passes_everything() {
        let net = gen_feasible(1).unwrap();
        assert!(gtc_feasibility(&net).feasible);
    }

    #[test]
    fn bad_sizes_rejected() {
        let mut spec = GenSpec::new(GenKind::RandomLayered, 0);
        spec.layers = 1;
        assert_eq!(
            gen_random_layered(&spec).unwrap_err(),
            GenError::BadSize {
                layers: 1,
                width: 3
            }
        );
    }
}
