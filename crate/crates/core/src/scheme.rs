//! The three-session alignment scheme with symbol extension `n`: `τ = 2n+1`
//! slots carry `n+1`, `n`, `n` symbols for sessions 1, 2, 3. Session 1 is
//! the alignment basis.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ana::AnaNetwork;
use crate::channel::{session_gains_all, KernelAssignment, SessionGains};
use crate::expr::GainProduct;
use crate::field::{Fp, PrimeField};
use crate::matrix::FqMatrix;

pub const DEFAULT_RETRIES: usize = 3;
pub const DEFAULT_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("symbol extension must be at least 1")]
    InvalidN,
    #[error("assignment has {got} slots, the scheme needs {expected}")]
    SlotMismatch { expected: usize, got: usize },
    #[error("message {session} has {got} symbols, expected {expected}")]
    MessageLength {
        session: usize,
        expected: usize,
        got: usize,
    },
    #[error("ranks {ranks:?} after {attempts} draw(s), every S_j needs rank {needed}")]
    RankDeficient {
        ranks: [usize; 3],
        needed: usize,
        attempts: usize,
    },
}

/// `β^{n-k} α^k` for `k` in `ks`, each times `prefix`.
fn vandermonde(prefix: GainProduct, n: u32, ks: std::ops::Range<u32>) -> Vec<GainProduct> {
    ks.map(|k| prefix * GainProduct::beta().pow(n - k) * GainProduct::alpha().pow(k))
        .collect()
}

/// Entries of the precoding rows `v1, v2, v3` as gain products.
pub fn precoding_exprs(n: usize) -> [Vec<GainProduct>; 3] {
    let n = n as u32;
    [
        vandermonde(GainProduct::of(&[(2, 1), (1, 2)]), n, 0..n + 1),
        vandermonde(GainProduct::of(&[(2, 0), (1, 2)]), n, 0..n),
        vandermonde(GainProduct::of(&[(1, 0), (2, 1)]), n, 1..n + 1),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HSetVariant {
    H1,
    H2,
    H3,
    H1Tilde,
}

/// The polynomial sets whose linear independence decides whether `S_1`,
/// `S_2`, `S_3` (and the companion of `S_1`) have full rank.
pub fn build_h_sets(n: usize, variant: HSetVariant) -> Vec<GainProduct> {
    let n32 = n as u32;
    let g = GainProduct::of;
    let mut out = match variant {
        HSetVariant::H1 => vandermonde(g(&[(0, 0), (2, 1), (1, 2)]), n32, 0..n32 + 1),
        HSetVariant::H2 => vandermonde(g(&[(1, 1), (2, 0), (1, 2)]), n32, 0..n32),
        HSetVariant::H3 => vandermonde(g(&[(2, 2), (1, 0), (2, 1)]), n32, 1..n32 + 1),
        HSetVariant::H1Tilde => swapped(g(&[(0, 0), (2, 1), (0, 2)]), n32, 0..n32),
    };
    out.extend(match variant {
        HSetVariant::H1 => vandermonde(g(&[(0, 1), (2, 0), (1, 2)]), n32, 0..n32),
        HSetVariant::H2 => vandermonde(g(&[(1, 0), (2, 1), (1, 2)]), n32, 0..n32 + 1),
        HSetVariant::H3 => vandermonde(g(&[(2, 0), (2, 1), (1, 2)]), n32, 0..n32 + 1),
        HSetVariant::H1Tilde => swapped(g(&[(0, 1), (2, 0), (0, 2)]), n32, 0..n32 + 1),
    });
    out
}

/// `α^{n-k} β^k` for `k` in `ks`, each times `prefix`.
fn swapped(prefix: GainProduct, n: u32, ks: std::ops::Range<u32>) -> Vec<GainProduct> {
    ks.map(|k| prefix * GainProduct::alpha().pow(n - k) * GainProduct::beta().pow(k))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeInstance {
    pub n: usize,
    pub tau: usize,
    pub lengths: [usize; 3],
    pub assignment: KernelAssignment,
    pub gains: Vec<SessionGains>,
    /// `V_i`, `τ × l_i`.
    pub v: [FqMatrix; 3],
    /// `M_{j,i}` at `m[j][i]`, `τ × τ` diagonal.
    pub m: [[FqMatrix; 3]; 3],
}

pub fn build_precoding(
    net: &AnaNetwork,
    n: usize,
    assignment: KernelAssignment,
) -> Result<SchemeInstance, SchemeError> {
    if n == 0 {
        return Err(SchemeError::InvalidN);
    }
    let tau = 2 * n + 1;
    if assignment.slot_count() != tau {
        return Err(SchemeError::SlotMismatch {
            expected: tau,
            got: assignment.slot_count(),
        });
    }
    let field = assignment.field();
    let gains = session_gains_all(net, &assignment);
    let exprs = precoding_exprs(n);
    let v = [0, 1, 2].map(|i| {
        FqMatrix::from_fn(field, tau, exprs[i].len(), |t, c| {
            exprs[i][c].evaluate(&gains[t])
        })
    });
    let m = [0, 1, 2].map(|j| {
        [0, 1, 2].map(|i| {
            let diag: Vec<Fp> = gains.iter().map(|g| g.get(j, i)).collect();
            FqMatrix::diagonal(field, &diag)
        })
    });
    Ok(SchemeInstance {
        n,
        tau,
        lengths: [n + 1, n, n],
        assignment,
        gains,
        v,
        m,
    })
}

impl SchemeInstance {
    pub fn field(&self) -> PrimeField {
        self.assignment.field()
    }

    /// `M_{j,i} V_i`.
    pub fn received(&self, j: usize, i: usize) -> FqMatrix {
        &self.m[j][i] * &self.v[i]
    }

    /// `S_1 = [M11V1 M12V2]`, `S_2 = [M22V2 M21V1]`, `S_3 = [M33V3 M31V1]`.
    pub fn s_matrix(&self, j: usize) -> FqMatrix {
        let other = if j == 0 { 1 } else { 0 };
        self.received(j, j).hconcat(&self.received(j, other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentReport {
    /// `span(M13V3) = span(M12V2)`.
    pub c1: bool,
    /// `span(M23V3) ⊆ span(M21V1)`.
    pub c3: bool,
    /// `span(M32V2) ⊆ span(M31V1)`.
    pub c5: bool,
    /// `rank(S_j)` for `j = 1, 2, 3`.
    pub ranks: [usize; 3],
    pub determinants: [Fp; 3],
    pub full_rank: bool,
}

impl AlignmentReport {
    pub fn aligned(&self) -> bool {
        self.c1 && self.c3 && self.c5
    }
}

fn contained(a: &FqMatrix, basis: &FqMatrix) -> bool {
    basis.hconcat(a).rank() == basis.rank()
}

pub fn check_alignment(inst: &SchemeInstance) -> AlignmentReport {
    let r = |j, i| inst.received(j, i);
    let (m13v3, m12v2) = (r(0, 2), r(0, 1));
    let c1 = contained(&m13v3, &m12v2) && contained(&m12v2, &m13v3);
    let c3 = contained(&r(1, 2), &r(1, 0));
    let c5 = contained(&r(2, 1), &r(2, 0));
    let s = [0, 1, 2].map(|j| inst.s_matrix(j));
    let ranks = [0, 1, 2].map(|j| s[j].rank());
    let determinants = [0, 1, 2].map(|j| s[j].determinant().expect("S_j is square"));
    AlignmentReport {
        c1,
        c3,
        c5,
        full_rank: ranks.iter().all(|&k| k == inst.tau),
        ranks,
        determinants,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeReport {
    #[serde(skip)]
    pub decoders: [FqMatrix; 3],
    /// `U_j M_jj V_j = I`.
    pub desired_identity: [bool; 3],
    /// `U_j M_ji V_i = 0` for both `i ≠ j`.
    pub interference_zero: [bool; 3],
    pub success: bool,
}

/// `U_j` is the top `l_j` rows of `S_j^{-1}`.
pub fn build_decoders(
    inst: &SchemeInstance,
    report: &AlignmentReport,
) -> Result<DecodeReport, SchemeError> {
    if !report.full_rank {
        return Err(SchemeError::RankDeficient {
            ranks: report.ranks,
            needed: inst.tau,
            attempts: 1,
        });
    }
    let decoders = [0, 1, 2].map(|j| {
        inst.s_matrix(j)
            .invert()
            .expect("full-rank S_j is invertible")
            .top_rows(inst.lengths[j])
    });
    let desired_identity = [0, 1, 2].map(|j| (&decoders[j] * &inst.received(j, j)).is_identity());
    let interference_zero = [0, 1, 2].map(|j| {
        (0..3)
            .filter(|&i| i != j)
            .all(|i| (&decoders[j] * &inst.received(j, i)).is_zero())
    });
    Ok(DecodeReport {
        success: desired_identity
            .iter()
            .chain(&interference_zero)
            .all(|&b| b),
        decoders,
        desired_identity,
        interference_zero,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RetryEntry {
    pub attempt: usize,
    pub ranks: [usize; 3],
    pub aligned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub n: usize,
    pub tau: usize,
    /// Kernel draws used, including the successful one.
    pub attempts: usize,
    pub retries: Vec<RetryEntry>,
    pub alignment: AlignmentReport,
    pub decode: DecodeReport,
    pub sent: [Vec<Fp>; 3],
    pub recovered: [Vec<Fp>; 3],
    pub exact_recovery: bool,
    /// `(n+1)/(2n+1), n/(2n+1), n/(2n+1)`.
    pub rates: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub field: PrimeField,
    pub retries: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            field: PrimeField::default(),
            retries: DEFAULT_RETRIES,
        }
    }
}

/// Seeded random messages of lengths `(n+1, n, n)`.
pub fn random_messages(field: PrimeField, n: usize, seed: u64) -> [Vec<Fp>; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [n + 1, n, n].map(|l| (0..l).map(|_| field.sample(&mut rng)).collect())
}

/// Draws kernels (retrying rank-deficient draws up to `cfg.retries` times),
/// transmits `messages`, and decodes every session.
pub fn simulate_end_to_end(
    net: &AnaNetwork,
    n: usize,
    seed: u64,
    messages: &[Vec<Fp>; 3],
    cfg: &SimConfig,
) -> Result<SimulationReport, SchemeError> {
    if n == 0 {
        return Err(SchemeError::InvalidN);
    }
    let lengths = [n + 1, n, n];
    for (j, msg) in messages.iter().enumerate() {
        if msg.len() != lengths[j] {
            return Err(SchemeError::MessageLength {
                session: j + 1,
                expected: lengths[j],
                got: msg.len(),
            });
        }
    }
    let tau = 2 * n + 1;
    let mut retries = Vec::new();
    for attempt in 0..=cfg.retries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let asg = KernelAssignment::random_with(net.dag(), cfg.field, tau, &mut rng);
        let inst = build_precoding(net, n, asg)?;
        let alignment = check_alignment(&inst);
        if !alignment.full_rank {
            retries.push(RetryEntry {
                attempt,
                ranks: alignment.ranks,
                aligned: alignment.aligned(),
            });
            continue;
        }
        let decode = build_decoders(&inst, &alignment)?;
        let recovered = [0, 1, 2].map(|j| {
            let mut r = vec![cfg.field.zero(); tau];
            for (i, msg) in messages.iter().enumerate() {
                let y = inst.received(j, i).mul_vec(msg);
                for (acc, v) in r.iter_mut().zip(y) {
                    *acc += v;
                }
            }
            decode.decoders[j].mul_vec(&r)
        });
        let exact_recovery = recovered == *messages;
        let t = tau as f64;
        return Ok(SimulationReport {
            n,
            tau,
            attempts: attempt + 1,
            retries,
            alignment,
            decode,
            sent: messages.clone(),
            recovered,
            exact_recovery,
            rates: [(n + 1) as f64 / t, n as f64 / t, n as f64 / t],
        });
    }
    Err(SchemeError::RankDeficient {
        ranks: retries.last().map(|r| r.ranks).unwrap_or_default(),
        needed: tau,
        attempts: retries.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ana::fixtures;

    #[test]
    fn h_set_examples() {
        let g = GainProduct::of;
        let (a, b) = (GainProduct::alpha(), GainProduct::beta());
        assert_eq!(
            build_h_sets(1, HSetVariant::H1),
            vec![
                g(&[(0, 0), (2, 1), (1, 2)]) * b,
                g(&[(0, 0), (2, 1), (1, 2)]) * a,
                g(&[(0, 1), (2, 0), (1, 2)]) * b,
            ]
        );
        assert_eq!(
            build_h_sets(1, HSetVariant::H1Tilde),
            vec![
                g(&[(0, 0), (2, 1), (0, 2)]) * a,
                g(&[(0, 1), (2, 0), (0, 2)]) * a,
                g(&[(0, 1), (2, 0), (0, 2)]) * b,
            ]
        );
        for n in 1..6 {
            for v in [
                HSetVariant::H1,
                HSetVariant::H2,
                HSetVariant::H3,
                HSetVariant::H1Tilde,
            ] {
                assert_eq!(build_h_sets(n, v).len(), 2 * n + 1);
            }
        }
    }

    #[test]
    fn h_sets_are_the_s_matrix_columns() {
        let net = fixtures::shared_chain();
        let f = PrimeField::default();
        let inst = build_precoding(&net, 2, KernelAssignment::random(net.dag(), f, 5, 3)).unwrap();
        for (j, v) in [HSetVariant::H1, HSetVariant::H2, HSetVariant::H3]
            .into_iter()
            .enumerate()
        {
            let h = build_h_sets(2, v);
            let s = inst.s_matrix(j);
            for t in 0..5 {
                for (c, e) in h.iter().enumerate() {
                    assert_eq!(s.get(t, c), e.evaluate(&inst.gains[t]));
                }
            }
        }
    }

    #[test]
    fn dimensions_for_n1() {
        let net = fixtures::shared_chain();
        let f = PrimeField::default();
        let asg = KernelAssignment::random(net.dag(), f, 3, 1);
        let inst = build_precoding(&net, 1, asg.clone()).unwrap();
        let dims: Vec<_> = inst.v.iter().map(|v| (v.rows(), v.cols())).collect();
        assert_eq!(dims, [(3, 2), (3, 1), (3, 1)]);
        let g = &inst.gains[0];
        let pre = g.get(2, 1) * g.get(1, 2);
        assert_eq!(inst.v[0].row(0), &[pre * g.beta(), pre * g.alpha()]);
        assert_eq!(
            build_precoding(&net, 2, asg).unwrap_err(),
            SchemeError::SlotMismatch {
                expected: 5,
                got: 3
            }
        );
    }

    #[test]
    fn repeated_point_gives_rank_one_v1() {
        let net = fixtures::shared_chain();
        let f = PrimeField::default();
        let point = KernelAssignment::random(net.dag(), f, 1, 8)
            .slot(0)
            .unwrap()
            .to_vec();
        let inst = build_precoding(&net, 2, KernelAssignment::replicated(f, point, 5)).unwrap();
        assert_eq!(inst.v[0].rank(), 1);
    }

    #[test]
    fn shared_chain_aligns_but_is_rank_deficient() {
        let net = fixtures::shared_chain();
        let msgs = random_messages(PrimeField::default(), 1, 0);
        let f = PrimeField::default();
        let inst = build_precoding(&net, 1, KernelAssignment::random(net.dag(), f, 3, 2)).unwrap();
        let rep = check_alignment(&inst);
        assert!(rep.aligned());
        assert!(rep.ranks[0] < 3);
        assert!(matches!(
            build_decoders(&inst, &rep),
            Err(SchemeError::RankDeficient { .. })
        ));
        let err = simulate_end_to_end(&net, 1, 0, &msgs, &SimConfig::default()).unwrap_err();
        assert!(matches!(
            err,
            SchemeError::RankDeficient {
                attempts: 4,
                needed: 3,
                ..
            }
        ));
    }

    #[test]
    fn message_length_checked() {
        let net = fixtures::shared_chain();
        let msgs = random_messages(PrimeField::default(), 2, 0);
        assert!(matches!(
            simulate_end_to_end(&net, 1, 0, &msgs, &SimConfig::default()),
            Err(SchemeError::MessageLength { session: 1, .. })
        ));
        assert_eq!(
            simulate_end_to_end(&net, 0, 0, &msgs, &SimConfig::default()).unwrap_err(),
            SchemeError::InvalidN
        );
    }
}
