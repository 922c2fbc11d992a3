//! Randomized identity testing on channel-gain expressions.
//!
//! A "distinct" verdict is always backed by a witness evaluation and is
//! certain. An "identically related" verdict can be wrong with probability
//! at most `(D/p)^trials`, where `D` bounds the total degree of the tested
//! polynomial and `p` is the field size.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ana::{others, AnaNetwork};
use crate::channel::{session_gains_at, SessionGains};
use crate::expr::GainProduct;
use crate::field::{Fp, PrimeField};
use crate::matrix::FqMatrix;

pub const DEFAULT_TRIALS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub field: PrimeField,
    pub trials: usize,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            field: PrimeField::default(),
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

impl McConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// The random stream owned by trial `t`.
    pub fn stream(&self, t: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(t as u64);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("the reference expression vanished at all {trials} anchor points")]
    DegenerateH { trials: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// The tested polynomial vanished at every trial point.
    IdenticallyRelated,
    /// A trial point exhibited a nonzero value.
    Distinct,
}

/// The trial (and its random stream index) where a nonzero value appeared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McWitness {
    pub trial: usize,
    pub value: Fp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McVerdict {
    pub relation: Relation,
    pub trials: usize,
    pub degree_bound: u64,
    pub modulus: u64,
    /// `D/p`.
    pub bound_per_trial: f64,
    /// `(D/p)^trials` for an identically related verdict, 0 for a distinct
    /// one.
    pub failure_bound: f64,
    /// The ratio `g/h` fixed at the anchor point, for equivalence tests.
    pub constant: Option<Fp>,
    pub witness: Option<McWitness>,
}

impl McVerdict {
    fn new(relation: Relation, trials: usize, degree_bound: u64, field: PrimeField) -> Self {
        let per = degree_bound as f64 / field.modulus() as f64;
        Self {
            relation,
            trials,
            degree_bound,
            modulus: field.modulus(),
            bound_per_trial: per,
            failure_bound: match relation {
                Relation::IdenticallyRelated => per.powi(trials as i32),
                Relation::Distinct => 0.0,
            },
            constant: None,
            witness: None,
        }
    }

    pub fn identically_related(&self) -> bool {
        self.relation == Relation::IdenticallyRelated
    }

    /// For determinant tests: a nonzero determinant was found.
    pub fn independent(&self) -> bool {
        self.relation == Relation::Distinct
    }
}

/// `L · (number of gain factors)`, with `L` the longest path length in edges.
pub fn total_degree_bound(net: &AnaNetwork, expr: &GainProduct) -> u64 {
    net.dag().longest_path_edges() as u64 * expr.factor_count() as u64
}

fn gains_from_stream(net: &AnaNetwork, field: PrimeField, rng: &mut ChaCha8Rng) -> SessionGains {
    let point: Vec<Fp> = (0..net.dag().kernel_pairs().len())
        .map(|_| field.sample(rng))
        .collect();
    session_gains_at(net, &point, field)
}

/// Tests `g ≐ h`: fixes `c = g/h` at the first of up to `trials` anchor
/// points where `h ≠ 0`, then evaluates `g − c·h` at `trials` fresh points.
pub fn mc_equivalent(
    net: &AnaNetwork,
    g: &GainProduct,
    h: &GainProduct,
    cfg: &McConfig,
) -> Result<McVerdict, AlgebraError> {
    let field = cfg.field;
    let degree = total_degree_bound(net, g).max(total_degree_bound(net, h));
    let mut anchor = None;
    for t in 0..cfg.trials.max(1) {
        let gains = gains_from_stream(net, field, &mut cfg.stream(t));
        let hv = h.evaluate(&gains);
        if let Some(inv) = hv.inv() {
            anchor = Some((t, g.evaluate(&gains) * inv));
            break;
        }
    }
    let Some((anchor_trial, c)) = anchor else {
        return Err(AlgebraError::DegenerateH {
            trials: cfg.trials.max(1),
        });
    };
    if c.is_zero() {
        let mut v = McVerdict::new(Relation::Distinct, 0, degree, field);
        v.constant = Some(c);
        v.witness = Some(McWitness {
            trial: anchor_trial,
            value: c,
        });
        return Ok(v);
    }
    let offset = cfg.trials.max(1);
    for t in 0..cfg.trials {
        let gains = gains_from_stream(net, field, &mut cfg.stream(offset + t));
        let r = g.evaluate(&gains) - c * h.evaluate(&gains);
        if !r.is_zero() {
            let mut v = McVerdict::new(Relation::Distinct, t + 1, degree, field);
            v.constant = Some(c);
            v.witness = Some(McWitness {
                trial: offset + t,
                value: r,
            });
            return Ok(v);
        }
    }
    let mut v = McVerdict::new(Relation::IdenticallyRelated, cfg.trials, degree, field);
    v.constant = Some(c);
    Ok(v)
}

/// One pairwise product comparison `g` vs `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductCheck {
    pub g: GainProduct,
    pub h: GainProduct,
    /// Sessions (1-based) of the cross cut that decides this comparison.
    pub sources: [usize; 2],
    pub destinations: [usize; 2],
    pub verdict: McVerdict,
}

/// The two product comparisons belonging to session `k` (0-based), in the
/// same order as its two cross cuts: `m_kk·m_ba` vs `m_ka·m_bk` and
/// `m_kk·m_ab` vs `m_kb·m_ak` for the other sessions `a < b`.
pub fn cof_pairs(k: usize) -> [(GainProduct, GainProduct, [usize; 2], [usize; 2]); 2] {
    let (a, b) = others(k);
    [
        (
            GainProduct::of(&[(k, k), (b, a)]),
            GainProduct::of(&[(k, a), (b, k)]),
            [k + 1, a + 1],
            [k + 1, b + 1],
        ),
        (
            GainProduct::of(&[(k, k), (a, b)]),
            GainProduct::of(&[(k, b), (a, k)]),
            [k + 1, b + 1],
            [k + 1, a + 1],
        ),
    ]
}

/// All six pairwise product non-equivalence conditions, session by session.
pub fn mc_cof_conditions(
    net: &AnaNetwork,
    cfg: &McConfig,
) -> Result<Vec<ProductCheck>, AlgebraError> {
    let mut out = Vec::with_capacity(6);
    for k in 0..3 {
        for (idx, (g, h, sources, destinations)) in cof_pairs(k).into_iter().enumerate() {
            let sub = McConfig {
                seed: cfg
                    .seed
                    .wrapping_add(((2 * k + idx) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
                ..*cfg
            };
            out.push(ProductCheck {
                g,
                h,
                sources,
                destinations,
                verdict: mc_equivalent(net, &g, &h, &sub)?,
            });
        }
    }
    Ok(out)
}

/// Linear independence of `n` polynomials from their row-invariant matrix:
/// each trial fills `n` rows, row `r` holding all polynomials evaluated at
/// an independent point drawn by `row`. Independent iff some determinant is
/// nonzero. `degree` bounds the total degree of a single polynomial.
pub fn row_invariant_independence(
    n: usize,
    degree: u64,
    cfg: &McConfig,
    mut row: impl FnMut(&mut ChaCha8Rng) -> Vec<Fp>,
) -> McVerdict {
    let det_degree = degree * n as u64;
    for t in 0..cfg.trials {
        let mut rng = cfg.stream(t);
        let rows: Vec<Vec<Fp>> = (0..n).map(|_| row(&mut rng)).collect();
        let det = FqMatrix::from_rows(cfg.field, rows)
            .determinant()
            .expect("row-invariant matrix is square");
        if !det.is_zero() {
            let mut v = McVerdict::new(Relation::Distinct, t + 1, det_degree, cfg.field);
            v.witness = Some(McWitness {
                trial: t,
                value: det,
            });
            return v;
        }
    }
    McVerdict::new(
        Relation::IdenticallyRelated,
        cfg.trials,
        det_degree,
        cfg.field,
    )
}

/// Linear independence of gain-product expressions on a network.
pub fn mc_linear_independence(
    h_set: &[GainProduct],
    net: &AnaNetwork,
    cfg: &McConfig,
) -> McVerdict {
    let degree = h_set
        .iter()
        .map(|h| total_degree_bound(net, h))
        .max()
        .unwrap_or(0);
    row_invariant_independence(h_set.len(), degree, cfg, |rng| {
        let gains = gains_from_stream(net, cfg.field, rng);
        h_set.iter().map(|h| h.evaluate(&gains)).collect()
    })
}
