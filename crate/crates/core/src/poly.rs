//! Exact sparse multivariate polynomials over the integers, used as the
//! ground truth for channel gains on small networks.
//!
//! Variables are kernel pair indices of a [`Dag`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::ana::AnaNetwork;
use crate::dag::{CutQuery, CutValue, Dag, EdgeId, EdgeRelation, GainSegments};
use crate::expr::GainProduct;
use crate::field::{Fp, PrimeField};

/// Default cap on the number of terms the oracle may build.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{quantity} needs {size} terms, over the budget of {budget}")]
    BudgetExceeded {
        quantity: String,
        size: u128,
        budget: usize,
    },
}

/// Sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Self(vec![(v, 1)])
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zero
    /// exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m: BTreeMap<u32, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_default() += e;
        }
        Self(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    fn evaluate(&self, point: &[Fp], field: PrimeField) -> Fp {
        self.0.iter().fold(field.one(), |acc, &(v, e)| {
            acc * point[v as usize].pow(e as u64)
        })
    }

    /// Renders with kernel names `x[e',e'']`.
    pub fn render_on(&self, dag: &Dag) -> String {
        self.render(&|v| kernel_name(dag, v))
    }

    fn render(&self, name: &dyn Fn(u32) -> String) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    name(v)
                } else {
                    format!("{}^{e}", name(v))
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|v| format!("x{v}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_terms([(Monomial::one(), c)])
    }

    pub fn var(v: u32) -> Self {
        Self::from_terms([(Monomial::var(v), BigInt::one())])
    }

    /// Sums the given terms; zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn scale(&self, c: &BigInt) -> SparsePoly {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Product, refused when the naive term count exceeds `budget`.
    pub fn mul_checked(&self, other: &SparsePoly, budget: usize) -> Result<SparsePoly, PolyError> {
        let size = self.num_terms() as u128 * other.num_terms() as u128;
        if size > budget as u128 {
            return Err(PolyError::BudgetExceeded {
                quantity: "polynomial product".into(),
                size,
                budget,
            });
        }
        Ok(self * other)
    }

    pub fn pow_checked(&self, k: u32, budget: usize) -> Result<SparsePoly, PolyError> {
        let mut acc = SparsePoly::one();
        for _ in 0..k {
            acc = acc.mul_checked(self, budget)?;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, field: PrimeField, point: &[Fp]) -> Fp {
        let p = BigInt::from(field.modulus());
        self.terms.iter().fold(field.zero(), |acc, (m, c)| {
            let r = ((c % &p) + &p) % &p;
            let c = field.elem(r.to_u64().expect("reduced coefficient fits in u64"));
            acc + c * m.evaluate(point, field)
        })
    }

    /// Substitutes zero for every variable outside `kept`.
    pub fn restrict(&self, kept: &BTreeSet<u32>) -> SparsePoly {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.vars().all(|v| kept.contains(&v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renames variables. Panics if `f` returns `None` for a variable that
    /// occurs.
    pub fn map_vars(&self, f: impl Fn(u32) -> Option<u32>) -> SparsePoly {
        SparsePoly::from_terms(self.terms.iter().map(|(m, c)| {
            let pairs = m
                .factors()
                .iter()
                .map(|&(v, e)| (f(v).expect("variable has an image"), e));
            (Monomial::from_pairs(pairs), c.clone())
        }))
    }

    /// Renders with kernel names `x[e',e'']`.
    pub fn render(&self, dag: &Dag) -> String {
        self.render_with(&|v| kernel_name(dag, v))
    }

    fn render_with(&self, name: &dyn Fn(u32) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let a = c.abs();
            let body = m.render(name);
            if m.0.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&body);
            } else {
                out.push_str(&format!("{a}·{body}"));
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&|v| format!("x{v}")))
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

fn kernel_name(dag: &Dag, v: u32) -> String {
    let (a, b) = dag.kernel_pairs()[v as usize];
    format!("x[{},{}]", dag.edge_name(a), dag.edge_name(b))
}

/// Outcome of an exact equivalence test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// `g = c·h` with `c ≠ 0`.
    Equivalent(BigRational),
    /// No such constant; `witness` is a monomial where `g - c·h` is nonzero
    /// for the only candidate `c`, or where exactly one side is nonzero.
    Distinct { witness: Monomial },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }
}

/// Decides whether `g = c·h` for a nonzero rational `c`. The zero
/// polynomial is equivalent only to itself (with `c = 1`).
pub fn equivalence(g: &SparsePoly, h: &SparsePoly) -> Equivalence {
    let (Some((m0, h0)), Some(g_first)) = (h.terms.iter().next(), g.terms.keys().next()) else {
        return match (g.is_zero(), h.is_zero()) {
            (true, true) => Equivalence::Equivalent(BigRational::one()),
            (true, false) => Equivalence::Distinct {
                witness: h.terms.keys().next().cloned().unwrap_or_default(),
            },
            _ => Equivalence::Distinct {
                witness: g.terms.keys().next().cloned().unwrap_or_default(),
            },
        };
    };
    if g_first != m0 {
        let witness = if g_first < m0 { g_first } else { m0 };
        return Equivalence::Distinct {
            witness: witness.clone(),
        };
    }
    let g0 = &g.terms[m0];
    // g0·h_m = h0·g_m must hold for every monomial m.
    let monos: BTreeSet<&Monomial> = g.terms.keys().chain(h.terms.keys()).collect();
    for m in monos {
        let gm = g.terms.get(m).cloned().unwrap_or_default();
        let hm = h.terms.get(m).cloned().unwrap_or_default();
        if g0 * &hm != h0 * &gm {
            return Equivalence::Distinct { witness: m.clone() };
        }
    }
    Equivalence::Equivalent(BigRational::new(g0.clone(), h0.clone()))
}

/// The constant `c` with `g = c·h`, if any.
pub fn equivalent(g: &SparsePoly, h: &SparsePoly) -> Option<BigRational> {
    match equivalence(g, h) {
        Equivalence::Equivalent(c) => Some(c),
        Equivalence::Distinct { .. } => None,
    }
}

/// Number of distinct paths from `e1` to every edge (saturating).
fn path_counts(dag: &Dag, e1: EdgeId) -> Vec<u128> {
    let mut n = vec![0u128; dag.edge_count()];
    n[e1.index()] = 1;
    for &f in &dag.topo_order()[dag.topo_rank(e1) + 1..] {
        n[f.index()] = dag
            .pairs_into(f)
            .iter()
            .fold(0u128, |acc, &(e, _)| acc.saturating_add(n[e.index()]));
    }
    n
}

/// The exact gain polynomial `m_{e2;e1}`: one monomial per path.
pub fn symbolic_channel_gain(
    dag: &Dag,
    e1: EdgeId,
    e2: EdgeId,
    budget: usize,
) -> Result<SparsePoly, PolyError> {
    if e1 == e2 {
        return Ok(SparsePoly::one());
    }
    let size = path_counts(dag, e1)[e2.index()];
    if size > budget as u128 {
        return Err(PolyError::BudgetExceeded {
            quantity: format!("gain from {} to {}", dag.edge_name(e1), dag.edge_name(e2)),
            size,
            budget,
        });
    }
    if size == 0 {
        return Ok(SparsePoly::zero());
    }
    let mut g: Vec<Option<SparsePoly>> = vec![None; dag.edge_count()];
    g[e1.index()] = Some(SparsePoly::one());
    for &f in &dag.topo_order()[dag.topo_rank(e1) + 1..=dag.topo_rank(e2)] {
        if f != e2 && !dag.precedes(f, e2) {
            continue;
        }
        let mut acc = SparsePoly::zero();
        for &(e, k) in dag.pairs_into(f) {
            if let Some(ge) = &g[e.index()] {
                acc = &acc + &(ge * &SparsePoly::var(k as u32));
            }
        }
        if !acc.is_zero() {
            g[f.index()] = Some(acc);
        }
    }
    Ok(g[e2.index()].take().unwrap_or_default())
}

/// Exact session gains `m_{j,i}`, indexed `[j][i]`.
pub fn session_gain_polys(
    net: &AnaNetwork,
    budget: usize,
) -> Result<[[SparsePoly; 3]; 3], PolyError> {
    let mut out: [[SparsePoly; 3]; 3] = Default::default();
    for (j, row) in out.iter_mut().enumerate() {
        for (i, p) in row.iter_mut().enumerate() {
            *p = symbolic_channel_gain(
                net.dag(),
                net.source_edge(i),
                net.destination_edge(j),
                budget,
            )?;
        }
    }
    Ok(out)
}

/// Expands a gain product into an exact polynomial.
pub fn gain_product_poly(
    gains: &[[SparsePoly; 3]; 3],
    expr: &GainProduct,
    budget: usize,
) -> Result<SparsePoly, PolyError> {
    let mut acc = SparsePoly::one();
    for (j, row) in expr.exponents().iter().enumerate() {
        for (i, &k) in row.iter().enumerate() {
            for _ in 0..k {
                acc = acc.mul_checked(&gains[j][i], budget)?;
            }
        }
    }
    Ok(acc)
}

/// `α = m31·m23·m12` and `β = m21·m32·m13` as exact polynomials.
pub fn alpha_beta_symbolic(
    net: &AnaNetwork,
    budget: usize,
) -> Result<(SparsePoly, SparsePoly), PolyError> {
    let gains = session_gain_polys(net, budget)?;
    Ok((
        gain_product_poly(&gains, &GainProduct::alpha(), budget)?,
        gain_product_poly(&gains, &GainProduct::beta(), budget)?,
    ))
}

/// Result of checking the 1-edge-cut factorization of one gain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCheck {
    /// `EC(head(e_s), tail(e_d))`.
    pub cut_value: CutValue,
    /// Sorted 1-edge cuts used as segment boundaries (empty unless the cut
    /// value is 1).
    pub boundaries: Vec<EdgeId>,
    /// The product of the segment gains equals the full gain exactly.
    pub product_identity: bool,
    /// No two segment gains are equivalent.
    pub factors_distinct: bool,
    /// Every edge `e` strictly between `e_s` and `e_d` with
    /// `m_{e_d;e_s} = m_{e;e_s}·m_{e_d;e}`, in topological order.
    pub decomposing_edges: Vec<EdgeId>,
}

impl FactorCheck {
    /// The decomposing edges are exactly the cut boundaries and the
    /// segment identity holds.
    pub fn holds(&self) -> bool {
        self.product_identity && self.factors_distinct && self.decomposing_edges == self.boundaries
    }
}

/// Verifies symbolically that the gain from `e_s` to `e_d` splits at its
/// 1-edge cuts, and only there.
pub fn factor_check(
    dag: &Dag,
    e_s: EdgeId,
    e_d: EdgeId,
    budget: usize,
) -> Result<FactorCheck, PolyError> {
    let full = symbolic_channel_gain(dag, e_s, e_d, budget)?;
    let cut_value = dag.edge_cut_value(&CutQuery::between(dag.head(e_s), dag.tail(e_d)));
    let segments = match dag
        .gain_segments(e_s, e_d)
        .expect("edges belong to the graph")
    {
        GainSegments::Zero => Vec::new(),
        GainSegments::Segments(s) => s,
    };
    let boundaries: Vec<EdgeId> = segments
        .iter()
        .take(segments.len().saturating_sub(1))
        .map(|&(_, b)| b)
        .collect();
    let factors = segments
        .iter()
        .map(|&(a, b)| symbolic_channel_gain(dag, a, b, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let mut product = if factors.is_empty() {
        SparsePoly::zero()
    } else {
        SparsePoly::one()
    };
    for f in &factors {
        product = product.mul_checked(f, budget)?;
    }
    let product_identity = product == full;
    let factors_distinct = (0..factors.len())
        .all(|a| (a + 1..factors.len()).all(|b| equivalent(&factors[a], &factors[b]).is_none()));
    let mut decomposing_edges = Vec::new();
    if !full.is_zero() {
        for &e in dag.topo_order() {
            let between = dag.edge_relation(e_s, e) == Ok(EdgeRelation::Upstream)
                && dag.edge_relation(e, e_d) == Ok(EdgeRelation::Upstream);
            if !between {
                continue;
            }
            let left = symbolic_channel_gain(dag, e_s, e, budget)?;
            let right = symbolic_channel_gain(dag, e, e_d, budget)?;
            if left.mul_checked(&right, budget)? == full {
                decomposing_edges.push(e);
            }
        }
    }
    Ok(FactorCheck {
        cut_value,
        boundaries,
        product_identity,
        factors_distinct,
        decomposing_edges,
    })
}
