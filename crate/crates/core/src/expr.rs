//! Monomials in the nine session gains, with `α = m31·m23·m12` and
//! `β = m21·m32·m13` kept as named factors.

use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};

use crate::channel::SessionGains;
use crate::field::Fp;

/// `Π m_{j,i}^{gains[j][i]} · α^alpha · β^beta` (0-based indices). Renders
/// the gains row-major, then `α`, then `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GainProduct {
    pub gains: [[u32; 3]; 3],
    pub alpha: u32,
    pub beta: u32,
}

impl GainProduct {
    pub fn one() -> Self {
        Self::default()
    }

    /// The single gain `m_{j,i}` from source `i` to destination `j`.
    pub fn gain(j: usize, i: usize) -> Self {
        let mut g = Self::default();
        g.gains[j][i] = 1;
        g
    }

    pub fn alpha() -> Self {
        Self {
            alpha: 1,
            ..Self::default()
        }
    }

    pub fn beta() -> Self {
        Self {
            beta: 1,
            ..Self::default()
        }
    }

    /// Product of gains given as `(j, i)` pairs.
    pub fn of(pairs: &[(usize, usize)]) -> Self {
        pairs
            .iter()
            .fold(Self::one(), |acc, &(j, i)| acc * Self::gain(j, i))
    }

    pub fn pow(self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc * self)
    }

    /// Exponents of the nine gains with α and β expanded.
    pub fn exponents(&self) -> [[u32; 3]; 3] {
        let mut e = self.gains;
        for (j, i) in [(2, 0), (1, 2), (0, 1)] {
            e[j][i] += self.alpha;
        }
        for (j, i) in [(1, 0), (2, 1), (0, 2)] {
            e[j][i] += self.beta;
        }
        e
    }

    /// Number of channel-gain factors, counting α and β as three each.
    pub fn factor_count(&self) -> u32 {
        self.exponents().iter().flatten().sum()
    }

    pub fn evaluate(&self, g: &SessionGains) -> Fp {
        let e = self.exponents();
        let mut acc = g.get(0, 0).field().one();
        for (j, row) in e.iter().enumerate() {
            for (i, &k) in row.iter().enumerate() {
                if k > 0 {
                    acc *= g.get(j, i).pow(k as u64);
                }
            }
        }
        acc
    }
}

impl Mul for GainProduct {
    type Output = GainProduct;

    fn mul(self, rhs: GainProduct) -> GainProduct {
        let mut gains = self.gains;
        for (j, row) in gains.iter_mut().enumerate() {
            for (i, v) in row.iter_mut().enumerate() {
                *v += rhs.gains[j][i];
            }
        }
        GainProduct {
            gains,
            alpha: self.alpha + rhs.alpha,
            beta: self.beta + rhs.beta,
        }
    }
}

impl fmt::Display for GainProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, row) in self.gains.iter().enumerate() {
            for (i, &k) in row.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(format!("m{}{}", j + 1, i + 1)),
                    _ => parts.push(format!("m{}{}^{k}", j + 1, i + 1)),
                }
            }
        }
        for (sym, k) in [("α", self.alpha), ("β", self.beta)] {
            match k {
                0 => {}
                1 => parts.push(sym.to_string()),
                _ => parts.push(format!("{sym}^{k}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

impl Serialize for GainProduct {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
