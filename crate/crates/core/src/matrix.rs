//! Dense matrices over a prime field.

use std::fmt;
use std::ops::Mul;

use crate::field::{FieldError, Fp, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Fp>,
}

impl FqMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn diagonal(field: PrimeField, diag: &[Fp]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds from row vectors. Panics on ragged input.
    pub fn from_rows(field: PrimeField, rows: Vec<Vec<Fp>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Self {
            field,
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Fp,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_u64(field: PrimeField, rows: &[&[u64]]) -> Self {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.elem(v)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fp {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fp) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fp] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fp>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Horizontal concatenation `[self other]`.
    pub fn hconcat(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        FqMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn top_rows(&self, k: usize) -> FqMatrix {
        assert!(k <= self.rows);
        FqMatrix {
            field: self.field,
            rows: k,
            cols: self.cols,
            data: self.data[..k * self.cols].to_vec(),
        }
    }

    pub fn mul_vec(&self, v: &[Fp]) -> Vec<Fp> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j).value() == u64::from(i == j)))
    }

    pub fn nonzero_entries(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Reduces to row-echelon form in place, returning the pivot columns
    /// and whether an odd number of row swaps happened.
    fn echelon(&mut self) -> (Vec<usize>, bool) {
        let mut pivots = Vec::new();
        let mut odd = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
                odd = !odd;
            }
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            for i in r + 1..self.rows {
                let factor = self.get(i, c) * inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j) - factor * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, odd)
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().0.len()
    }

    pub fn determinant(&self) -> Result<Fp, FieldError> {
        self.require_square()?;
        let mut m = self.clone();
        let (pivots, odd) = m.echelon();
        if pivots.len() < self.rows {
            return Ok(self.field.zero());
        }
        let det = (0..self.rows).fold(self.field.one(), |acc, i| acc * m.get(i, i));
        Ok(if odd { -det } else { det })
    }

    /// Gauss-Jordan inverse.
    pub fn invert(&self) -> Result<FqMatrix, FieldError> {
        self.require_square()?;
        let n = self.rows;
        let mut aug = self.hconcat(&FqMatrix::identity(self.field, n));
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !aug.get(i, c).is_zero())
                .ok_or(FieldError::Singular)?;
            if p != c {
                for j in 0..2 * n {
                    aug.data.swap(p * 2 * n + j, c * 2 * n + j);
                }
            }
            let inv = aug.get(c, c).inv().expect("pivot is nonzero");
            for j in 0..2 * n {
                let v = aug.get(c, j) * inv;
                aug.set(c, j, v);
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let factor = aug.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..2 * n {
                    let v = aug.get(i, j) - factor * aug.get(c, j);
                    aug.set(i, j, v);
                }
            }
        }
        let rows = (0..n).map(|i| aug.row(i)[n..].to_vec()).collect();
        Ok(FqMatrix::from_rows(self.field, rows))
    }

    fn require_square(&self) -> Result<(), FieldError> {
        if self.rows == self.cols {
            Ok(())
        } else {
            Err(FieldError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Mul for &FqMatrix {
    type Output = FqMatrix;

    fn mul(self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = FqMatrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(
        field: PrimeField,
        rows: usize,
        cols: usize,
        rank: usize,
        seed: u64,
    ) -> FqMatrix {
        // Product of rows x rank and rank x cols factors has rank <= `rank`.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gen = |r, c| FqMatrix::from_fn(field, r, c, |_, _| field.sample(&mut rng));
        &gen(rows, rank) * &gen(rank, cols)
    }

    #[test]
    fn rank_examples() {
        let f = PrimeField::default();
        assert_eq!(FqMatrix::identity(f, 3).rank(), 3);
        assert_eq!(FqMatrix::zeros(f, 3, 4).rank(), 0);
        assert_eq!(FqMatrix::from_u64(f, &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn invert_examples() {
        let f = PrimeField::default();
        let id = FqMatrix::identity(f, 4);
        assert_eq!(id.invert().unwrap(), id);
        let f7 = PrimeField::new(7).unwrap();
        let m = FqMatrix::from_u64(f7, &[&[2]]);
        assert_eq!(m.invert().unwrap(), FqMatrix::from_u64(f7, &[&[4]]));
        let singular = FqMatrix::from_u64(f, &[&[1, 2], &[2, 4]]);
        assert_eq!(singular.invert().unwrap_err(), FieldError::Singular);
        assert!(matches!(
            FqMatrix::zeros(f, 2, 3).invert(),
            Err(FieldError::NotSquare { .. })
        ));
    }

    #[test]
    fn determinant_small() {
        let f7 = PrimeField::new(7).unwrap();
        let m = FqMatrix::from_u64(f7, &[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant().unwrap(), f7.from_i64(-1));
        let m = FqMatrix::from_u64(f7, &[&[3, 1], &[2, 5]]);
        assert_eq!(m.determinant().unwrap(), f7.elem(13));
    }

    proptest! {
        #[test]
        fn rank_of_product_bounded(seed in any::<u64>(), ra in 0usize..5, rb in 0usize..5) {
            let f = PrimeField::default();
            let a = random_matrix(f, 5, 5, ra, seed);
            let b = random_matrix(f, 5, 5, rb, seed ^ 0x5555);
            let ab = &a * &b;
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
            prop_assert!(a.rank() <= ra);
        }

        #[test]
        fn inverse_is_two_sided(seed in any::<u64>(), n in 1usize..7) {
            let f = PrimeField::new(crate::field::MERSENNE_31).unwrap();
            let m = random_matrix(f, n, n, n, seed);
            match m.invert() {
                Ok(inv) => {
                    prop_assert!((&inv * &m).is_identity());
                    prop_assert!((&m * &inv).is_identity());
                    prop_assert!(!m.determinant().unwrap().is_zero());
                }
                Err(_) => prop_assert!(m.determinant().unwrap().is_zero()),
            }
        }
    }
}
