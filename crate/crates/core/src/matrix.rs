//! Dense square complex matrices.
//!
//! Everything in this library lives in small Hilbert spaces (at most a few
//! qubits), so a plain row-major `Vec<Complex64>` with `O(n^3)` products is
//! the right tool. Matrices serialize as nested arrays of `[re, im]` pairs.

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from real diagonal entries.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix product `self * rhs`. Panics on dimension mismatch.
    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Entrywise sum. Panics on dimension mismatch.
    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }

    /// Entrywise difference. Panics on dimension mismatch.
    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }

    /// Scales every entry by a real factor.
    pub fn scale(&self, factor: f64) -> ComplexMatrix {
        let mut out = self.clone();
        for a in &mut out.data {
            *a *= factor;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - rhs`.
    pub fn frobenius_distance(&self, rhs: &ComplexMatrix) -> f64 {
        self.sub(rhs).frobenius_norm()
    }

    /// Largest entrywise deviation from `self = self^dag`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Kronecker product; `self` indexes the leftmost (most significant) factor.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.dim, rhs.dim);
        ComplexMatrix::from_fn(n * m, |i, j| self[(i / m, j / m)] * rhs[(i % m, j % m)])
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(self.dim))?;
        for i in 0..self.dim {
            let row: Vec<[f64; 2]> = (0..self.dim)
                .map(|j| [self[(i, j)].re, self[(i, j)].im])
                .collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MatrixVisitor;

        impl<'de> Visitor<'de> for MatrixVisitor {
            type Value = ComplexMatrix;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a square matrix as nested arrays of [re, im] pairs")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<ComplexMatrix, A::Error> {
                let mut rows: Vec<Vec<Complex64>> = Vec::new();
                while let Some(row) = seq.next_element::<Vec<[f64; 2]>>()? {
                    rows.push(row.iter().map(|p| Complex64::new(p[0], p[1])).collect());
                }
                ComplexMatrix::from_rows(rows).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(MatrixVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_trace() {
        let x = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let y = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let xy = x.mul(&y);
        assert_eq!(xy[(0, 0)], c(0.0, 1.0));
        assert_eq!(xy[(1, 1)], c(0.0, -1.0));
        assert_eq!(xy.trace(), c(0.0, 0.0));
        assert_eq!(x.mul(&x), ComplexMatrix::identity(2));
    }

    #[test]
    fn kron_places_left_factor_in_high_bits() {
        let a = ComplexMatrix::from_diagonal(&[1.0, 2.0]);
        let b = ComplexMatrix::from_diagonal(&[3.0, 5.0]);
        let k = a.kron(&b);
        assert_eq!(k[(0, 0)], c(3.0, 0.0));
        assert_eq!(k[(1, 1)], c(5.0, 0.0));
        assert_eq!(k[(2, 2)], c(6.0, 0.0));
        assert_eq!(k[(3, 3)], c(10.0, 0.0));
    }

    #[test]
    fn dagger_conjugates_and_transposes() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 3.0)],
            vec![c(0.0, -1.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let d = m.dagger();
        assert_eq!(d[(0, 1)], c(0.0, 1.0));
        assert_eq!(d[(1, 0)], c(2.0, -3.0));
    }

    #[test]
    fn hermiticity_deviation_detects_asymmetry() {
        let mut m = ComplexMatrix::identity(2);
        assert_eq!(m.hermiticity_deviation(), 0.0);
        m[(0, 1)] = c(0.0, 1e-3);
        assert!((m.hermiticity_deviation() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0)]];
        assert!(ComplexMatrix::from_rows(rows).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.5, 0.0), c(0.0, -0.5)],
            vec![c(0.0, 0.5), c(0.5, 0.0)],
        ])
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_rejects_ragged_input() {
        let text = "[[[1,0],[0,0]],[[0,0]]]";
        assert!(serde_json::from_str::<ComplexMatrix>(text).is_err());
    }
}
