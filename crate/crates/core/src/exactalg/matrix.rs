//! Dense matrices over a run-time tagged field.

use num_traits::{One, Zero};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use super::echelon::{kernel_from_echelon, rref, SparseRow};
use super::{binomial, Field, Rational, Scalar, ScalarField};
use crate::error::{Error, Result};

/// Row-major matrix whose entries all live in `field`.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: ScalarField,
    data: Vec<Scalar>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    /// Builds a matrix, coercing every entry into `field`.
    pub fn new(rows: usize, cols: usize, field: ScalarField, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {}x{} matrix", data.len(), rows, cols)));
        }
        for x in &data {
            if x.field().join(&field).as_ref() != Some(&field) {
                return Err(Error::FieldMismatch(format!("entry {} does not lie in {}", x, field)));
            }
        }
        let data = data.iter().map(|x| x.coerce(&field)).collect();
        Ok(DenseMatrix { rows, cols, field, data })
    }

    pub fn zeros(field: &ScalarField, rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, field: field.clone(), data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &ScalarField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Rational matrix from integer rows.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| Scalar::from(x))).collect();
        DenseMatrix { rows: r, cols: c, field: ScalarField::Rational, data }
    }

    /// Matrix with the given columns.
    pub fn from_columns(field: &ScalarField, nrows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.coerce(field);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v.coerce(&self.field);
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let field = self.field.join(&o.field).ok_or_else(|| Error::FieldMismatch("matrix product".into()))?;
        let mut out = Self::zeros(&field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_elt() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero_elt() {
                        let idx = i * o.cols + j;
                        out.data[idx] = out.data[idx].fadd(&a.fmul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Dimension("matrix difference".into()));
        }
        let field = self.field.join(&o.field).ok_or_else(|| Error::FieldMismatch("matrix difference".into()))?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.fsub(b).coerce(&field)).collect();
        Ok(DenseMatrix { rows: self.rows, cols: self.cols, field, data })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let field = self.field.join(&s.field()).expect("scalar field");
        let data = self.data.iter().map(|a| a.fmul(s).coerce(&field)).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, field, data }
    }

    pub fn trace(&self) -> Scalar {
        let n = self.rows.min(self.cols);
        (0..n).fold(self.field.zero(), |acc, i| acc.fadd(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elt())
    }

    /// Rows as sparse vectors.
    pub fn sparse_rows(&self) -> Vec<SparseRow<Scalar>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero_elt())
                    .map(|(c, x)| (c, x.clone()))
                    .collect()
            })
            .collect()
    }

    /// Rank over an exact field.
    pub fn rank(&self) -> Result<usize> {
        if !self.field.is_exact() {
            return Err(Error::InexactField);
        }
        Ok(rref(self.sparse_rows(), self.cols).rank())
    }
}

/// Basis of the right null space, as columns in reduced column-echelon form.
pub fn kernel_basis(m: &DenseMatrix) -> Result<DenseMatrix> {
    if !m.field.is_exact() {
        return Err(Error::InexactField);
    }
    let ech = rref(m.sparse_rows(), m.cols);
    let vecs = kernel_from_echelon(&ech, &m.field);
    let cols: Vec<Vec<Scalar>> = vecs
        .into_iter()
        .map(|v| {
            let mut d = vec![m.field.zero(); m.cols];
            for (c, x) in v {
                d[c] = x;
            }
            d
        })
        .collect();
    Ok(DenseMatrix::from_columns(&m.field, m.cols, &cols))
}

/// Basis of ker(m − λ·I).
pub fn eigen_kernel(m: &DenseMatrix, lam: &Scalar) -> Result<DenseMatrix> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("eigen_kernel needs a square matrix, got {}x{}", m.rows, m.cols)));
    }
    let field = m.field.join(&lam.field()).ok_or_else(|| Error::FieldMismatch("eigenvalue field".into()))?;
    let shifted = m.sub(&DenseMatrix::identity(&field, m.rows).scale(lam))?;
    kernel_basis(&shifted)
}

/// B_n with B₁ = −1/2.
pub fn bernoulli(n: usize) -> Rational {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= n {
        let m = b.len();
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += binomial(m as u64 + 1, j as u64) * bj;
        }
        let next = -acc / Rational::from_integer((m as i64 + 1).into());
        b.push(next);
    }
    b[n].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn kernels_of_small_matrices() {
        let id = DenseMatrix::identity(&ScalarField::Rational, 3);
        assert_eq!(kernel_basis(&id).unwrap().ncols(), 0);
        let k = kernel_basis(&DenseMatrix::from_i64(&[vec![1, -1]])).unwrap();
        assert_eq!(k.column(0), vec![Scalar::from(1), Scalar::from(1)]);
    }

    #[test]
    fn eigen_kernels() {
        let m = DenseMatrix::from_i64(&[vec![2, 0], vec![0, 3]]);
        let k = eigen_kernel(&m, &Scalar::from(2)).unwrap();
        assert_eq!(k.ncols(), 1);
        assert_eq!(k.column(0), vec![Scalar::from(1), Scalar::from(0)]);
        let z = DenseMatrix::zeros(&ScalarField::Rational, 2, 2);
        assert_eq!(eigen_kernel(&z, &Scalar::from(1)).unwrap().ncols(), 0);
        let r = DenseMatrix::from_i64(&[vec![1, 2, 3]]);
        assert!(eigen_kernel(&r, &Scalar::from(1)).is_err());
    }

    #[test]
    fn complex_entries_are_rejected() {
        let m = DenseMatrix::zeros(&ScalarField::Complex, 2, 2);
        assert!(matches!(kernel_basis(&m), Err(Error::InexactField)));
    }

    /// Independent oracle: B_n from the Akiyama–Tanigawa algorithm (gives B₁ = +1/2).
    fn akiyama_tanigawa(n: usize) -> Rational {
        let mut a: Vec<Rational> = Vec::new();
        for m in 0..=n {
            a.push(rat(1, m as i64 + 1));
            for j in (1..=m).rev() {
                a[j - 1] = int(j as i64) * (&a[j - 1] - &a[j]);
            }
        }
        if n == 1 {
            -a[0].clone()
        } else {
            a[0].clone()
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(6), rat(1, 42));
        assert_eq!(bernoulli(8), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        for n in 0..30 {
            assert_eq!(bernoulli(n), akiyama_tanigawa(n), "B_{n}");
        }
    }

    proptest! {
        #[test]
        fn odd_bernoulli_vanish(n in 1usize..40) {
            prop_assert!(bernoulli(2 * n + 1).is_zero());
        }

        #[test]
        fn kernel_annihilates_and_is_deterministic(entries in proptest::collection::vec(-4i64..5, 12)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let m = DenseMatrix::from_i64(&rows);
            let k = kernel_basis(&m).unwrap();
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(m.rank().unwrap() + k.ncols(), 4);
            prop_assert_eq!(kernel_basis(&m).unwrap(), k);
        }
    }
}
