use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactla::field::{Field, FieldElement};

/// Dense row-major matrix over a runtime field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.field.element(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

/// Row-reduced echelon form together with the pivot column of each nonzero row.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Builds from nested rows; an empty outer list gives a `0 x cols` matrix.
    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { field: field.clone(), rows: n, cols, data })
    }

    pub fn from_i64_rows(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| field.from_i64(v))
            })
            .collect();
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn random<R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Rejection-samples an invertible matrix, giving up after `budget` draws.
    pub fn random_invertible<R: Rng + ?Sized>(
        field: &F,
        n: usize,
        rng: &mut R,
        budget: usize,
    ) -> Result<Self> {
        for _ in 0..budget {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return Ok(m);
            }
        }
        Err(Error::RetryBudget)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn elements(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| self.field.element(e)).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other.get(k, j));
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &prod);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch("matrix sum of different shapes".into()));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Side-by-side concatenation; all blocks need the same row count.
    pub fn hcat(field: &F, rows: usize, blocks: &[&Self]) -> Result<Self> {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut offset = 0;
        for b in blocks {
            if b.rows != rows {
                return Err(Error::DimensionMismatch(format!(
                    "hcat block has {} rows, expected {rows}",
                    b.rows
                )));
            }
            out.paste(b, 0, offset);
            offset += b.cols;
        }
        Ok(out)
    }

    /// Stacked concatenation; all blocks need the same column count.
    pub fn vcat(field: &F, cols: usize, blocks: &[&Self]) -> Result<Self> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut offset = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch(format!(
                    "vcat block has {} columns, expected {cols}",
                    b.cols
                )));
            }
            out.paste(b, offset, 0);
            offset += b.rows;
        }
        Ok(out)
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn paste(&mut self, block: &Self, row: usize, col: usize) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        Matrix { field: self.field.clone(), rows: rows.len(), cols: cols.len(), data }
    }

    pub fn rref(&self) -> Echelon<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&i| !f.is_zero(m.get(i, col))) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = f.inv(m.get(lead, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                let v = f.mul(m.get(lead, j), &inv);
                m.set(lead, j, v);
            }
            for i in 0..m.rows {
                if i == lead {
                    continue;
                }
                let factor = m.get(i, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(lead, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            lead += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// Rank by forward elimination only (cheaper than a full [`Matrix::rref`]).
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| !f.is_zero(m.get(i, col))) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = f.inv(m.get(rank, col)).expect("pivot is nonzero");
            for i in rank + 1..m.rows {
                if f.is_zero(m.get(i, col)) {
                    continue;
                }
                let factor = f.mul(m.get(i, col), &inv);
                for j in col..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(rank, j)));
                    m.set(i, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let Echelon { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(reduced.get(row, free));
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn det(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let f = &self.field;
        let mut m = self.clone();
        let n = m.rows;
        let mut acc = f.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !f.is_zero(m.get(i, col))) else {
                return Ok(f.zero());
            };
            if p != col {
                m.swap_rows(col, p);
                acc = f.neg(&acc);
            }
            let pivot = m.get(col, col).clone();
            acc = f.mul(&acc, &pivot);
            let inv = f.inv(&pivot).expect("pivot is nonzero");
            for i in col + 1..n {
                if f.is_zero(m.get(i, col)) {
                    continue;
                }
                let factor = f.mul(m.get(i, col), &inv);
                for j in col..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<Option<Self>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let f = &self.field;
        if n == 0 {
            return Ok(Some(self.clone()));
        }
        let aug = Self::hcat(f, n, &[self, &Self::identity(f, n)])?;
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Ok(None);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(Some(reduced.submatrix(&rows, &cols)))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}
