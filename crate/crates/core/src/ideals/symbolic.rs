use std::collections::HashMap;

use rayon::prelude::*;

use crate::ideals::poly::{Polynomial, Var};
use crate::quiver::{DimensionVector, Quiver};

/// A matrix of polynomials, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl SymbolicMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SymbolicMatrix { rows, cols, entries: vec![Polynomial::zero(); rows * cols] }
    }

    /// The generic matrix `X_a` of an arrow: entry `(i, j)` is the variable `x_{a,i,j}`.
    pub fn generic(quiver: &Quiver, d: &DimensionVector, arrow: usize) -> Self {
        let a = quiver.arrow(arrow);
        let (rows, cols) = (d[a.head], d[a.tail]);
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| Polynomial::var(Var::new(arrow, i, j))))
            .collect();
        SymbolicMatrix { rows, cols, entries }
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

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn hcat(rows: usize, blocks: &[SymbolicMatrix]) -> Self {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hcat row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.entries[i * cols + off + j] = b.get(i, j).clone();
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn vcat(cols: usize, blocks: &[SymbolicMatrix]) -> Self {
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vcat column mismatch");
            entries.extend(b.entries.iter().cloned());
            rows += b.rows;
        }
        SymbolicMatrix { rows, cols, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> Polynomial {
        (0..self.rows.min(self.cols)).fold(Polynomial::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Determinant of the square submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        assert_eq!(rows.len(), cols.len());
        let mut memo = HashMap::new();
        let mask = cols.iter().fold(0u64, |m, &c| m | (1 << c));
        self.laplace(rows, mask, &mut memo)
    }

    /// Expands along `rows[0]`; sub-determinants are memoized by column set.
    fn laplace(&self, rows: &[usize], mask: u64, memo: &mut HashMap<u64, Polynomial>) -> Polynomial {
        if rows.is_empty() {
            return Polynomial::constant(num_rational::BigRational::from_integer(1.into()));
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let r = rows[0];
        let mut acc = Polynomial::zero();
        let mut sign_neg = false;
        for c in 0..self.cols {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = self.get(r, c);
            if !entry.is_zero() {
                let sub = self.laplace(&rows[1..], mask & !(1 << c), memo);
                if !sub.is_zero() {
                    let term = entry.mul(&sub);
                    acc = if sign_neg { acc.sub(&term) } else { acc.add(&term) };
                }
            }
            sign_neg = !sign_neg;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// All `k x k` minors, row subsets outer and column subsets inner, both
    /// in lexicographic order. Empty when `k` exceeds either dimension.
    pub fn minors(&self, k: usize) -> Vec<Polynomial> {
        if k == 0 || k > self.rows || k > self.cols {
            return Vec::new();
        }
        assert!(self.cols <= 64, "minor enumeration supports at most 64 columns");
        let row_sets = subsets(self.rows, k);
        let col_sets = subsets(self.cols, k);
        row_sets
            .par_iter()
            .flat_map_iter(|rs| {
                // One memo per row set: sub-determinants depend on the trailing rows only.
                let mut memo = HashMap::new();
                col_sets
                    .iter()
                    .map(|cs| {
                        let mask = cs.iter().fold(0u64, |m, &c| m | (1 << c));
                        self.laplace(rs, mask, &mut memo)
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

/// `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `H_x`: the generic matrices of arrows ending at `x`, side by side.
pub fn build_h(quiver: &Quiver, d: &DimensionVector, x: usize) -> SymbolicMatrix {
    let blocks: Vec<_> =
        quiver.in_arrows(x).into_iter().map(|a| SymbolicMatrix::generic(quiver, d, a)).collect();
    SymbolicMatrix::hcat(d[x], &blocks)
}

/// `T_x`: the generic matrices of arrows starting at `x`, stacked.
pub fn build_t(quiver: &Quiver, d: &DimensionVector, x: usize) -> SymbolicMatrix {
    let blocks: Vec<_> =
        quiver.out_arrows(x).into_iter().map(|a| SymbolicMatrix::generic(quiver, d, a)).collect();
    SymbolicMatrix::vcat(d[x], &blocks)
}
