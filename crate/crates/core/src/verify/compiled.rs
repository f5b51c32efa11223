use crate::error::Result;
use crate::exactla::{Field, Matrix};
use crate::ideals::{Polynomial, Var};
use crate::quiver::{DimensionVector, Quiver, Representation};

/// Flat indexing of the ambient variables of `rep_Q(d)`.
#[derive(Debug, Clone)]
pub struct VarIndex {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    total: usize,
}

impl VarIndex {
    pub fn new(quiver: &Quiver, d: &DimensionVector) -> Self {
        let mut offsets = Vec::with_capacity(quiver.arrow_count());
        let mut cols = Vec::with_capacity(quiver.arrow_count());
        let mut total = 0;
        for a in quiver.arrows() {
            offsets.push(total);
            cols.push(d[a.tail]);
            total += d[a.head] * d[a.tail];
        }
        VarIndex { offsets, cols, total }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn index(&self, v: Var) -> usize {
        self.offsets[v.arrow] + v.row * self.cols[v.arrow] + v.col
    }

    /// All matrix entries of `m` in variable order.
    pub fn flatten<F: Field>(&self, m: &Representation<F>) -> Vec<F::Elem> {
        m.matrices().iter().flat_map(|x| x.data().iter().cloned()).collect()
    }
}

type Term<E> = (E, Vec<usize>);

/// Polynomials with coefficients mapped into a field and variables replaced
/// by flat indices, for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledSet<F: Field> {
    field: F,
    polys: Vec<Vec<Term<F::Elem>>>,
}

fn compile_one<F: Field>(field: &F, index: &VarIndex, p: &Polynomial) -> Result<Vec<Term<F::Elem>>> {
    p.terms()
        .map(|(m, c)| Ok((field.from_rational(c)?, m.vars().iter().map(|&v| index.index(v)).collect())))
        .collect()
}

impl<F: Field> CompiledSet<F> {
    pub fn new<'a>(
        field: &F,
        index: &VarIndex,
        polys: impl IntoIterator<Item = &'a Polynomial>,
    ) -> Result<Self> {
        let polys = polys.into_iter().map(|p| compile_one(field, index, p)).collect::<Result<_>>()?;
        Ok(CompiledSet { field: field.clone(), polys })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn eval(&self, i: usize, point: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (c, vars) in &self.polys[i] {
            let mut t = c.clone();
            for &v in vars {
                t = f.mul(&t, &point[v]);
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Index of the first polynomial not vanishing at `point`.
    pub fn first_nonzero(&self, point: &[F::Elem]) -> Option<usize> {
        (0..self.polys.len()).find(|&i| !self.field.is_zero(&self.eval(i, point)))
    }
}

/// The Jacobian matrix of a polynomial list, compiled once and evaluated at
/// many points.
#[derive(Debug, Clone)]
pub struct CompiledJacobian<F: Field> {
    field: F,
    cols: usize,
    // (row, column, derivative)
    entries: Vec<(usize, usize, Vec<Term<F::Elem>>)>,
    rows: usize,
}

impl<F: Field> CompiledJacobian<F> {
    pub fn new<'a>(
        field: &F,
        index: &VarIndex,
        polys: impl IntoIterator<Item = &'a Polynomial>,
    ) -> Result<Self> {
        let mut entries = Vec::new();
        let mut rows = 0;
        for (i, p) in polys.into_iter().enumerate() {
            rows = i + 1;
            for v in p.variables() {
                let dp = p.derivative(v);
                if !dp.is_zero() {
                    entries.push((i, index.index(v), compile_one(field, index, &dp)?));
                }
            }
        }
        Ok(CompiledJacobian { field: field.clone(), cols: index.len(), entries, rows })
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> Matrix<F> {
        let f = &self.field;
        let mut m = Matrix::zeros(f, self.rows, self.cols);
        for (i, j, terms) in &self.entries {
            let mut acc = f.zero();
            for (c, vars) in terms {
                let mut t = c.clone();
                for &v in vars {
                    t = f.mul(&t, &point[v]);
                }
                acc = f.add(&acc, &t);
            }
            m.set(*i, *j, acc);
        }
        m
    }

    pub fn rank_at(&self, point: &[F::Elem]) -> usize {
        if self.rows == 0 {
            return 0;
        }
        self.evaluate(point).rank()
    }
}
