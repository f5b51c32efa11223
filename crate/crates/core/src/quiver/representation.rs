use num_traits::ToPrimitive;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactla::{
    format_rational, parse_rational, Field, FieldElement, FieldKind, Matrix, PrimeField, Rationals,
};
use crate::quiver::{AlgebraPresentation, DimensionVector, Quiver};

/// A point of the representation space: one `d(head) x d(tail)` matrix per arrow.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<F: Field> {
    field: F,
    dims: DimensionVector,
    matrices: Vec<Matrix<F>>,
}

impl<F: Field> Representation<F> {
    pub fn new(quiver: &Quiver, field: &F, dims: DimensionVector, matrices: Vec<Matrix<F>>) -> Result<Self> {
        dims.check_domain(quiver)?;
        if matrices.len() != quiver.arrow_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} arrows",
                matrices.len(),
                quiver.arrow_count()
            )));
        }
        for (a, m) in quiver.arrows().iter().zip(&matrices) {
            let want = (dims[a.head], dims[a.tail]);
            if m.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "arrow `{}` carries a {}x{} matrix, expected {}x{}",
                    a.id, m.rows(), m.cols(), want.0, want.1
                )));
            }
        }
        Ok(Representation { field: field.clone(), dims, matrices })
    }

    pub fn zero(quiver: &Quiver, field: &F, dims: DimensionVector) -> Self {
        let matrices = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(field, dims[a.head], dims[a.tail]))
            .collect();
        Representation { field: field.clone(), dims, matrices }
    }

    /// Independent uniform entries; ignores relations.
    pub fn random<R: Rng + ?Sized>(quiver: &Quiver, field: &F, dims: DimensionVector, rng: &mut R) -> Self {
        let matrices = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::random(field, dims[a.head], dims[a.tail], rng))
            .collect();
        Representation { field: field.clone(), dims, matrices }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }
    pub fn matrix(&self, a: usize) -> &Matrix<F> {
        &self.matrices[a]
    }
    pub fn matrices(&self) -> &[Matrix<F>] {
        &self.matrices
    }

    /// `M_{a_k} ... M_{a_1}` for the path `[a_1, ..., a_k]`.
    pub fn path_product(&self, path: &[usize]) -> Result<Matrix<F>> {
        let (first, rest) = path
            .split_first()
            .ok_or_else(|| Error::Malformed("empty path".into()))?;
        rest.iter().try_fold(self.matrices[*first].clone(), |acc, &a| self.matrices[a].mul(&acc))
    }

    /// Fails with the first violated relation path.
    pub fn check_relations(&self, algebra: &AlgebraPresentation) -> Result<()> {
        for path in algebra.relation_paths() {
            if !self.path_product(&path)?.is_zero() {
                return Err(Error::RelationViolated(algebra.path_names(&path)));
            }
        }
        Ok(())
    }

    pub fn satisfies(&self, algebra: &AlgebraPresentation) -> bool {
        self.check_relations(algebra).is_ok()
    }

    /// Base change `g . M` with `(g . M)_a = g_{head a} M_a g_{tail a}^{-1}`.
    pub fn act(&self, quiver: &Quiver, g: &[Matrix<F>]) -> Result<Self> {
        if g.len() != quiver.vertex_count() {
            return Err(Error::DimensionMismatch("one group element per vertex".into()));
        }
        let inverses = g
            .iter()
            .map(|m| m.inverse()?.ok_or_else(|| Error::DimensionMismatch("singular base change".into())))
            .collect::<Result<Vec<_>>>()?;
        let matrices = quiver
            .arrows()
            .iter()
            .zip(&self.matrices)
            .map(|(a, m)| g[a.head].mul(m)?.mul(&inverses[a.tail]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Representation { field: self.field.clone(), dims: self.dims.clone(), matrices })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, quiver: &Quiver, other: &Self) -> Self {
        let dims = DimensionVector(
            self.dims.0.iter().zip(&other.dims.0).map(|(a, b)| a + b).collect(),
        );
        let matrices = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut m = Matrix::zeros(&self.field, dims[a.head], dims[a.tail]);
                m.paste(&self.matrices[i], 0, 0);
                m.paste(&other.matrices[i], self.dims[a.head], self.dims[a.tail]);
                m
            })
            .collect();
        Representation { field: self.field.clone(), dims, matrices }
    }

    pub fn to_json(&self, quiver: &Quiver) -> Value {
        let matrices = quiver
            .arrows()
            .iter()
            .zip(&self.matrices)
            .map(|(a, m)| {
                let rows: Vec<Value> = m
                    .elements()
                    .into_iter()
                    .map(|row| Value::Array(row.iter().map(element_to_json).collect()))
                    .collect();
                (a.id.clone(), Value::Array(rows))
            })
            .collect::<serde_json::Map<_, _>>();
        json!({
            "field": self.field.kind().to_string(),
            "dims": self.dims.to_json(quiver),
            "matrices": matrices,
        })
    }
}

fn element_to_json(e: &FieldElement) -> Value {
    match e {
        FieldElement::Residue { value, .. } => Value::from(*value),
        FieldElement::Rational(q) => match (q.is_integer(), q.numer().to_i64()) {
            (true, Some(n)) => Value::from(n),
            _ => Value::from(format_rational(q)),
        },
    }
}

/// Horizontal concatenation of the matrices of arrows ending at `x`.
pub fn h_matrix<F: Field>(quiver: &Quiver, m: &Representation<F>, x: usize) -> Matrix<F> {
    let blocks: Vec<&Matrix<F>> = quiver.in_arrows(x).into_iter().map(|a| m.matrix(a)).collect();
    Matrix::hcat(m.field(), m.dims()[x], &blocks).expect("arrow shapes are validated")
}

/// Vertical stack of the matrices of arrows starting at `x`.
pub fn t_matrix<F: Field>(quiver: &Quiver, m: &Representation<F>, x: usize) -> Matrix<F> {
    let blocks: Vec<&Matrix<F>> = quiver.out_arrows(x).into_iter().map(|a| m.matrix(a)).collect();
    Matrix::vcat(m.field(), m.dims()[x], &blocks).expect("arrow shapes are validated")
}

pub fn x_rank<F: Field>(quiver: &Quiver, m: &Representation<F>, x: usize) -> usize {
    h_matrix(quiver, m, x).rank()
}

/// A representation whose ground field is chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyRepresentation {
    Rational(Representation<Rationals>),
    Prime(Representation<PrimeField>),
}

impl AnyRepresentation {
    pub fn from_json(quiver: &Quiver, value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Malformed("representation must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "field" | "dims" | "matrices") {
                return Err(Error::Malformed(format!("unknown key `{key}`")));
            }
        }
        let kind: FieldKind = obj
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Malformed("missing `field`".into()))?
            .parse()?;
        let dims = DimensionVector::from_json(
            quiver,
            obj.get("dims").ok_or_else(|| Error::Malformed("missing `dims`".into()))?,
        )?;
        let mats = obj
            .get("matrices")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Malformed("missing `matrices`".into()))?;
        match kind {
            FieldKind::Rationals => Ok(AnyRepresentation::Rational(read_matrices(quiver, &Rationals, dims, mats)?)),
            FieldKind::Prime(p) => {
                Ok(AnyRepresentation::Prime(read_matrices(quiver, &PrimeField::new(p)?, dims, mats)?))
            }
        }
    }

    pub fn parse(quiver: &Quiver, text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_json(quiver, &value)
    }

    pub fn to_json(&self, quiver: &Quiver) -> Value {
        match self {
            AnyRepresentation::Rational(m) => m.to_json(quiver),
            AnyRepresentation::Prime(m) => m.to_json(quiver),
        }
    }
}

fn read_matrices<F: Field>(
    quiver: &Quiver,
    field: &F,
    dims: DimensionVector,
    mats: &serde_json::Map<String, Value>,
) -> Result<Representation<F>> {
    for id in mats.keys() {
        quiver.arrow_index(id)?;
    }
    let matrices = quiver
        .arrows()
        .iter()
        .map(|a| {
            let (rows, cols) = (dims[a.head], dims[a.tail]);
            let Some(value) = mats.get(&a.id) else {
                return Err(Error::Malformed(format!("missing matrix for arrow `{}`", a.id)));
            };
            let value_rows = value
                .as_array()
                .ok_or_else(|| Error::Malformed(format!("matrix `{}` must be a list of rows", a.id)))?;
            // A matrix with zero rows cannot record its column count; accept `[]`.
            if value_rows.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "arrow `{}` has {} rows, expected {rows}",
                    a.id,
                    value_rows.len()
                )));
            }
            let mut data = Vec::with_capacity(rows * cols);
            for row in value_rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| Error::Malformed(format!("row of `{}` must be a list", a.id)))?;
                if row.len() != cols {
                    return Err(Error::DimensionMismatch(format!(
                        "arrow `{}` has a row of length {}, expected {cols}",
                        a.id,
                        row.len()
                    )));
                }
                for entry in row {
                    data.push(read_entry(field, entry)?);
                }
            }
            Matrix::from_vec(field, rows, cols, data)
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::new(quiver, field, dims, matrices)
}

fn read_entry<F: Field>(field: &F, v: &Value) -> Result<F::Elem> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(field.from_i64(i)),
            None => Err(Error::Malformed(format!("entry {n} is not an integer"))),
        },
        Value::String(s) => field.from_rational(&parse_rational(s)?),
        other => Err(Error::Malformed(format!("bad matrix entry {other}"))),
    }
}
