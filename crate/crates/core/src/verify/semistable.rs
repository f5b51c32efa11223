use crate::error::{Error, Result};
use crate::exactla::{Field, PrimeField};
use crate::ideals::subsets;
use crate::quiver::{DimensionVector, Quiver, Representation};
use crate::verify::oracle::SmallField;

/// Largest total dimension the subspace enumeration accepts.
pub const SEMISTABLE_DIM_BOUND: usize = 6;

/// A subspace of `F_q^n`, with vectors coded as base-`q` integers
/// (coordinate `i` is digit `i`).
#[derive(Debug, Clone)]
struct Subspace {
    dim: usize,
    basis: Vec<usize>,
    members: Vec<bool>,
}

fn encode(v: &[u32], q: u32) -> usize {
    v.iter().rev().fold(0usize, |acc, &c| acc * q as usize + c as usize)
}

/// Every subspace of `F_q^n` exactly once, one per reduced echelon form.
fn all_subspaces(n: usize, q: u32) -> Vec<Subspace> {
    let size = (q as usize).pow(n as u32);
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in subsets(n, k) {
            // Free slots: row i, column j > pivots[i], j not a pivot.
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| {
                    let pivots = &pivots;
                    (pivots[i] + 1..n).filter(move |j| !pivots.contains(j)).map(move |j| (i, j))
                })
                .collect();
            let mut vals = vec![0u32; free.len()];
            loop {
                let mut rows = vec![vec![0u32; n]; k];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = 1;
                }
                for (&(i, j), &v) in free.iter().zip(&vals) {
                    rows[i][j] = v;
                }
                let mut members = vec![false; size];
                let mut coeffs = vec![0u32; k];
                loop {
                    let mut v = vec![0u32; n];
                    for (c, row) in coeffs.iter().zip(&rows) {
                        for j in 0..n {
                            v[j] = (v[j] + c * row[j]) % q;
                        }
                    }
                    members[encode(&v, q)] = true;
                    if !crate::verify::oracle::odometer(&mut coeffs, q) {
                        break;
                    }
                }
                out.push(Subspace { dim: k, basis: rows.iter().map(|r| encode(r, q)).collect(), members });
                if !crate::verify::oracle::odometer(&mut vals, q) {
                    break;
                }
            }
        }
    }
    out
}

/// Subrepresentation enumeration for a fixed dimension vector over `F_q`.
#[derive(Debug, Clone)]
pub struct SemistabilityChecker {
    q: u32,
    dims: DimensionVector,
    subspaces: Vec<Vec<Subspace>>,
}

impl SemistabilityChecker {
    pub fn new(q: u64, dims: &DimensionVector) -> Result<Self> {
        let field = SmallField::new(q, 3)?;
        if dims.total() > SEMISTABLE_DIM_BOUND {
            return Err(Error::BoundExceeded(format!(
                "total dimension {} exceeds {SEMISTABLE_DIM_BOUND}",
                dims.total()
            )));
        }
        let subspaces = dims.entries().iter().map(|&n| all_subspaces(n, field.0)).collect();
        Ok(SemistabilityChecker { q: field.0, dims: dims.clone(), subspaces })
    }

    /// Number of subspace tuples visited per check.
    pub fn tuple_count(&self) -> usize {
        self.subspaces.iter().map(Vec::len).product()
    }

    /// `x` holds the arrow matrices row-major in arrow order.
    pub fn check_flat(&self, quiver: &Quiver, x: &[u32], theta: &[i64], stable: bool) -> Result<bool> {
        let d = &self.dims;
        let total: i64 = (0..d.len()).map(|v| theta[v] * d[v] as i64).sum();
        if total != 0 {
            return Err(Error::WeightNotBalanced(total));
        }
        let q = self.q as usize;
        // Image tables: code of a vector at the tail -> code of its image.
        let mut images = Vec::with_capacity(quiver.arrow_count());
        let mut off = 0;
        for a in quiver.arrows() {
            let (rows, cols) = (d[a.head], d[a.tail]);
            let m = &x[off..off + rows * cols];
            off += rows * cols;
            let table: Vec<usize> = (0..q.pow(cols as u32))
                .map(|code| {
                    let mut v = vec![0u32; cols];
                    let mut c = code;
                    for e in v.iter_mut() {
                        *e = (c % q) as u32;
                        c /= q;
                    }
                    let img: Vec<u32> = (0..rows)
                        .map(|i| (0..cols).map(|j| m[i * cols + j] * v[j]).sum::<u32>() % self.q)
                        .collect();
                    encode(&img, self.q)
                })
                .collect();
            images.push(table);
        }
        let n = d.len();
        let full: usize = d.total();
        let mut idx = vec![0usize; n];
        loop {
            let subs: Vec<&Subspace> = (0..n).map(|v| &self.subspaces[v][idx[v]]).collect();
            let closed = quiver.arrows().iter().enumerate().all(|(ai, a)| {
                subs[a.tail].basis.iter().all(|&b| subs[a.head].members[images[ai][b]])
            });
            if closed {
                let dim: usize = subs.iter().map(|s| s.dim).sum();
                let w: i64 = (0..n).map(|v| theta[v] * subs[v].dim as i64).sum();
                let proper = dim != 0 && dim != full;
                if w > 0 || (stable && proper && w >= 0) {
                    return Ok(false);
                }
            }
            let mut v = 0;
            loop {
                if v == n {
                    return Ok(true);
                }
                idx[v] += 1;
                if idx[v] < self.subspaces[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }
}

/// Brute-force theta-(semi)stability over a field with at most three elements:
/// every subrepresentation `N` must satisfy `theta . dim N <= 0` (`< 0` for
/// proper nonzero `N` when `stable`).
pub fn is_semistable_bruteforce(
    quiver: &Quiver,
    m: &Representation<PrimeField>,
    theta: &[i64],
    stable: bool,
) -> Result<bool> {
    if theta.len() != quiver.vertex_count() {
        return Err(Error::DimensionMismatch("weight has the wrong number of entries".into()));
    }
    let checker = SemistabilityChecker::new(m.field().modulus(), m.dims())?;
    let x: Vec<u32> = m.matrices().iter().flat_map(|a| a.data().iter().map(|&v| v as u32)).collect();
    checker.check_flat(quiver, &x, theta, stable)
}

/// Converts a flat small-field vector back to a representation.
pub(crate) fn representation_from_flat(
    quiver: &Quiver,
    field: &PrimeField,
    dims: &DimensionVector,
    x: &[u32],
) -> Representation<PrimeField> {
    let mut off = 0;
    let matrices = quiver
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.head], dims[a.tail]);
            let data = x[off..off + r * c].iter().map(|&v| field.from_i64(v as i64)).collect();
            off += r * c;
            crate::exactla::Matrix::from_vec(field, r, c, data).expect("length r*c")
        })
        .collect();
    Representation::new(quiver, field, dims.clone(), matrices).expect("shapes follow the dimension vector")
}
