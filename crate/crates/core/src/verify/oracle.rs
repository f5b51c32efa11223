use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::components::{is_nonempty, rank_box, RankSequence};
use crate::error::{Error, Result};
use crate::exactla::is_prime;
use crate::quiver::{AlgebraPresentation, DimensionVector};

/// Largest ambient dimension the enumeration accepts.
pub const ORACLE_AMBIENT_BOUND: usize = 16;

/// Row-major matrices over `F_q` with `q` tiny, as plain integers.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SmallField(pub u32);

impl SmallField {
    pub(crate) fn new(q: u64, max: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q > max {
            return Err(Error::BoundExceeded(format!("field size {q} exceeds {max}")));
        }
        Ok(SmallField(q as u32))
    }

    pub(crate) fn inv(&self, a: u32) -> u32 {
        (1..self.0).find(|b| a * b % self.0 == 1).expect("nonzero element")
    }

    /// Rank by Gaussian elimination; destroys `m`.
    pub(crate) fn rank(&self, m: &mut [u32], rows: usize, cols: usize) -> usize {
        let q = self.0;
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&i| m[i * cols + c] != 0) else { continue };
            for j in 0..cols {
                m.swap(rank * cols + j, p * cols + j);
            }
            let inv = self.inv(m[rank * cols + c]);
            for i in rank + 1..rows {
                let f = m[i * cols + c] * inv % q;
                if f != 0 {
                    for j in c..cols {
                        m[i * cols + j] = (m[i * cols + j] + (q - f) * m[rank * cols + j]) % q;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

/// Layout of a representation of `Q` at `d` as one flat vector.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub offsets: Vec<usize>,
    pub shapes: Vec<(usize, usize)>,
    pub total: usize,
}

impl Layout {
    pub(crate) fn new(algebra: &AlgebraPresentation, d: &DimensionVector) -> Self {
        let mut offsets = Vec::new();
        let mut shapes = Vec::new();
        let mut total = 0;
        for a in algebra.quiver().arrows() {
            offsets.push(total);
            shapes.push((d[a.head], d[a.tail]));
            total += d[a.head] * d[a.tail];
        }
        Layout { offsets, shapes, total }
    }

    /// `M_path[last] ... M_path[0]` vanishes.
    pub(crate) fn kills(&self, field: SmallField, x: &[u32], path: &[usize]) -> bool {
        let q = field.0;
        let (mut rows, cols) = self.shapes[path[0]];
        let mut cur: Vec<u32> = x[self.offsets[path[0]]..self.offsets[path[0]] + rows * cols].to_vec();
        for &b in &path[1..] {
            let (br, bc) = self.shapes[b];
            debug_assert_eq!(bc, rows);
            let off = self.offsets[b];
            let mut next = vec![0u32; br * cols];
            for i in 0..br {
                for k in 0..bc {
                    let v = x[off + i * bc + k];
                    if v != 0 {
                        for j in 0..cols {
                            next[i * cols + j] = (next[i * cols + j] + v * cur[k * cols + j]) % q;
                        }
                    }
                }
            }
            cur = next;
            rows = br;
        }
        cur.iter().all(|&v| v == 0)
    }

    /// Rank of `h_x`: the matrices of arrows into `x`, side by side.
    pub(crate) fn h_rank(&self, field: SmallField, algebra: &AlgebraPresentation, d: &DimensionVector, x: &[u32], v: usize) -> usize {
        let ins = algebra.quiver().in_arrows(v);
        let rows = d[v];
        let cols: usize = ins.iter().map(|&a| self.shapes[a].1).sum();
        if rows == 0 || cols == 0 {
            return 0;
        }
        let mut m = vec![0u32; rows * cols];
        let mut c0 = 0;
        for &a in &ins {
            let (r, c) = self.shapes[a];
            for i in 0..r {
                for j in 0..c {
                    m[i * cols + c0 + j] = x[self.offsets[a] + i * c + j];
                }
            }
            c0 += c;
        }
        field.rank(&mut m, rows, cols)
    }
}

/// Advances `x` to the next vector of `F_q^n` in odometer order; false after the last.
pub(crate) fn odometer(x: &mut [u32], q: u32) -> bool {
    for v in x.iter_mut() {
        *v += 1;
        if *v < q {
            return true;
        }
        *v = 0;
    }
    false
}

/// Calls `visit` on every representation over `F_q` satisfying the relations.
pub(crate) fn for_each_representation(
    algebra: &AlgebraPresentation,
    layout: &Layout,
    field: SmallField,
    mut visit: impl FnMut(&[u32]),
) {
    let relations = algebra.relation_paths();
    let mut x = vec![0u32; layout.total];
    loop {
        if relations.iter().all(|p| layout.kills(field, &x, p)) {
            visit(&x);
        }
        if !odometer(&mut x, field.0) {
            break;
        }
    }
}

/// Brute-force comparison of achievable rank vectors with the u-criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub instance: String,
    pub q: u64,
    pub achievable: BTreeSet<Vec<usize>>,
    pub predicted: BTreeSet<Vec<usize>>,
    pub agreement: bool,
    pub counterexamples: Vec<String>,
}

impl OracleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "instance": self.instance,
            "q": self.q,
            "achievable": self.achievable,
            "predicted": self.predicted,
            "agreement": self.agreement,
            "counterexamples": self.counterexamples,
        })
    }
}

/// Enumerates every representation of a radical square zero algebra at `d`
/// over `F_q` and collects the rank vectors `(rank h_x)_x`.
pub fn achievable_rank_oracle(algebra: &AlgebraPresentation, d: &DimensionVector, q: u64) -> Result<OracleReport> {
    if !algebra.is_rad_square_zero() {
        return Err(Error::NotRadicalSquareZero);
    }
    let quiver = algebra.quiver();
    d.check_domain(quiver)?;
    let field = SmallField::new(q, 3)?;
    let layout = Layout::new(algebra, d);
    if layout.total > ORACLE_AMBIENT_BOUND {
        return Err(Error::BoundExceeded(format!(
            "ambient dimension {} exceeds {ORACLE_AMBIENT_BOUND}",
            layout.total
        )));
    }
    let n = quiver.vertex_count();
    let mut achievable = BTreeSet::new();
    for_each_representation(algebra, &layout, field, |x| {
        achievable.insert((0..n).map(|v| layout.h_rank(field, algebra, d, x, v)).collect::<Vec<_>>());
    });
    let predicted: BTreeSet<Vec<usize>> = rank_box(d)
        .into_iter()
        .filter(|r| is_nonempty(quiver, &RankSequence::new(quiver, d.clone(), r.clone()).expect("r <= d")))
        .map(|r| r.0)
        .collect();
    let counterexamples: Vec<String> = achievable
        .symmetric_difference(&predicted)
        .map(|r| {
            let which = if achievable.contains(r) { "achieved but predicted empty" } else { "predicted but not achieved" };
            format!("{}: {which}", DimensionVector(r.clone()).format(quiver))
        })
        .collect();
    Ok(OracleReport {
        instance: format!("{} at {}", describe(algebra), d.format(quiver)),
        q,
        agreement: counterexamples.is_empty(),
        achievable,
        predicted,
        counterexamples,
    })
}

/// Short text form of a quiver: `1->2:a, 2->2:b`.
pub fn describe(algebra: &AlgebraPresentation) -> String {
    let q = algebra.quiver();
    let arrows: Vec<String> = q
        .arrows()
        .iter()
        .map(|a| format!("{}->{}:{}", q.vertex_name(a.tail), q.vertex_name(a.head), a.id))
        .collect();
    format!("Q[{}]({})", q.vertices().join(","), arrows.join(", "))
}
