//! Rank sequences and the classification of irreducible components of
//! representation varieties of radical square zero algebras.
//!
//! For a rank sequence `r <= d` put `s = d - r` and
//!
//! ```text
//! u_x(r) = sum_{head a = x} s(tail a) - r(x)
//! v_x(r) = sum_{tail a = x} r(head a) - s(x)
//! ```
//!
//! `C_r` is nonempty iff `u_x >= 0` everywhere, and it is an irreducible
//! component iff additionally `v_x >= 0` wherever `u_x` exceeds the number of
//! loops at `x`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::quiver::{t_matrix, AlgebraPresentation, DimensionVector, NodeSplit, Quiver, Representation};

/// A rank sequence `r` together with the dimension vector it bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankSequence {
    d: DimensionVector,
    r: DimensionVector,
}

impl RankSequence {
    pub fn new(quiver: &Quiver, d: DimensionVector, r: DimensionVector) -> Result<Self> {
        d.check_domain(quiver)?;
        r.check_domain(quiver)?;
        for x in 0..d.len() {
            if r[x] > d[x] {
                return Err(Error::RankOutOfRange {
                    vertex: quiver.vertex_name(x).into(),
                    rank: r[x],
                    max: d[x],
                });
            }
        }
        Ok(RankSequence { d, r })
    }

    pub fn zero(d: DimensionVector) -> Self {
        let r = DimensionVector::zeros(d.len());
        RankSequence { d, r }
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.d
    }
    pub fn ranks(&self) -> &DimensionVector {
        &self.r
    }

    /// `s(x) = d(x) - r(x)`.
    pub fn corank(&self, x: usize) -> usize {
        self.d[x] - self.r[x]
    }

    /// `r + e_x`, if still bounded by `d`.
    pub fn incremented(&self, x: usize) -> Option<Self> {
        (self.r[x] < self.d[x]).then(|| {
            let mut r = self.r.clone();
            r[x] += 1;
            RankSequence { d: self.d.clone(), r }
        })
    }
}

pub fn u_value(q: &Quiver, rs: &RankSequence, x: usize) -> i64 {
    let incoming: usize = q.in_arrows(x).into_iter().map(|a| rs.corank(q.arrow(a).tail)).sum();
    incoming as i64 - rs.r[x] as i64
}

pub fn v_value(q: &Quiver, rs: &RankSequence, x: usize) -> i64 {
    let outgoing: usize = q.out_arrows(x).into_iter().map(|a| rs.r[q.arrow(a).head]).sum();
    outgoing as i64 - rs.corank(x) as i64
}

pub fn is_nonempty(q: &Quiver, rs: &RankSequence) -> bool {
    (0..q.vertex_count()).all(|x| u_value(q, rs, x) >= 0)
}

fn require_rad_square_zero(a: &AlgebraPresentation) -> Result<()> {
    if a.is_rad_square_zero() {
        Ok(())
    } else {
        Err(Error::NotRadicalSquareZero)
    }
}

pub fn is_component(a: &AlgebraPresentation, rs: &RankSequence) -> Result<bool> {
    require_rad_square_zero(a)?;
    let q = a.quiver();
    Ok(is_nonempty(q, rs)
        && (0..q.vertex_count())
            .all(|x| u_value(q, rs, x) <= q.loop_count(x) as i64 || v_value(q, rs, x) >= 0))
}

/// `dim C_r = sum_x r(x) s(x) + sum_a s(tail a) r(head a)`.
pub fn component_dimension(q: &Quiver, rs: &RankSequence) -> Result<usize> {
    if !is_nonempty(q, rs) {
        return Err(Error::EmptyStratum);
    }
    let grassmannians: usize = (0..q.vertex_count()).map(|x| rs.r[x] * rs.corank(x)).sum();
    let arrows: usize = q.arrows().iter().map(|a| rs.corank(a.tail) * rs.r[a.head]).sum();
    Ok(grassmannians + arrows)
}

/// All `r` with `0 <= r <= d`, lexicographic with the first vertex most significant.
pub fn rank_box(d: &DimensionVector) -> Vec<DimensionVector> {
    let mut out = vec![DimensionVector::zeros(d.len())];
    for x in 0..d.len() {
        out = out
            .into_iter()
            .flat_map(|r| {
                (0..=d[x]).map(move |v| {
                    let mut r = r.clone();
                    r[x] = v;
                    r
                })
            })
            .collect();
    }
    out.sort();
    out
}

/// The label of `C_r`; geometric flags are carried, not computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRecord {
    pub ranks: RankSequence,
    pub nonempty: bool,
    pub dimension: Option<usize>,
    pub is_component: bool,
    pub normal: bool,
    pub rational_singularities: bool,
}

impl ComponentRecord {
    pub fn classify(a: &AlgebraPresentation, rs: RankSequence) -> Result<Self> {
        let q = a.quiver();
        let nonempty = is_nonempty(q, &rs);
        let is_component = is_component(a, &rs)?;
        let dimension = if nonempty { Some(component_dimension(q, &rs)?) } else { None };
        Ok(ComponentRecord {
            ranks: rs,
            nonempty,
            dimension,
            is_component,
            normal: true,
            rational_singularities: true,
        })
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        json!({
            "r": self.ranks.r.to_json(q),
            "nonempty": self.nonempty,
            "dimension": self.dimension,
            "is_component": self.is_component,
            "normal": self.normal,
            "rational_singularities": self.rational_singularities,
        })
    }
}

/// Every rank sequence in the box, classified.
pub fn classify_all(a: &AlgebraPresentation, d: &DimensionVector) -> Result<Vec<ComponentRecord>> {
    require_rad_square_zero(a)?;
    d.check_domain(a.quiver())?;
    rank_box(d)
        .into_iter()
        .map(|r| ComponentRecord::classify(a, RankSequence { d: d.clone(), r }))
        .collect()
}

pub fn enumerate_components(a: &AlgebraPresentation, d: &DimensionVector) -> Result<Vec<ComponentRecord>> {
    Ok(classify_all(a, d)?.into_iter().filter(|c| c.is_component).collect())
}

/// The containment `C_r ⊆ C_{r + e_x}` holds whenever `u_x > l_x` and
/// `v_x < 0`; returns the larger label in that case.
pub fn increment_containment(q: &Quiver, rs: &RankSequence, x: usize) -> Option<RankSequence> {
    if u_value(q, rs, x) > q.loop_count(x) as i64 && v_value(q, rs, x) < 0 {
        rs.incremented(x)
    } else {
        None
    }
}

/// An irreducible `GL(d^x)`-stable subvariety of `rep_{A^x}(d^x_r)`,
/// identified by a caller-chosen name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSideComponent {
    pub algebra: AlgebraPresentation,
    pub split: NodeSplit,
    pub dims: DimensionVector,
    pub id: String,
    /// The generic `x_h`-rank, asserted by the caller.
    pub head_rank: usize,
}

/// The saturated label `GL(d(x)) . C` on `(A, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitComponentLabel {
    pub split_side: SplitSideComponent,
    pub vertex: String,
    pub dims: DimensionVector,
    pub x_rank: usize,
}

/// Saturation is defined only for subvarieties of full `x_h`-rank `r = d^x(x_h)`.
pub fn saturate_component_label(c: &SplitSideComponent) -> Result<SplitComponentLabel> {
    let s = &c.split;
    c.dims.check_domain(c.algebra.quiver())?;
    let r = c.dims[s.head_index];
    if c.head_rank != r {
        return Err(Error::RankOutOfRange { vertex: s.head_name.clone(), rank: c.head_rank, max: r });
    }
    let dims = DimensionVector(
        (0..c.dims.len())
            .filter(|&y| y != s.head_index)
            .map(|y| if y == s.tail_index { c.dims[y] + r } else { c.dims[y] })
            .collect(),
    );
    Ok(SplitComponentLabel { split_side: c.clone(), vertex: s.vertex.clone(), dims, x_rank: r })
}

/// Inverse of [`saturate_component_label`]: intersect with `rep_{A^x}(d^x_r)`.
pub fn intersect_component_label(label: &SplitComponentLabel) -> SplitSideComponent {
    label.split_side.clone()
}

/// `GL(d(x)) . C` is a component exactly when `t_{x_t}` is injective at a
/// generic point of `C`; `witness` plays the generic point.
pub fn lemma_component_criterion<F: Field>(
    split_quiver: &Quiver,
    split: &NodeSplit,
    witness: &Representation<F>,
) -> Result<bool> {
    witness.dims().check_domain(split_quiver)?;
    let t = t_matrix(split_quiver, witness, split.tail_index);
    Ok(t.rank() == witness.dims()[split.tail_index])
}
